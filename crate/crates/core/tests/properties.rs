//! Property tests over randomly generated terms and linear diagrams.

use bordcalc_core::algebra::q_times_q;
use bordcalc_core::eval::{evaluate, standard_assignment};
use bordcalc_core::linear::{LinearDiagram, LinearMove, Region, RegionKind};
use bordcalc_core::presentations::{bord2_oriented, bord2_unoriented, forget_orientation, Presentation};
use bordcalc_core::random::random_term;
use bordcalc_core::rewrite::{apply, find_matches};
use bordcalc_core::surface::invariants;
use bordcalc_core::term::Cell;
use bordcalc_core::{linear, parse};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn term_from_seed(p: &Presentation, seed: u64, max_leaves: usize) -> Cell {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_term(p, max_leaves, &mut |n| rng.gen_range(0..n))
}

fn diagram_from_choices(start: usize, choices: &[(u8, u64)]) -> LinearDiagram {
    let mut n = start;
    let mut regions = Vec::new();
    let mut seps = Vec::new();
    for (k, &(kind, perm_seed)) in choices.iter().enumerate() {
        let kind = match kind % 3 {
            0 => RegionKind::Cap,
            1 if n >= 2 => RegionKind::Cup,
            _ => RegionKind::Plain,
        };
        let r = Region { sheets: if kind == RegionKind::Cap { n + 2 } else { n }, kind };
        if k > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            seps.push(p);
        }
        n = r.right();
        regions.push(r);
    }
    LinearDiagram::new(regions, seps).expect("well formed")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn printed_terms_parse_back(seed in any::<u64>(), oriented in any::<bool>()) {
        let p = if oriented { bord2_oriented() } else { bord2_unoriented() };
        let t = term_from_seed(&p, seed, 16);
        let back = parse::cell(&t.to_string()).expect("printed term parses");
        prop_assert_eq!(&back, &t);
        prop_assert!(p.data.validate(&back).is_valid());
    }

    #[test]
    fn relation_steps_preserve_surface_and_value(seed in any::<u64>(), pick in any::<usize>()) {
        let p = bord2_oriented();
        let t = term_from_seed(&p, seed, 12);
        let steps = find_matches(&t, &p);
        prop_assume!(!steps.is_empty());
        let step = &steps[pick % steps.len()];
        let u = apply(&t, step, &p).expect("matched step applies");
        prop_assert_eq!(invariants(&t, &p).expect("valid"), invariants(&u, &p).expect("valid"));
        let asg = standard_assignment(&q_times_q(), &p).expect("separable");
        prop_assert_eq!(evaluate(&t, &p, &asg).expect("evaluates"), evaluate(&u, &p, &asg).expect("evaluates"));
    }

    #[test]
    fn forgetting_orientation_keeps_the_surface(seed in any::<u64>()) {
        let (ori, unori) = (bord2_oriented(), bord2_unoriented());
        let t = term_from_seed(&ori, seed, 16);
        let f = forget_orientation(&t);
        prop_assert!(unori.data.validate(&f).is_valid());
        prop_assert_eq!(invariants(&t, &ori).expect("valid"), invariants(&f, &unori).expect("valid"));
    }

    #[test]
    fn linear_moves_keep_the_census(start in 0usize..4, choices in prop::collection::vec((any::<u8>(), any::<u64>()), 1..7)) {
        let d = diagram_from_choices(start, &choices);
        let back = linear::parse(&d.to_string()).expect("printed diagram parses");
        prop_assert_eq!(&back, &d);
        let base = d.reconstruct_1manifold().expect("valid");
        for m in LinearMove::ALL {
            for pos in d.applicable(m) {
                let e = d.apply_move(m, pos).expect("applicable move applies");
                prop_assert_eq!(e.reconstruct_1manifold().expect("valid"), base.clone());
            }
        }
    }
}
