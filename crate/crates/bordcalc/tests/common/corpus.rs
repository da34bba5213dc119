//! The sample inputs under `data/`: term files, algebra files and linear
//! diagrams. Shared by the `make_corpus` example and the test suite.

#![allow(dead_code)]

use bordcalc_core::algebra::{dual_numbers, group_algebra_z2, m2q, q_times_q, rationals, FrobAlgebra};
use bordcalc_core::algfile;
use bordcalc_core::presentations::{bord2_oriented, bord2_unoriented, forget_orientation, genus_term, sphere_term, Presentation};
use bordcalc_core::random::random_term;
use bordcalc_core::term::Cell;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for the random members of the corpus.
pub const SEED: u64 = 20_240_601;

/// Structural 2-cell leaves, one per constructor, over the oriented points.
pub const LEAVES: &[(&str, &str)] = &[
    ("id", "id[ev]"),
    ("ac", "ac[ev,coev,ev]"),
    ("rc", "rc[ev]"),
    ("lc", "lc[ev]"),
    ("eta", "eta[beta[pt+,pt-]]"),
    ("eps", "eps[beta[pt+,pt-]]"),
    ("phi", "phi[(coev,I[pt+]),(ev,I[pt+])]"),
    ("phi0", "phi0[pt+,pt-]"),
    ("assoc2", "assoc2[ev,coev,I[pt+]]"),
    ("l2", "l2[ev]"),
    ("r2", "r2[ev]"),
    ("beta2", "beta2[ev,coev]"),
    ("pi", "pi[pt+,pt-,pt+,pt-]"),
    ("mu", "mu[pt+,pt-]"),
    ("lam", "lam[pt+,pt-]"),
    ("rho", "rho[pt+,pt-]"),
    ("RR", "RR[pt+,pt-,pt+]"),
    ("SS", "SS[pt+,pt-,pt+]"),
    ("sig", "sig[pt+,pt-]"),
    ("inv2", "inv2(sig[pt+,pt-])"),
    ("unitors", "((id[r[pt+]] (*) id[I[pt-]]) # id[(alpha[pt+,1,pt-] ; (I[pt+] (*) l[pt-]))])"),
];

fn term_file(presentation: &str, comment: &str, t: &Cell) -> String {
    format!("// {comment}\n// presentation: {presentation}\n{t}\n")
}

fn algebras() -> Vec<(&'static str, FrobAlgebra)> {
    vec![
        ("q", rationals()),
        ("qxq", q_times_q()),
        ("m2q", m2q()),
        ("qz2", group_algebra_z2()),
        ("qx2", dual_numbers()),
    ]
}

/// Random linear diagram with about `len` regions.
pub fn random_diagram(rng: &mut ChaCha8Rng, len: usize) -> String {
    use bordcalc_core::linear::{LinearDiagram, Region, RegionKind};
    let mut n = rng.gen_range(0..4usize);
    let mut regions = Vec::new();
    let mut seps = Vec::new();
    for k in 0..len {
        let kind = match rng.gen_range(0..3) {
            0 => RegionKind::Cap,
            1 if n >= 2 => RegionKind::Cup,
            _ => RegionKind::Plain,
        };
        let r = match kind {
            RegionKind::Cap => Region { sheets: n + 2, kind },
            _ => Region { sheets: n, kind },
        };
        if k > 0 {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                if rng.gen_bool(0.5) {
                    p.swap(i, rng.gen_range(0..=i));
                }
            }
            seps.push(p);
        }
        n = r.right();
        regions.push(r);
    }
    LinearDiagram::new(regions, seps).expect("generated diagrams are well formed").to_string()
}

/// All corpus files as `(relative path, contents)`, in a fixed order.
pub fn generate() -> Vec<(String, String)> {
    let mut out = Vec::new();
    let ori = bord2_oriented();
    let unori = bord2_unoriented();
    let mut push = |path: String, text: String| out.push((path, text));

    push("terms/sphere.bc".into(), term_file("oriented", "birth then death", &sphere_term()));
    for g in 1..=4 {
        let name = if g == 1 { "torus".to_string() } else { format!("genus{g}") };
        push(format!("terms/{name}.bc"), term_file("oriented", &format!("closed surface of genus {g}"), &genus_term(&ori, g)));
    }
    push("terms/torus_unoriented.bc".into(), term_file("unoriented", "genus 1 over the unoriented points", &genus_term(&unori, 1)));
    push("terms/forget_torus.bc".into(), term_file("unoriented", "image of the torus under forgetting orientation", &forget_orientation(&genus_term(&ori, 1))));

    for (pname, p) in [("oriented", &ori), ("unoriented", &unori)] {
        for r in &p.relations {
            for (side, t) in [("lhs", &r.lhs), ("rhs", &r.rhs)] {
                push(format!("terms/rel_{pname}_{}_{side}.bc", r.name.replace('.', "_")), term_file(pname, &format!("relation {} ({side})", r.name), t));
            }
        }
    }
    for (name, text) in LEAVES {
        let t = bordcalc_core::parse::cell(text).expect("leaf term parses");
        push(format!("terms/leaf_{name}.bc"), term_file("oriented", &format!("structural leaf {name}"), &t));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let random_terms = |p: &Presentation, pname: &str, count: usize, rng: &mut ChaCha8Rng, push: &mut dyn FnMut(String, String)| {
        for k in 0..count {
            let t = random_term(p, 24, &mut |n| rng.gen_range(0..n));
            push(format!("terms/random_{pname}_{k:02}.bc"), term_file(pname, &format!("random term {k}"), &t));
        }
    };
    random_terms(&ori, "oriented", 6, &mut rng, &mut push);
    random_terms(&unori, "unoriented", 4, &mut rng, &mut push);

    for (name, a) in algebras() {
        push(format!("algebras/{name}.alg"), algfile::print(&a));
    }

    push("linear/figure.lin".into(), "// worked example\n(5 cap) [24][35] (5 cup) [] (3 cup) [] (3 cap) [123] (3 cup)\n".into());
    for k in 0..4 {
        let len = 3 + k;
        push(format!("linear/random_{k:02}.lin"), format!("{}\n", random_diagram(&mut rng, len)));
    }
    out
}
