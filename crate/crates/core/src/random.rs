//! Random valid 2-cell terms for property tests.
//!
//! Randomness is supplied by the caller as a chooser `n ↦ k ∈ [0, n)`, so the
//! crate itself needs no random number generator.

use alloc::vec::Vec;

use crate::presentations::{whisker, Builder, Presentation};
use crate::term::{Cell, Morph, StructCell};

/// Caller-supplied choice: returns an index below its argument (which is ≥ 1).
pub type Chooser<'a> = &'a mut dyn FnMut(usize) -> usize;

fn paths(m: &Morph, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    if let Morph::Comp(a, b) | Morph::Tensor(a, b) = m {
        for (i, x) in [a, b].into_iter().enumerate() {
            prefix.push(i);
            paths(x, prefix, out);
            prefix.pop();
        }
    }
}

/// Cells that can be placed on top of a 1-cell: 2-generators, both sides of
/// every relation, and unitor cells that expose identity 1-cells.
fn catalogue(p: &Presentation) -> Vec<Cell> {
    let mut out: Vec<Cell> = p.data.two_gens.iter().map(|g| Cell::gen(&g.name)).collect();
    for r in &p.relations {
        out.push(r.lhs.clone());
        out.push(r.rhs.clone());
    }
    out
}

fn options(p: &Presentation, cat: &[(Cell, Morph)], cur: &Morph) -> Vec<(Vec<usize>, Cell)> {
    let mut ps = Vec::new();
    paths(cur, &mut Vec::new(), &mut ps);
    let mut out = Vec::new();
    for path in ps {
        let here = cur.at(&path).expect("enumerated path");
        for (c, src) in cat {
            if src == here {
                out.push((path.clone(), c.clone()));
            }
        }
        for s in [StructCell::Rc(here.clone()), StructCell::Lc(here.clone())] {
            for c in [Cell::inv(s.clone()), Cell::st(s)] {
                if let Ok((src, _)) = p.data.cell_boundary(&c) {
                    if &src == here {
                        out.push((path.clone(), c));
                    }
                }
            }
        }
    }
    out
}

/// A random chain of whiskered steps with at most `max_leaves` leaves.
pub fn random_chain(p: &Presentation, max_leaves: usize, steps: usize, choose: Chooser<'_>) -> Cell {
    let cat: Vec<(Cell, Morph)> = catalogue(p)
        .into_iter()
        .filter_map(|c| p.data.cell_boundary(&c).ok().map(|(s, _)| (c, s)))
        .collect();
    let start = cat[choose(cat.len())].1.clone();
    let mut b = Builder::new(&p.data, start);
    let mut size = 0;
    for _ in 0..steps {
        let opts = options(p, &cat, b.current());
        if opts.is_empty() {
            break;
        }
        let (path, c) = opts[choose(opts.len())].clone();
        let added = whisker(b.current(), &path, c.clone()).expect("valid path").size();
        if size + added > max_leaves {
            continue;
        }
        b.apply(&path, c).expect("option matches its source");
        size += added;
    }
    b.finish()
}

/// A random term: usually a chain, sometimes a tensor product of two.
pub fn random_term(p: &Presentation, max_leaves: usize, choose: Chooser<'_>) -> Cell {
    if max_leaves >= 8 && choose(5) == 0 {
        let half = max_leaves / 2;
        let a = random_term(p, half, choose);
        let b = random_term(p, max_leaves - a.size(), choose);
        if a.size() + b.size() <= max_leaves {
            return Cell::tensor(a, b);
        }
        return a;
    }
    let steps = 1 + choose(6);
    random_chain(p, max_leaves, steps, choose)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{bord2_oriented, bord2_unoriented};

    #[test]
    fn random_terms_are_valid_and_small() {
        let mut state: u64 = 7;
        let mut choose = |n: usize| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as usize) % n
        };
        for p in [bord2_oriented(), bord2_unoriented()] {
            for _ in 0..40 {
                let t = random_term(&p, 30, &mut choose);
                assert!(p.data.validate(&t).is_valid(), "{t}");
                assert!(t.size() <= 30, "{}", t.size());
            }
        }
    }
}
