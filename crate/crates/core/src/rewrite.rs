//! Rewriting 2-cell terms by the relations of a presentation.
//!
//! Matching is syntactic on terms whose vertical chains are flattened: a
//! relation side occurs at a node when the node equals it, or, for a side that
//! is a chain, when it is a contiguous block of a chain node.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::presentations::Presentation;
use crate::term::Cell;
use crate::typing::fmt_path;

/// One occurrence of a relation side inside a term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RewriteStep {
    pub relation: String,
    /// `true` rewrites lhs into rhs.
    pub forward: bool,
    /// Child-index path of the matched node.
    pub path: Vec<usize>,
    /// For chain sides: first index and length of the matched block.
    pub span: Option<(usize, usize)>,
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = if self.forward { "->" } else { "<-" };
        write!(f, "{} {dir} at {}", self.relation, fmt_path(&self.path))?;
        if let Some((s, k)) = self.span {
            write!(f, " block {s}..{}", s + k)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("step {0} does not match the term")]
    Stale(String),
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("boundaries differ: {0} vs {1}")]
    BoundaryMismatch(String, String),
    #[error("ill-typed term: {0}")]
    Type(#[from] crate::typing::TypeError),
}

/// Flattens nested chains and unwraps single-element chains.
pub fn canonical(c: &Cell) -> Cell {
    match c {
        Cell::VComp(v) => {
            let mut out = Vec::new();
            for x in v {
                match canonical(x) {
                    Cell::VComp(w) => out.extend(w),
                    y => out.push(y),
                }
            }
            if out.len() == 1 {
                out.pop().expect("one element")
            } else {
                Cell::VComp(out)
            }
        }
        Cell::HComp(a, b) => Cell::hc(canonical(a), canonical(b)),
        Cell::Tensor(a, b) => Cell::tensor(canonical(a), canonical(b)),
        Cell::Inv(x) => Cell::Inv(alloc::boxed::Box::new(canonical(x))),
        leaf => leaf.clone(),
    }
}

fn sides(p: &Presentation) -> Vec<(String, bool, Cell, Cell)> {
    let mut out = Vec::new();
    for r in &p.relations {
        let (l, rr) = (canonical(&r.lhs), canonical(&r.rhs));
        out.push((r.name.clone(), true, l.clone(), rr.clone()));
        out.push((r.name.clone(), false, rr, l));
    }
    out
}

fn visit(c: &Cell, path: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &Cell)) {
    f(path, c);
    match c {
        Cell::VComp(v) => {
            for (i, x) in v.iter().enumerate() {
                path.push(i);
                visit(x, path, f);
                path.pop();
            }
        }
        Cell::HComp(a, b) | Cell::Tensor(a, b) => {
            for (i, x) in [a, b].into_iter().enumerate() {
                path.push(i);
                visit(x, path, f);
                path.pop();
            }
        }
        _ => {}
    }
}

fn matches_at(node: &Cell, pattern: &Cell) -> Vec<Option<(usize, usize)>> {
    match (node, pattern) {
        (Cell::VComp(v), Cell::VComp(w)) if w.len() <= v.len() => (0..=v.len() - w.len())
            .filter(|&s| v[s..s + w.len()] == w[..])
            .map(|s| Some((s, w.len())))
            .collect(),
        _ if node == pattern => alloc::vec![None],
        _ => Vec::new(),
    }
}

/// All occurrences of relation sides in `t`, in both directions.
pub fn find_matches(t: &Cell, p: &Presentation) -> Vec<RewriteStep> {
    let t = canonical(t);
    let sides = sides(p);
    let mut out = Vec::new();
    visit(&t, &mut Vec::new(), &mut |path, node| {
        for (name, forward, pat, _) in &sides {
            for span in matches_at(node, pat) {
                out.push(RewriteStep { relation: name.clone(), forward: *forward, path: path.to_vec(), span });
            }
        }
    });
    out.sort();
    out.dedup();
    out
}

/// Applies a step, returning the rewritten (canonical) term.
pub fn apply(t: &Cell, step: &RewriteStep, p: &Presentation) -> Result<Cell, RewriteError> {
    let r = p.relation(&step.relation).ok_or_else(|| RewriteError::UnknownRelation(step.relation.clone()))?;
    let (from, to) = if step.forward { (&r.lhs, &r.rhs) } else { (&r.rhs, &r.lhs) };
    let (from, to) = (canonical(from), canonical(to));
    let mut t = canonical(t);
    let stale = || RewriteError::Stale(step.to_string());
    let node = t.at_mut(&step.path).ok_or_else(stale)?;
    match step.span {
        None => {
            if *node != from {
                return Err(stale());
            }
            *node = to;
        }
        Some((s, k)) => {
            let (Cell::VComp(v), Cell::VComp(w)) = (&mut *node, &from) else { return Err(stale()) };
            if s + k > v.len() || w.len() != k || v[s..s + k] != w[..] {
                return Err(stale());
            }
            let replacement = match to {
                Cell::VComp(x) => x,
                other => alloc::vec![other],
            };
            v.splice(s..s + k, replacement);
        }
    }
    Ok(canonical(&t))
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent(Vec<RewriteStep>),
    Unknown,
}

/// Search limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub depth: usize,
    pub max_visited: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { depth: 6, max_visited: 100_000 }
    }
}

/// Breadth-first search for a rewrite sequence from `t1` to `t2`.
pub fn equivalent_bounded(t1: &Cell, t2: &Cell, p: &Presentation, budget: Budget) -> Result<Equivalence, RewriteError> {
    let b1 = p.data.cell_boundary(t1)?;
    let b2 = p.data.cell_boundary(t2)?;
    if b1 != b2 {
        return Err(RewriteError::BoundaryMismatch(
            format!("{} => {}", b1.0, b1.1),
            format!("{} => {}", b2.0, b2.1),
        ));
    }
    let (start, goal) = (canonical(t1), canonical(t2));
    let goal_key = goal.to_string();
    let mut parent: BTreeMap<String, Option<(String, RewriteStep)>> = BTreeMap::new();
    parent.insert(start.to_string(), None);
    let trace = |parent: &BTreeMap<String, Option<(String, RewriteStep)>>| {
        let mut steps = Vec::new();
        let mut cur = goal_key.clone();
        while let Some(Some((prev, step))) = parent.get(&cur) {
            steps.push(step.clone());
            cur = prev.clone();
        }
        steps.reverse();
        steps
    };
    if start.to_string() == goal_key {
        return Ok(Equivalence::Equivalent(Vec::new()));
    }
    let mut frontier = VecDeque::from([start]);
    for _ in 0..budget.depth {
        let mut next = VecDeque::new();
        while let Some(t) = frontier.pop_front() {
            let key = t.to_string();
            for step in find_matches(&t, p) {
                let u = apply(&t, &step, p)?;
                let k = u.to_string();
                if parent.contains_key(&k) {
                    continue;
                }
                parent.insert(k.clone(), Some((key.clone(), step)));
                if k == goal_key {
                    return Ok(Equivalence::Equivalent(trace(&parent)));
                }
                if parent.len() >= budget.max_visited {
                    return Ok(Equivalence::Unknown);
                }
                next.push_back(u);
            }
        }
        frontier = next;
    }
    Ok(Equivalence::Unknown)
}

/// Distinct terms reachable in at most `depth` steps (including `t`).
pub fn reachable(t: &Cell, p: &Presentation, depth: usize) -> BTreeSet<String> {
    let mut seen = BTreeSet::from([canonical(t).to_string()]);
    let mut frontier = alloc::vec![canonical(t)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in &frontier {
            for s in find_matches(t, p) {
                if let Ok(u) = apply(t, &s, p) {
                    if seen.insert(u.to_string()) {
                        next.push(u);
                    }
                }
            }
        }
        frontier = next;
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{bord2_oriented, bord2_unoriented, genus_term, sphere_term};

    #[test]
    fn every_side_matches_itself_at_root() {
        for p in [bord2_oriented(), bord2_unoriented()] {
            for r in &p.relations {
                let m = find_matches(&r.lhs, &p);
                assert!(m.iter().any(|s| s.relation == r.name && s.forward && s.path.is_empty()), "{}", r.name);
                let out = apply(&r.lhs, m.iter().find(|s| s.relation == r.name && s.forward && s.path.is_empty()).unwrap(), &p).unwrap();
                assert_eq!(out, canonical(&r.rhs));
            }
        }
    }

    #[test]
    fn cusp_inversion_in_one_step() {
        let p = bord2_oriented();
        let r = p.relation("cusp_p.cusp_p_inv").unwrap();
        match equivalent_bounded(&r.lhs, &r.rhs, &p, Budget { depth: 1, max_visited: 1000 }).unwrap() {
            Equivalence::Equivalent(steps) => assert_eq!(steps.len(), 1),
            Equivalence::Unknown => panic!("expected a one-step proof"),
        }
        assert_eq!(
            equivalent_bounded(&r.lhs, &r.lhs, &p, Budget { depth: 0, max_visited: 1 }).unwrap(),
            Equivalence::Equivalent(Vec::new())
        );
    }

    #[test]
    fn torus_and_sphere_are_not_related() {
        let p = bord2_oriented();
        let res = equivalent_bounded(&genus_term(&p, 1), &sphere_term(), &p, Budget { depth: 3, max_visited: 5000 }).unwrap();
        assert_eq!(res, Equivalence::Unknown);
    }

    #[test]
    fn identity_on_unit_has_no_matches() {
        let p = bord2_unoriented();
        let t = p.data.parse_cell("id[I[1]]").unwrap();
        assert!(find_matches(&t, &p).is_empty());
    }

    #[test]
    fn nested_match_in_tensor_context() {
        let p = bord2_oriented();
        let r = p.relation("morse1").unwrap();
        let other = p.data.parse_cell("id[ev]").unwrap();
        let t = Cell::tensor(other.clone(), r.lhs.clone());
        let m: Vec<_> = find_matches(&t, &p).into_iter().filter(|s| s.relation == "morse1" && s.forward).collect();
        assert!(m.iter().any(|s| s.path == [1]));
        let step = m.iter().find(|s| s.path == [1]).unwrap();
        let u = apply(&t, step, &p).unwrap();
        assert_eq!(u, canonical(&Cell::tensor(other, r.rhs.clone())));
        let back = find_matches(&u, &p).into_iter().find(|s| s.relation == "morse1" && !s.forward && s.path == step.path).unwrap();
        assert_eq!(apply(&u, &back, &p).unwrap(), canonical(&t));
    }

    #[test]
    fn chain_block_match_inside_longer_chain() {
        let p = bord2_oriented();
        let r = p.relation("cusp_p.cusp_p_inv").unwrap();
        let (s, _) = p.data.cell_boundary(&r.lhs).unwrap();
        let id = Cell::id(s);
        let t = Cell::chain([id.clone(), r.lhs.clone(), id.clone()]);
        let m: Vec<_> = find_matches(&t, &p).into_iter().filter(|x| x.relation == r.name && x.forward).collect();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].span, Some((1, 2)));
        let u = apply(&t, &m[0], &p).unwrap();
        assert!(p.data.validate(&u).is_valid());
    }

    #[test]
    fn stale_steps_are_rejected() {
        let p = bord2_oriented();
        let r = p.relation("morse1").unwrap();
        let step = find_matches(&r.lhs, &p).into_iter().find(|s| s.relation == "morse1").unwrap();
        assert!(matches!(apply(&sphere_term(), &step, &p), Err(RewriteError::Stale(_))));
    }
}
