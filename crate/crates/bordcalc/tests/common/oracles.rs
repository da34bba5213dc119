//! Independent reference computations used by the acceptance suite. None of
//! these call the library routine they check.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;

use bordcalc_core::algebra::FrobAlgebra;
use bordcalc_core::linalg::{Infeasibility, Matrix};
use bordcalc_core::linear::{LinearDiagram, RegionKind};
use bordcalc_core::term::{Cell, Morph};
use bordcalc_core::Q;
use num_traits::{One, Zero};

/// The worked linear diagram.
pub const FIGURE: &str = "(5 cap) [24][35] (5 cup) [] (3 cup) [] (3 cap) [123] (3 cup)";

fn mul(a: &FrobAlgebra, x: &[Q], y: &[Q]) -> Vec<Q> {
    let n = a.dim;
    let mut out = vec![Q::zero(); n];
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            for k in 0..n {
                out[k] += &x[i] * &y[j] * &a.mult[i][j][k];
            }
        }
    }
    out
}

fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|k| if k == i { Q::one() } else { Q::zero() }).collect()
}

/// `λ(H^g)` with `H = Σ_ij e_ij x_i x_j`, from the raw structure constants.
pub fn lambda_handle_power(a: &FrobAlgebra, g: usize) -> Q {
    let n = a.dim;
    let e = a.e.as_ref().expect("e required");
    let lambda = a.lambda.as_ref().expect("λ required");
    let mut h = vec![Q::zero(); n];
    for i in 0..n {
        for j in 0..n {
            if !e[(i, j)].is_zero() {
                let p = mul(a, &unit_vec(n, i), &unit_vec(n, j));
                for k in 0..n {
                    h[k] += &e[(i, j)] * &p[k];
                }
            }
        }
    }
    let mut acc = a.unit.clone();
    for _ in 0..g {
        acc = mul(a, &acc, &h);
    }
    acc.iter().zip(lambda).map(|(x, l)| x * l).sum()
}

/// Checks an infeasibility certificate for `Σ_ij e_ij x_i z x_j = 1`:
/// `y M = 0` and `y · 1 = 1`, with `M` rebuilt from the structure constants.
pub fn certifies_infeasible(a: &FrobAlgebra, c: &Infeasibility) -> bool {
    let n = a.dim;
    let e = a.e.as_ref().expect("e required");
    let y = &c.left_witness;
    if y.len() != n {
        return false;
    }
    for col in 0..n {
        let z = unit_vec(n, col);
        let mut img = vec![Q::zero(); n];
        for i in 0..n {
            for j in 0..n {
                if !e[(i, j)].is_zero() {
                    let p = mul(a, &mul(a, &unit_vec(n, i), &z), &unit_vec(n, j));
                    for k in 0..n {
                        img[k] += &e[(i, j)] * &p[k];
                    }
                }
            }
        }
        let dot: Q = y.iter().zip(&img).map(|(u, v)| u * v).sum();
        if !dot.is_zero() {
            return false;
        }
    }
    let rhs: Q = y.iter().zip(&a.unit).map(|(u, v)| u * v).sum();
    rhs == Q::one()
}

/// Rank by fraction-free row reduction on a copy.
pub fn rank(m: &Matrix) -> usize {
    let mut rows: Vec<Vec<Q>> = (0..m.rows).map(|r| (0..m.cols).map(|c| m[(r, c)].clone()).collect()).collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[rank][col];
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Component census of a linear diagram by walking along sheets.
///
/// Every sheet segment is a node: region `k` has a left side with `left`
/// slots and a right side with `right` slots. Walking alternates between
/// "across a region" and "across a separator" steps.
pub fn trace_census(d: &LinearDiagram) -> (usize, usize) {
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    struct Slot {
        region: usize,
        right_side: bool,
        sheet: usize,
    }
    let regions = &d.regions;
    let last = regions.len() - 1;
    // Partner of a slot inside its region.
    let within = |s: Slot| -> Slot {
        let r = regions[s.region];
        let (l, rt) = (r.left(), r.right());
        match (r.kind, s.right_side) {
            (RegionKind::Cap, true) if s.sheet >= l => Slot { sheet: if s.sheet == rt - 1 { rt - 2 } else { rt - 1 }, ..s },
            (RegionKind::Cup, false) if s.sheet >= rt => Slot { sheet: if s.sheet == l - 1 { l - 2 } else { l - 1 }, ..s },
            (_, side) => Slot { right_side: !side, ..s },
        }
    };
    // Partner across the neighbouring separator, if any.
    let across = |s: Slot| -> Option<Slot> {
        if s.right_side {
            (s.region < last).then(|| Slot { region: s.region + 1, right_side: false, sheet: d.separators[s.region][s.sheet] })
        } else if s.region > 0 {
            let sep = &d.separators[s.region - 1];
            let from = sep.iter().position(|&j| j == s.sheet).expect("permutation");
            Some(Slot { region: s.region - 1, right_side: true, sheet: from })
        } else {
            None
        }
    };
    let mut all = Vec::new();
    for (k, r) in regions.iter().enumerate() {
        for i in 0..r.left() {
            all.push(Slot { region: k, right_side: false, sheet: i });
        }
        for i in 0..r.right() {
            all.push(Slot { region: k, right_side: true, sheet: i });
        }
    }
    let mut seen = BTreeSet::new();
    let (mut circles, mut intervals) = (0, 0);
    // Open components first: start from every free end.
    let free: Vec<Slot> = all.iter().copied().filter(|&s| across(s).is_none()).collect();
    for start in free {
        if seen.contains(&start) {
            continue;
        }
        intervals += 1;
        let mut cur = start;
        loop {
            seen.insert(cur);
            let w = within(cur);
            seen.insert(w);
            match across(w) {
                Some(next) => cur = next,
                None => break,
            }
        }
    }
    for &start in &all {
        if seen.contains(&start) {
            continue;
        }
        circles += 1;
        let mut cur = start;
        while seen.insert(cur) {
            let w = within(cur);
            seen.insert(w);
            cur = across(w).expect("closed components have no free ends");
        }
    }
    (circles, intervals)
}

/// Every leaf constructor of the 1-cell and 2-cell languages.
pub const ALL_LEAF_KINDS: &[&str] = &[
    "2-gen", "id", "ac", "rc", "lc", "eta", "eps", "phi", "phi0", "assoc2", "l2", "r2", "beta2", "pi", "mu", "lam", "rho", "RR",
    "SS", "sig", "inv2", "1-gen", "I", "alpha", "l", "r", "beta", "inv",
];

fn morph_kinds(m: &Morph, out: &mut BTreeSet<String>) {
    let k = match m {
        Morph::Gen(_) => "1-gen",
        Morph::Id(_) => "I",
        Morph::Assoc(..) => "alpha",
        Morph::LUnit(_) => "l",
        Morph::RUnit(_) => "r",
        Morph::Braid(..) => "beta",
        Morph::Adj(x) => {
            morph_kinds(x, out);
            "inv"
        }
        Morph::Comp(a, b) | Morph::Tensor(a, b) => {
            morph_kinds(a, out);
            morph_kinds(b, out);
            return;
        }
    };
    out.insert(k.to_string());
}

/// Leaf constructors occurring in a term, including inside parameters.
pub fn leaf_kinds(t: &Cell, out: &mut BTreeSet<String>) {
    match t {
        Cell::Gen(_) => {
            out.insert("2-gen".into());
        }
        Cell::Struct(s) => {
            out.insert(s.dsl_name().to_string());
            for m in s.morph_params() {
                morph_kinds(m, out);
            }
        }
        Cell::Inv(x) => {
            out.insert("inv2".into());
            leaf_kinds(x, out);
        }
        Cell::VComp(v) => v.iter().for_each(|x| leaf_kinds(x, out)),
        Cell::HComp(a, b) | Cell::Tensor(a, b) => {
            leaf_kinds(a, out);
            leaf_kinds(b, out);
        }
    }
}

/// Runs a fixed set of CLI invocations twice and compares exit code, standard
/// output and standard error byte for byte. Returns the number of invocations.
pub fn cli_determinism(data: &Path) -> Result<usize, String> {
    let d = |rel: &str| data.join(rel).to_string_lossy().into_owned();
    let invocations: Vec<Vec<String>> = vec![
        vec!["check".into(), d("terms/torus.bc")],
        vec!["check".into(), d("terms/rel_unoriented_twist_ev_lhs.bc"), "--presentation".into(), "unoriented".into()],
        vec!["eval".into(), d("terms/torus.bc"), "--algebra".into(), d("algebras/m2q.alg")],
        vec!["eval".into(), d("terms/rel_oriented_morse1_lhs.bc"), "--algebra".into(), d("algebras/qz2.alg")],
        vec!["--format".into(), "lines".into(), "eval".into(), d("terms/leaf_beta2.bc"), "--algebra".into(), d("algebras/m2q.alg")],
        vec!["invariants".into(), d("terms/genus3.bc")],
        vec!["--format".into(), "lines".into(), "invariants".into(), d("terms/random_unoriented_00.bc")],
        vec!["verify".into(), "--algebra".into(), d("algebras/qx2.alg"), "--presentation".into(), "oriented".into()],
        vec!["verify".into(), "--algebra".into(), d("algebras/qz2.alg"), "--presentation".into(), "unoriented".into()],
        vec!["presentation".into(), "--dump".into(), "unoriented".into()],
        vec!["linear".into(), d("linear/figure.lin"), "--moves".into()],
        vec!["rewrite".into(), d("terms/rel_oriented_morse2_lhs.bc"), "--to".into(), d("terms/rel_oriented_morse2_rhs.bc"), "--depth".into(), "1".into()],
        vec!["check".into(), d("terms/does_not_exist.bc")],
    ];
    let exe = env!("CARGO_BIN_EXE_bordcalc");
    for args in &invocations {
        let run = || Command::new(exe).args(args).output().map_err(|e| format!("spawn {exe}: {e}"));
        let (a, b) = (run()?, run()?);
        if a.status.code() != b.status.code() || a.stdout != b.stdout || a.stderr != b.stderr {
            return Err(format!("CLI output differs between runs for {args:?}"));
        }
    }
    Ok(invocations.len())
}

/// An unoriented closed term denoting the projective plane, if encoded.
pub fn rp2_term() -> Option<Cell> {
    None
}
