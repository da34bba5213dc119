//! Evaluation of 2-cell terms into linear maps over the rationals.
//!
//! A 1-cell `f` is sent to the space `V(f) = A^{⊗ arcs} ⊗ C^{⊗ circles}` where
//! `A` is the algebra and `C = A/[A,A]` its cocenter: every arc of the tangle of
//! `f` carries an algebra element read along the arc's canonical direction, and
//! every circle a cocenter class. Basis vectors of `V(f)` are index tuples
//! (arcs first, then circles, in tangle order).
//!
//! Vertical composition is composition of linear maps. For a horizontal
//! composite the input is split into the two factors (an element is placed on
//! the first piece of each composite arc, units elsewhere), both factors are
//! mapped, and the results are glued back by multiplying along the composite
//! arcs and circles. Reading a piece against its own direction applies the
//! star involution. Structural cells are identities on arcs and permute
//! circles.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Cocenter, FrobAlgebra, Vector};
use crate::linalg::Matrix;
use crate::presentations::{Presentation, Role};
use crate::tangle::{of_morph, End, PieceInfo, Tangle};
use crate::term::{Cell, Morph, StructCell};
use crate::typing::{GeneratingData, TypeError};
use crate::Q;

/// Sparse vector over basis tuples.
pub type Vect = BTreeMap<Vec<usize>, Q>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("ill-typed term: {0}")]
    Type(#[from] TypeError),
    #[error("algebra lacks required structure: {0}")]
    Missing(String),
    #[error("no value assigned to generator {0:?}")]
    Unassigned(String),
    #[error("inconsistent structural cell: {0}")]
    Structural(String),
}

/// Linear map assigned to a 2-generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMap {
    /// `1 ↦ [z]` into the circle.
    Cap,
    /// `[x] ↦ λ(x)` out of the circle.
    Cup,
    /// Inserts the copairing while cutting `ev ; coev` into two strands.
    Saddle,
    /// Inserts the copairing while cutting two strands into `ev ; coev`.
    Cosaddle,
    /// Identity on matching arcs.
    Identity,
}

/// Values of generators for one algebra.
#[derive(Clone, Debug)]
pub struct Assignment {
    pub algebra: FrobAlgebra,
    pub cocenter: Cocenter,
    /// Representative in `A` of the cap value.
    pub cap_element: Vector,
    pub two_cells: BTreeMap<String, GenMap>,
    /// `ev` as a `1 × n²` pairing matrix and `coev` as an `n² × 1` copairing.
    pub one_cells: BTreeMap<String, Matrix>,
    e_pairs: Vec<(Vector, Vector)>,
}

impl Assignment {
    pub fn dim_a(&self) -> usize {
        self.algebra.dim
    }

    pub fn dim_c(&self) -> usize {
        self.cocenter.dim()
    }

    fn star(&self, x: &[Q]) -> Vector {
        self.algebra.apply_star(x).expect("star checked when the assignment was built")
    }

    fn read(&self, x: Vector, forward: bool) -> Vector {
        if forward {
            x
        } else {
            self.star(&x)
        }
    }
}

/// Builds the standard assignment: elbows ↦ pairing/copairing, Morse generators
/// ↦ unit/counit/copairing insertions, cusp and symmetry generators ↦ identities.
pub fn standard_assignment(a: &FrobAlgebra, p: &Presentation) -> Result<Assignment, EvalError> {
    if a.lambda.is_none() || a.e.is_none() {
        return Err(EvalError::Missing("Frobenius data (lambda, e)".into()));
    }
    if !p.oriented && a.star.is_none() {
        return Err(EvalError::Missing("star (required for unoriented evaluation)".into()));
    }
    let n = a.dim;
    let mut two_cells = BTreeMap::new();
    for g in &p.data.two_gens {
        let m = match p.role(&g.name) {
            Some(Role::Cap) => GenMap::Cap,
            Some(Role::Cup) => GenMap::Cup,
            Some(Role::Saddle) => GenMap::Saddle,
            Some(Role::Cosaddle) => GenMap::Cosaddle,
            Some(_) => GenMap::Identity,
            None => return Err(EvalError::Unassigned(g.name.clone())),
        };
        two_cells.insert(g.name.clone(), m);
    }
    let mut one_cells = BTreeMap::new();
    one_cells.insert("ev".into(), a.pairing_matrix());
    let e = a.e.as_ref().expect("checked");
    let mut co = Matrix::zeros(n * n, 1);
    for i in 0..n {
        for j in 0..n {
            co[(i * n + j, 0)] = e[(i, j)].clone();
        }
    }
    one_cells.insert("coev".into(), co);
    Ok(Assignment {
        algebra: a.clone(),
        cocenter: a.cocenter(),
        cap_element: a.cap_element(),
        two_cells,
        one_cells,
        e_pairs: a.e_pairs(),
    })
}

/// Shape of `V(f)`: number of arc and circle factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Space {
    pub arcs: usize,
    pub circles: usize,
}

impl Space {
    fn of<P>(t: &Tangle<P>) -> Space {
        Space { arcs: t.arcs.len(), circles: t.circles.len() }
    }

    fn dims(&self, a: &Assignment) -> Vec<usize> {
        let mut d = vec![a.dim_a(); self.arcs];
        d.extend(core::iter::repeat(a.dim_c()).take(self.circles));
        d
    }
}

/// Value of a 2-cell term: a linear map `V(source) → V(target)` stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCellValue {
    pub src: Space,
    pub tgt: Space,
    /// Factor dimensions of the domain and codomain.
    pub src_dims: Vec<usize>,
    pub tgt_dims: Vec<usize>,
    /// Image of each domain basis tuple (zero entries omitted).
    pub columns: BTreeMap<Vec<usize>, Vect>,
}

fn tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        let mut next = Vec::with_capacity(out.len() * d);
        for t in &out {
            for i in 0..d {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn flat_index(dims: &[usize], t: &[usize]) -> usize {
    dims.iter().zip(t).fold(0, |acc, (d, i)| acc * d + i)
}

impl TwoCellValue {
    /// Dense matrix; tuple indices are mixed-radix with the first factor most significant.
    pub fn to_matrix(&self) -> Matrix {
        let rows = self.tgt_dims.iter().product();
        let cols = self.src_dims.iter().product();
        let mut m = Matrix::zeros(rows, cols);
        for (c, col) in &self.columns {
            let j = flat_index(&self.src_dims, c);
            for (r, x) in col {
                m[(flat_index(&self.tgt_dims, r), j)] = x.clone();
            }
        }
        m
    }

    /// The number a closed surface evaluates to.
    pub fn scalar(&self) -> Option<Q> {
        if !self.src_dims.is_empty() || !self.tgt_dims.is_empty() {
            return None;
        }
        Some(self.columns.get(&Vec::new()).and_then(|c| c.get(&Vec::new())).cloned().unwrap_or_else(Q::zero))
    }

    pub fn is_identity(&self) -> bool {
        self.src_dims == self.tgt_dims && self.to_matrix().is_identity()
    }
}

impl fmt::Display for TwoCellValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.scalar() {
            return write!(f, "{s}");
        }
        let m = self.to_matrix();
        for r in 0..m.rows {
            let row: Vec<String> = (0..m.cols).map(|c| format!("{}", m[(r, c)])).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Compiled evaluation tree
// ---------------------------------------------------------------------------

/// Piece label of a horizontally composed tangle: which factor and which
/// component of that factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lab {
    Arc(usize, usize),
    Circle(usize, usize),
}

/// Tag of a piece inside a structural cell boundary: morphism parameter,
/// generator-leaf ordinal within it, arc index within the leaf.
type Tag = Option<(usize, usize, usize)>;

enum Node {
    Gen {
        map: GenMap,
        src: Tangle<()>,
        tgt: Tangle<()>,
    },
    /// Identity on arcs; output circle `k` is input circle `circles[k].0`,
    /// read backwards when `circles[k].1`.
    Perm {
        arcs: usize,
        circles: Vec<(usize, bool)>,
    },
    Chain(Vec<Node>),
    H {
        a: Box<Node>,
        b: Box<Node>,
        src: Tangle<Lab>,
        tgt: Tangle<Lab>,
        a_src: Space,
        b_src: Space,
        a_tgt: Space,
        b_tgt: Space,
    },
    T {
        a: Box<Node>,
        b: Box<Node>,
        src_order: Vec<(usize, usize)>,
        tgt_order: Vec<(usize, usize)>,
        a_src: Space,
        a_tgt: Space,
    },
}

struct Compiler<'a> {
    p: &'a Presentation,
    asg: &'a Assignment,
}

fn count_gens(m: &Morph) -> usize {
    match m {
        Morph::Gen(_) => 1,
        Morph::Comp(a, b) | Morph::Tensor(a, b) => count_gens(a) + count_gens(b),
        _ => 0,
    }
}

/// Order in which the parameters of a structural cell occur (preorder) in its
/// source and target.
fn side_orders(s: &StructCell) -> (Vec<usize>, Vec<usize>) {
    match s {
        StructCell::Id(_) | StructCell::Rc(_) | StructCell::Lc(_) | StructCell::L2(_) | StructCell::R2(_) => {
            (vec![0], vec![0])
        }
        StructCell::Eta(_) => (vec![], vec![0]),
        StructCell::Eps(_) => (vec![0], vec![]),
        StructCell::Ac(..) => (vec![2, 1, 0], vec![2, 1, 0]),
        StructCell::Phi(..) => (vec![2, 3, 0, 1], vec![2, 0, 3, 1]),
        StructCell::Assoc2(..) => (vec![0, 1, 2], vec![0, 1, 2]),
        StructCell::Beta2(..) => (vec![0, 1], vec![1, 0]),
        _ => (vec![], vec![]),
    }
}

impl<'a> Compiler<'a> {
    fn data(&self) -> &GeneratingData {
        &self.p.data
    }

    fn plain(&self, m: &Morph) -> Tangle<()> {
        of_morph(self.data(), self.p.shapes(), self.p.polarity(), m, &mut |_| ())
    }

    fn compile(&self, c: &Cell) -> Result<Node, EvalError> {
        Ok(match c {
            Cell::Gen(name) => {
                let g = self.data().two_gen(name).ok_or_else(|| EvalError::Unassigned(name.clone()))?;
                let map = *self.asg.two_cells.get(name).ok_or_else(|| EvalError::Unassigned(name.clone()))?;
                Node::Gen { map, src: self.plain(&g.src), tgt: self.plain(&g.tgt) }
            }
            Cell::Struct(s) => self.structural(s, false)?,
            Cell::Inv(x) => match &**x {
                Cell::Struct(s) => self.structural(s, true)?,
                _ => return Err(EvalError::Structural("inverse of a non-structural cell".into())),
            },
            Cell::VComp(v) => Node::Chain(v.iter().map(|x| self.compile(x)).collect::<Result<_, _>>()?),
            Cell::HComp(x, y) => {
                let (f1, g1) = self.data().cell_boundary(x)?;
                let (f2, g2) = self.data().cell_boundary(y)?;
                let (tf1, tg1, tf2, tg2) = (self.plain(&f1), self.plain(&g1), self.plain(&f2), self.plain(&g2));
                let pol = self.p.polarity();
                let lab = |t: &Tangle<()>, side: usize| t.relabel(|i| Lab::Arc(side, i), |k| Lab::Circle(side, k));
                let src = Tangle::compose(&lab(&tf1, 0), &lab(&tf2, 1), pol);
                let tgt = Tangle::compose(&lab(&tg1, 0), &lab(&tg2, 1), pol);
                Node::H {
                    a: Box::new(self.compile(x)?),
                    b: Box::new(self.compile(y)?),
                    src,
                    tgt,
                    a_src: Space::of(&tf1),
                    b_src: Space::of(&tf2),
                    a_tgt: Space::of(&tg1),
                    b_tgt: Space::of(&tg2),
                }
            }
            Cell::Tensor(x, y) => {
                let (f1, g1) = self.data().cell_boundary(x)?;
                let (f2, g2) = self.data().cell_boundary(y)?;
                let (tf1, tg1, tf2, tg2) = (self.plain(&f1), self.plain(&g1), self.plain(&f2), self.plain(&g2));
                Node::T {
                    a: Box::new(self.compile(x)?),
                    b: Box::new(self.compile(y)?),
                    src_order: Tangle::tensor(&tf1, &tf2).1,
                    tgt_order: Tangle::tensor(&tg1, &tg2).1,
                    a_src: Space::of(&tf1),
                    a_tgt: Space::of(&tg1),
                }
            }
        })
    }

    fn structural(&self, s: &StructCell, inverse: bool) -> Result<Node, EvalError> {
        let (ts, _, circles) = structural_tangles(self.p, s, inverse)?;
        Ok(Node::Perm { arcs: ts.arcs.len(), circles })
    }
}

/// Piece payload of a structural cell boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Key {
    pub leaf: usize,
    pub arc: usize,
    pub tag: Tag,
}

/// Source and target tangles of a structural cell (swapped when `inverse`),
/// together with the circle correspondence: target circle `k` is source circle
/// `m[k].0`, traversed in the opposite direction when `m[k].1`.
#[allow(clippy::type_complexity)]
pub(crate) fn structural_tangles(
    p: &Presentation,
    s: &StructCell,
    inverse: bool,
) -> Result<(Tangle<Key>, Tangle<Key>, Vec<(usize, bool)>), EvalError> {
    let (src, tgt) = p.data.cell_boundary(&Cell::Struct(s.clone()))?;
    let params = s.morph_params();
    let (so, to) = side_orders(s);
    let tags_for = |order: &[usize]| -> Vec<(usize, usize)> {
        order.iter().flat_map(|&i| (0..count_gens(params[i])).map(move |k| (i, k))).collect()
    };
    let tagged = |m: &Morph, tags: &[(usize, usize)]| -> Tangle<Key> {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        of_morph(&p.data, p.shapes(), p.polarity(), m, &mut |info: PieceInfo<'_>| {
            let tag = info.generator.map(|_| {
                let next = seen.len();
                let k = *seen.entry(info.leaf).or_insert(next);
                let (param, ord) = tags[k];
                (param, ord, info.arc)
            });
            Key { leaf: info.leaf, arc: info.arc, tag }
        })
    };
    let ts = tagged(&src, &tags_for(&so));
    let tt = tagged(&tgt, &tags_for(&to));
    let (ts, tt) = if inverse { (tt, ts) } else { (ts, tt) };
    let ends = |t: &Tangle<Key>| t.arcs.iter().map(|a| (a.tail, a.head)).collect::<Vec<_>>();
    if ends(&ts) != ends(&tt) {
        return Err(EvalError::Structural(format!("{s}: arcs differ between source and target")));
    }
    let mut circles = Vec::new();
    for c in &tt.circles {
        let (tag, fwd) = c
            .iter()
            .find_map(|seg| seg.piece.tag.map(|t| (t, seg.forward)))
            .ok_or_else(|| EvalError::Structural(format!("{s}: circle without generator pieces")))?;
        let found = ts.circles.iter().enumerate().find_map(|(j, d)| {
            d.iter().find(|seg| seg.piece.tag == Some(tag)).map(|seg| (j, seg.forward != fwd))
        });
        circles.push(found.ok_or_else(|| EvalError::Structural(format!("{s}: unmatched circle")))?);
    }
    if circles.len() != ts.circles.len() {
        return Err(EvalError::Structural(format!("{s}: circle counts differ")));
    }
    Ok((ts, tt, circles))
}

// ---------------------------------------------------------------------------
// Application
// ---------------------------------------------------------------------------

struct Runner<'a> {
    asg: &'a Assignment,
    memo: RefCell<BTreeMap<(usize, Vec<usize>), Vect>>,
}

fn add_into(acc: &mut Vect, t: Vec<usize>, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(t).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        let key: Vec<usize> = acc.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).unwrap();
        acc.remove(&key);
    }
}

fn sparse(v: &[Q]) -> Vec<(usize, Q)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Expands a product of sparse factors into tuples.
fn expand(factors: &[Vec<(usize, Q)>]) -> Vec<(Vec<usize>, Q)> {
    let mut out = vec![(Vec::with_capacity(factors.len()), Q::one())];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for (t, c) in &out {
            for (i, x) in f {
                let mut u = t.clone();
                u.push(*i);
                next.push((u, c * x));
            }
        }
        out = next;
    }
    out
}

fn find_arc<P>(t: &Tangle<P>, a: End, b: End) -> (usize, End) {
    let i = t
        .arcs
        .iter()
        .position(|x| (x.tail == a && x.head == b) || (x.tail == b && x.head == a))
        .expect("generator boundary arc");
    (i, t.arcs[i].tail)
}

impl<'a> Runner<'a> {
    fn basis(&self, i: usize) -> Vector {
        self.asg.algebra.basis(i)
    }

    fn apply_vec(&self, node: &Node, id: &mut usize, v: &Vect) -> Vect {
        let start = *id;
        let mut out = Vect::new();
        for (t, c) in v {
            let mut local = start;
            let img = self.apply(node, &mut local, t);
            *id = local;
            for (u, x) in img {
                add_into(&mut out, u, x * c);
            }
        }
        if v.is_empty() {
            *id = start + node_size(node);
        }
        out
    }

    /// Image of a basis tuple; `id` is the preorder number of `node`, used as
    /// memo key, and is advanced past the subtree.
    fn apply(&self, node: &Node, id: &mut usize, t: &[usize]) -> Vect {
        let my = *id;
        let key = (my, t.to_vec());
        if let Some(v) = self.memo.borrow().get(&key) {
            *id += node_size(node);
            return v.clone();
        }
        *id += 1;
        let out = match node {
            Node::Gen { map, src, tgt } => self.generator(*map, src, tgt, t),
            Node::Perm { arcs, circles } => {
                let u: Vec<usize> = t[..*arcs].to_vec();
                let mut factors = Vec::new();
                for &(j, rev) in circles {
                    let c = t[arcs + j];
                    if rev {
                        let rep = self.asg.cocenter.reps[c].clone();
                        factors.push(sparse(&self.asg.cocenter.project(&self.asg.star(&rep))));
                    } else {
                        factors.push(vec![(c, Q::one())]);
                    }
                }
                let mut out = Vect::new();
                for (tail, c) in expand(&factors) {
                    let mut w = u.clone();
                    w.extend(tail);
                    add_into(&mut out, w, c);
                }
                out
            }
            Node::Chain(v) => {
                let mut cur = Vect::new();
                cur.insert(t.to_vec(), Q::one());
                for n in v {
                    cur = self.apply_vec(n, id, &cur);
                }
                cur
            }
            Node::H { a, b, src, tgt, a_src, b_src, a_tgt, b_tgt } => {
                let (ida, idb) = (*id, *id + node_size(a));
                *id += node_size(a) + node_size(b);
                self.hcomp(a, b, ida, idb, src, tgt, [*a_src, *b_src], [*a_tgt, *b_tgt], t)
            }
            Node::T { a, b, src_order, tgt_order, a_src, a_tgt } => {
                let (ida, idb) = (*id, *id + node_size(a));
                *id += node_size(a) + node_size(b);
                self.tensor(a, b, ida, idb, src_order, tgt_order, *a_src, *a_tgt, t)
            }
        };
        *id = my + node_size(node);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn generator(&self, map: GenMap, src: &Tangle<()>, tgt: &Tangle<()>, t: &[usize]) -> Vect {
        let a = &self.asg.algebra;
        let mut out = Vect::new();
        match map {
            GenMap::Cap => {
                for (i, x) in sparse(&self.asg.cocenter.project(&self.asg.cap_element)) {
                    add_into(&mut out, vec![i], x);
                }
            }
            GenMap::Cup => {
                let rep = &self.asg.cocenter.reps[t[0]];
                add_into(&mut out, Vec::new(), a.lambda_of(rep).expect("λ"));
            }
            GenMap::Identity => {
                debug_assert!(src.circles.is_empty() && tgt.circles.is_empty());
                out.insert(t.to_vec(), Q::one());
            }
            GenMap::Saddle | GenMap::Cosaddle => {
                // Reference directions: ev Src0→Src1, coev Tgt1→Tgt0,
                // s0 Src0→Tgt0, s1 Tgt1→Src1.
                let (s0, s1) = ((End::Src(0), End::Tgt(0)), (End::Tgt(1), End::Src(1)));
                let (ev, coev) = ((End::Src(0), End::Src(1)), (End::Tgt(1), End::Tgt(0)));
                let (ins, outs) = if map == GenMap::Saddle { ([ev, coev], [s0, s1]) } else { ([s0, s1], [ev, coev]) };
                let read = |tg: &Tangle<()>, r: (End, End), idx: &[usize]| {
                    let (i, tail) = find_arc(tg, r.0, r.1);
                    self.asg.read(self.basis(idx[i]), tail == r.0)
                };
                let x = read(src, ins[0], t);
                let y = read(src, ins[1], t);
                let (i0, tail0) = find_arc(tgt, outs[0].0, outs[0].1);
                let (i1, tail1) = find_arc(tgt, outs[1].0, outs[1].1);
                for (p, q) in &self.asg.e_pairs {
                    let u = self.asg.read(a.mul(&x, p), tail0 == outs[0].0);
                    let v = self.asg.read(a.mul(&y, q), tail1 == outs[1].0);
                    for (ui, uc) in sparse(&u) {
                        for (vi, vc) in sparse(&v) {
                            let mut w = vec![0; 2];
                            w[i0] = ui;
                            w[i1] = vi;
                            add_into(&mut out, w, &uc * &vc);
                        }
                    }
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn hcomp(
        &self,
        a: &Node,
        b: &Node,
        ida: usize,
        idb: usize,
        src: &Tangle<Lab>,
        tgt: &Tangle<Lab>,
        s: [Space; 2],
        g: [Space; 2],
        t: &[usize],
    ) -> Vect {
        let alg = &self.asg.algebra;
        let co = &self.asg.cocenter;
        let unit = sparse(&alg.unit);
        // Factors of V(f1) ⊗ V(f2), arcs then circles per side.
        let mut fac: [Vec<Vec<(usize, Q)>>; 2] = [
            vec![unit.clone(); s[0].arcs].into_iter().chain(vec![Vec::new(); s[0].circles]).collect(),
            vec![unit.clone(); s[1].arcs].into_iter().chain(vec![Vec::new(); s[1].circles]).collect(),
        ];
        let place = |fac: &mut [Vec<Vec<(usize, Q)>>; 2], lab: Lab, x: Vector, forward: bool| match lab {
            Lab::Arc(side, i) => fac[side][i] = sparse(&self.asg.read(x, forward)),
            Lab::Circle(..) => unreachable!("circles are not arc pieces"),
        };
        for (j, arc) in src.arcs.iter().enumerate() {
            let seg = &arc.chain[0];
            place(&mut fac, seg.piece, self.basis(t[j]), seg.forward);
        }
        let n_old = s[0].circles + s[1].circles;
        for (k, c) in src.circles.iter().enumerate() {
            let idx = t[src.arcs.len() + k];
            if k < n_old {
                match c[0].piece {
                    Lab::Circle(side, i) => fac[side][s[side].arcs + i] = vec![(idx, Q::one())],
                    Lab::Arc(..) => unreachable!("old circles come first"),
                }
            } else {
                place(&mut fac, c[0].piece, co.reps[idx].clone(), c[0].forward);
            }
        }
        let mut outs = [Vect::new(), Vect::new()];
        for (side, node, nid) in [(0, a, ida), (1, b, idb)] {
            for (tup, c) in expand(&fac[side]) {
                let mut local = nid;
                for (u, x) in self.apply(node, &mut local, &tup) {
                    add_into(&mut outs[side], u, x * &c);
                }
            }
        }
        // Glue.
        let mut out = Vect::new();
        for (t1, c1) in &outs[0] {
            for (t2, c2) in &outs[1] {
                let parts = [t1, t2];
                let elem = |lab: Lab, forward: bool| -> Vector {
                    match lab {
                        Lab::Arc(side, i) => self.asg.read(self.basis(parts[side][i]), forward),
                        Lab::Circle(..) => unreachable!(),
                    }
                };
                let product = |chain: &[crate::tangle::Seg<Lab>]| -> Vector {
                    let mut acc = alg.unit.clone();
                    for seg in chain {
                        acc = alg.mul(&acc, &elem(seg.piece, seg.forward));
                    }
                    acc
                };
                let mut factors = Vec::new();
                for arc in &tgt.arcs {
                    factors.push(sparse(&product(&arc.chain)));
                }
                for (k, c) in tgt.circles.iter().enumerate() {
                    if k < g[0].circles + g[1].circles {
                        match c[0].piece {
                            Lab::Circle(side, i) => factors.push(vec![(parts[side][g[side].arcs + i], Q::one())]),
                            Lab::Arc(..) => unreachable!(),
                        }
                    } else {
                        factors.push(sparse(&co.project(&product(c))));
                    }
                }
                let c12 = c1 * c2;
                for (tup, x) in expand(&factors) {
                    add_into(&mut out, tup, x * &c12);
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn tensor(
        &self,
        a: &Node,
        b: &Node,
        ida: usize,
        idb: usize,
        src_order: &[(usize, usize)],
        tgt_order: &[(usize, usize)],
        a_src: Space,
        a_tgt: Space,
        t: &[usize],
    ) -> Vect {
        let n_arcs = src_order.len();
        let mut parts = [Vec::new(), Vec::new()];
        let mut arcs = [vec![0; 0], vec![0; 0]];
        let na = src_order.iter().filter(|o| o.0 == 0).count();
        arcs[0] = vec![0; na];
        arcs[1] = vec![0; n_arcs - na];
        for (j, &(side, i)) in src_order.iter().enumerate() {
            arcs[side][i] = t[j];
        }
        let circ = &t[n_arcs..];
        parts[0] = arcs[0].clone();
        parts[0].extend_from_slice(&circ[..a_src.circles]);
        parts[1] = arcs[1].clone();
        parts[1].extend_from_slice(&circ[a_src.circles..]);
        let mut la = ida;
        let oa = self.apply(a, &mut la, &parts[0]);
        let mut lb = idb;
        let ob = self.apply(b, &mut lb, &parts[1]);
        let mut out = Vect::new();
        let na_t = a_tgt.arcs;
        for (u1, c1) in &oa {
            for (u2, c2) in &ob {
                let mut w = Vec::with_capacity(u1.len() + u2.len());
                for &(side, i) in tgt_order {
                    w.push(if side == 0 { u1[i] } else { u2[i] });
                }
                w.extend_from_slice(&u1[na_t..]);
                w.extend_from_slice(&u2[tgt_order.len() - na_t..]);
                add_into(&mut out, w, c1 * c2);
            }
        }
        out
    }
}

fn node_size(n: &Node) -> usize {
    1 + match n {
        Node::Gen { .. } | Node::Perm { .. } => 0,
        Node::Chain(v) => v.iter().map(node_size).sum(),
        Node::H { a, b, .. } | Node::T { a, b, .. } => node_size(a) + node_size(b),
    }
}

/// Evaluates a 2-cell term.
pub fn evaluate(t: &Cell, p: &Presentation, asg: &Assignment) -> Result<TwoCellValue, EvalError> {
    let (s, g) = p.data.cell_boundary(t)?;
    let comp = Compiler { p, asg };
    let node = comp.compile(t)?;
    let (ts, tg) = (comp.plain(&s), comp.plain(&g));
    let (src, tgt) = (Space::of(&ts), Space::of(&tg));
    let (src_dims, tgt_dims) = (src.dims(asg), tgt.dims(asg));
    let runner = Runner { asg, memo: RefCell::new(BTreeMap::new()) };
    let mut columns = BTreeMap::new();
    for tup in tuples(&src_dims) {
        let mut id = 0;
        let col = runner.apply(&node, &mut id, &tup);
        if !col.is_empty() {
            columns.insert(tup, col);
        }
    }
    Ok(TwoCellValue { src, tgt, src_dims, tgt_dims, columns })
}

/// Per-relation outcome of [`verify_presentation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

/// Evaluates both sides of every relation and compares them exactly.
pub fn verify_presentation(a: &FrobAlgebra, p: &Presentation) -> Result<Vec<RelationCheck>, EvalError> {
    let asg = standard_assignment(a, p)?;
    let mut out = Vec::new();
    for r in &p.relations {
        let l = evaluate(&r.lhs, p, &asg)?;
        let rr = evaluate(&r.rhs, p, &asg)?;
        out.push(RelationCheck { name: r.name.clone(), holds: l == rr });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{closed_value_extended, m2q, rationals, test_algebras};
    use crate::linalg::q;
    use crate::presentations::{bord2_oriented, bord2_unoriented, genus_term, sphere_term};

    #[test]
    fn sphere_over_rationals() {
        let p = bord2_oriented();
        let a = rationals();
        let asg = standard_assignment(&a, &p).unwrap();
        let v = evaluate(&sphere_term(), &p, &asg).unwrap();
        assert_eq!(v.scalar(), Some(q(1)));
    }

    #[test]
    fn identity_cells_are_identities() {
        let p = bord2_oriented();
        let asg = standard_assignment(&m2q(), &p).unwrap();
        for text in ["id[ev]", "id[coev]", "id[(coev ; ev)]", "id[(ev ; coev)]"] {
            let c = p.data.parse_cell(text).unwrap();
            assert!(evaluate(&c, &p, &asg).unwrap().is_identity(), "{text}");
        }
    }

    #[test]
    fn relations_hold_for_separable_algebras() {
        for p in [bord2_oriented(), bord2_unoriented()] {
            for a in test_algebras() {
                let checks = verify_presentation(&a, &p).unwrap();
                let failed: Vec<_> = checks.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect();
                if a.name == "Qx2" {
                    assert!(!failed.is_empty());
                } else {
                    assert!(failed.is_empty(), "{} {}: {:?}", p.name, a.name, failed);
                }
            }
        }
    }

    #[test]
    fn closed_surfaces_match_extended_oracle() {
        let p = bord2_oriented();
        for a in test_algebras() {
            let asg = standard_assignment(&a, &p).unwrap();
            for g in 0..4 {
                let v = evaluate(&genus_term(&p, g), &p, &asg).unwrap();
                assert_eq!(v.scalar().unwrap(), closed_value_extended(&a, g), "{} g={g}", a.name);
            }
        }
    }
}
