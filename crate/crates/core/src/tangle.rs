//! Strictified 1-manifolds of morphism terms.
//!
//! A 1-cell term denotes a compact 1-manifold whose boundary sits on the
//! points of its source and target objects. Each component is either an arc
//! between two boundary points or a circle. Every arc and circle carries the
//! chain of elementary pieces it is glued from, which is what both the surface
//! reconstruction and the evaluator need.
//!
//! Arcs are kept sorted by their smaller endpoint (`Src` points before `Tgt`
//! points) and are directed: for points with a polarity (`pt+` travels from
//! source to target, `pt-` the other way) the direction is the orientation;
//! otherwise an arc runs from its smaller endpoint to its larger one.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::term::{Morph, Obj};
use crate::typing::GeneratingData;

/// A boundary point of a 1-cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Src(usize),
    Tgt(usize),
}

/// One elementary piece traversed along a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seg<P> {
    pub piece: P,
    /// True when the chain traverses the piece in the piece's own direction.
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc<P> {
    pub tail: End,
    pub head: End,
    /// Pieces from `tail` to `head`.
    pub chain: Vec<Seg<P>>,
}

impl<P> Arc<P> {
    pub fn min_end(&self) -> End {
        self.tail.min(self.head)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tangle<P> {
    pub src: Vec<String>,
    pub tgt: Vec<String>,
    pub arcs: Vec<Arc<P>>,
    /// Cyclic chains.
    pub circles: Vec<Vec<Seg<P>>>,
}

/// Orientation convention for object-point labels.
pub trait Polarity {
    /// `Some(true)` for points whose strands run source → target, `Some(false)` for
    /// the reverse, `None` for unoriented points.
    fn polarity(&self, label: &str) -> Option<bool>;
}

/// All points unoriented.
pub struct Unoriented;

impl Polarity for Unoriented {
    fn polarity(&self, _: &str) -> Option<bool> {
        None
    }
}

/// Chooses the tail of an arc with endpoints `a`, `b`.
pub fn tail_of(a: End, b: End, src: &[String], tgt: &[String], pol: &dyn Polarity) -> End {
    let p = |e: End| match e {
        End::Src(i) => pol.polarity(&src[i]),
        End::Tgt(j) => pol.polarity(&tgt[j]).map(|x| !x),
    };
    match (p(a), p(b)) {
        (Some(true), _) | (_, Some(false)) => a,
        (Some(false), _) | (_, Some(true)) => b,
        _ => a.min(b),
    }
}

fn rev_chain<P: Clone>(c: &[Seg<P>]) -> Vec<Seg<P>> {
    c.iter().rev().map(|s| Seg { piece: s.piece.clone(), forward: !s.forward }).collect()
}

impl<P: Clone> Tangle<P> {
    pub fn n_src(&self) -> usize {
        self.src.len()
    }

    pub fn n_tgt(&self) -> usize {
        self.tgt.len()
    }

    /// Number of components (arcs + circles).
    pub fn components(&self) -> usize {
        self.arcs.len() + self.circles.len()
    }

    /// Replaces every arc chain by a single piece naming the arc, and every circle
    /// likewise, so a later composition records which sub-component each piece
    /// came from.
    pub fn relabel<Q>(&self, arc: impl Fn(usize) -> Q, circle: impl Fn(usize) -> Q) -> Tangle<Q> {
        Tangle {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            arcs: self
                .arcs
                .iter()
                .enumerate()
                .map(|(i, a)| Arc { tail: a.tail, head: a.head, chain: vec![Seg { piece: arc(i), forward: true }] })
                .collect(),
            circles: (0..self.circles.len()).map(|k| vec![Seg { piece: circle(k), forward: true }]).collect(),
        }
    }

    fn sort_arcs(&mut self) {
        self.arcs.sort_by_key(Arc::min_end);
    }

    /// Builds a tangle from raw arcs with given chains, orienting and sorting them.
    pub fn from_arcs(src: Vec<String>, tgt: Vec<String>, raw: Vec<(End, End, Vec<Seg<P>>)>, pol: &dyn Polarity) -> Self {
        let mut arcs = Vec::with_capacity(raw.len());
        for (a, b, chain) in raw {
            let t = tail_of(a, b, &src, &tgt, pol);
            if t == a {
                arcs.push(Arc { tail: a, head: b, chain });
            } else {
                arcs.push(Arc { tail: b, head: a, chain: rev_chain(&chain) });
            }
        }
        let mut out = Tangle { src, tgt, arcs, circles: Vec::new() };
        out.sort_arcs();
        out
    }

    /// Composite tangle: `first` then `second` (their shared object is `first.tgt`).
    pub fn compose(first: &Tangle<P>, second: &Tangle<P>, pol: &dyn Polarity) -> Tangle<P> {
        assert_eq!(first.tgt.len(), second.src.len(), "middle objects differ");
        // Node ids: arcs of `first` are 0..n1, arcs of `second` are n1..
        let n1 = first.arcs.len();
        let arc = |id: usize| if id < n1 { &first.arcs[id] } else { &second.arcs[id - n1] };
        let total = n1 + second.arcs.len();
        // Which arc owns each endpoint.
        let mut f_src = vec![usize::MAX; first.src.len()];
        let mut f_mid = vec![usize::MAX; first.tgt.len()];
        let mut s_mid = vec![usize::MAX; second.src.len()];
        let mut s_tgt = vec![usize::MAX; second.tgt.len()];
        for (i, a) in first.arcs.iter().enumerate() {
            for e in [a.tail, a.head] {
                match e {
                    End::Src(k) => f_src[k] = i,
                    End::Tgt(k) => f_mid[k] = i,
                }
            }
        }
        for (i, a) in second.arcs.iter().enumerate() {
            for e in [a.tail, a.head] {
                match e {
                    End::Src(k) => s_mid[k] = n1 + i,
                    End::Tgt(k) => s_tgt[k] = n1 + i,
                }
            }
        }
        // Endpoint in the local coordinates of a node.
        #[derive(Clone, Copy, PartialEq, Eq)]
        enum Loc {
            Outer(End),
            Mid(usize, bool), // (index, on the `first` side)
        }
        let loc = |id: usize, e: End| -> Loc {
            if id < n1 {
                match e {
                    End::Src(k) => Loc::Outer(End::Src(k)),
                    End::Tgt(k) => Loc::Mid(k, true),
                }
            } else {
                match e {
                    End::Src(k) => Loc::Mid(k, false),
                    End::Tgt(k) => Loc::Outer(End::Tgt(k)),
                }
            }
        };
        let mut visited = vec![false; total];
        // Walks from node `id` entering at endpoint `enter`; returns chain and exit.
        let walk = |mut id: usize, mut enter: End, chain: &mut Vec<Seg<P>>, visited: &mut Vec<bool>| -> Option<End> {
            loop {
                if visited[id] {
                    return None;
                }
                visited[id] = true;
                let a = arc(id);
                let (exit, forward) = if a.tail == enter { (a.head, true) } else { (a.tail, false) };
                if forward {
                    chain.extend(a.chain.iter().cloned());
                } else {
                    chain.extend(rev_chain(&a.chain));
                }
                match loc(id, exit) {
                    Loc::Outer(e) => return Some(e),
                    Loc::Mid(k, true) => {
                        id = s_mid[k];
                        enter = End::Src(k);
                    }
                    Loc::Mid(k, false) => {
                        id = f_mid[k];
                        enter = End::Tgt(k);
                    }
                }
            }
        };
        let mut raw = Vec::new();
        let starts = (0..first.src.len())
            .map(|k| (End::Src(k), f_src[k], End::Src(k)))
            .chain((0..second.tgt.len()).map(|k| (End::Tgt(k), s_tgt[k], End::Tgt(k))));
        for (outer, id, local) in starts {
            if visited[id] {
                continue;
            }
            let mut chain = Vec::new();
            let exit = walk(id, local, &mut chain, &mut visited).expect("arc walk ends on the boundary");
            raw.push((outer, exit, chain));
        }
        let mut out = Tangle::from_arcs(first.src.clone(), second.tgt.clone(), raw, pol);
        out.circles.extend(first.circles.iter().cloned());
        out.circles.extend(second.circles.iter().cloned());
        for id in 0..total {
            if visited[id] {
                continue;
            }
            let mut chain = Vec::new();
            let start = arc(id).tail;
            let mut cur = id;
            let mut enter = start;
            // Follow the cycle until it returns to the start node.
            loop {
                visited[cur] = true;
                let a = arc(cur);
                let (exit, forward) = if a.tail == enter { (a.head, true) } else { (a.tail, false) };
                if forward {
                    chain.extend(a.chain.iter().cloned());
                } else {
                    chain.extend(rev_chain(&a.chain));
                }
                let (next, next_enter) = match loc(cur, exit) {
                    Loc::Mid(k, true) => (s_mid[k], End::Src(k)),
                    Loc::Mid(k, false) => (f_mid[k], End::Tgt(k)),
                    Loc::Outer(_) => unreachable!("closed component reached the boundary"),
                };
                if next == id && next_enter == start {
                    break;
                }
                cur = next;
                enter = next_enter;
            }
            out.circles.push(chain);
        }
        out
    }

    /// Side-by-side tangle; returns it together with, for each arc of the result,
    /// `(0, i)` or `(1, i)` naming its origin.
    pub fn tensor(a: &Tangle<P>, b: &Tangle<P>) -> (Tangle<P>, Vec<(usize, usize)>) {
        let (ns, nt) = (a.src.len(), a.tgt.len());
        let shift = |e: End| match e {
            End::Src(k) => End::Src(k + ns),
            End::Tgt(k) => End::Tgt(k + nt),
        };
        let mut tagged: Vec<((usize, usize), Arc<P>)> = a.arcs.iter().cloned().enumerate().map(|(i, x)| ((0, i), x)).collect();
        tagged.extend(b.arcs.iter().enumerate().map(|(i, x)| {
            ((1, i), Arc { tail: shift(x.tail), head: shift(x.head), chain: x.chain.clone() })
        }));
        tagged.sort_by_key(|(_, x)| x.min_end());
        let order = tagged.iter().map(|(t, _)| *t).collect();
        let mut src = a.src.clone();
        src.extend(b.src.iter().cloned());
        let mut tgt = a.tgt.clone();
        tgt.extend(b.tgt.iter().cloned());
        let mut circles = a.circles.clone();
        circles.extend(b.circles.iter().cloned());
        (Tangle { src, tgt, arcs: tagged.into_iter().map(|(_, x)| x).collect(), circles }, order)
    }
}

/// Description of a leaf piece handed to the payload factory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PieceInfo<'a> {
    /// Preorder index of the leaf among all leaves of the term.
    pub leaf: usize,
    /// Arc index within the leaf.
    pub arc: usize,
    /// Name of the 1-generator, `None` for structural leaves.
    pub generator: Option<&'a str>,
}

/// Arc pattern of a 1-generator: pairs of endpoints.
pub trait ArcShapes {
    fn shape(&self, generator: &str) -> Vec<(End, End)>;
}

fn labels(o: &Obj) -> Vec<String> {
    o.points().into_iter().map(String::from).collect()
}

/// Builds the tangle of a well-typed morphism term.
pub fn of_morph<P: Clone>(
    data: &GeneratingData,
    shapes: &dyn ArcShapes,
    pol: &dyn Polarity,
    m: &Morph,
    mk: &mut dyn FnMut(PieceInfo<'_>) -> P,
) -> Tangle<P> {
    let mut counter = 0;
    build(data, shapes, pol, m, mk, &mut counter)
}

fn build<P: Clone>(
    data: &GeneratingData,
    shapes: &dyn ArcShapes,
    pol: &dyn Polarity,
    m: &Morph,
    mk: &mut dyn FnMut(PieceInfo<'_>) -> P,
    counter: &mut usize,
) -> Tangle<P> {
    match m {
        Morph::Comp(a, b) => {
            let ta = build(data, shapes, pol, a, mk, counter);
            let tb = build(data, shapes, pol, b, mk, counter);
            Tangle::compose(&ta, &tb, pol)
        }
        Morph::Tensor(a, b) => {
            let ta = build(data, shapes, pol, a, mk, counter);
            let tb = build(data, shapes, pol, b, mk, counter);
            Tangle::tensor(&ta, &tb).0
        }
        leaf => {
            let leaf_id = *counter;
            *counter += 1;
            let (s, t) = data.morph_boundary(leaf).expect("tangle of an ill-typed term");
            let (src, tgt) = (labels(&s), labels(&t));
            let (pairs, gen) = leaf_pairs(shapes, leaf);
            let raw = pairs
                .into_iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    let p = mk(PieceInfo { leaf: leaf_id, arc: i, generator: gen });
                    (a, b, vec![Seg { piece: p, forward: true }])
                })
                .collect();
            Tangle::from_arcs(src, tgt, raw, pol)
        }
    }
}

fn leaf_pairs<'a>(shapes: &dyn ArcShapes, m: &'a Morph) -> (Vec<(End, End)>, Option<&'a str>) {
    let straight = |n: usize| (0..n).map(|i| (End::Src(i), End::Tgt(i))).collect::<Vec<_>>();
    match m {
        Morph::Gen(n) => (shapes.shape(n), Some(n.as_str())),
        Morph::Id(u) | Morph::LUnit(u) | Morph::RUnit(u) => (straight(u.points().len()), None),
        Morph::Assoc(u, v, w) => (straight(u.points().len() + v.points().len() + w.points().len()), None),
        Morph::Braid(u, v) => {
            let (nu, nv) = (u.points().len(), v.points().len());
            let mut out: Vec<_> = (0..nu).map(|i| (End::Src(i), End::Tgt(nv + i))).collect();
            out.extend((0..nv).map(|k| (End::Src(nu + k), End::Tgt(k))));
            (out, None)
        }
        Morph::Adj(x) => {
            let (pairs, g) = leaf_pairs(shapes, x);
            let swap = |e: End| match e {
                End::Src(k) => End::Tgt(k),
                End::Tgt(k) => End::Src(k),
            };
            (pairs.into_iter().map(|(a, b)| (swap(a), swap(b))).collect(), g)
        }
        Morph::Comp(..) | Morph::Tensor(..) => unreachable!("not a leaf"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typing::OneGen;

    struct Bord;
    impl ArcShapes for Bord {
        fn shape(&self, g: &str) -> Vec<(End, End)> {
            match g {
                "ev" => vec![(End::Src(0), End::Src(1))],
                "coev" => vec![(End::Tgt(0), End::Tgt(1))],
                _ => Vec::new(),
            }
        }
    }

    fn data() -> GeneratingData {
        let pt = Obj::gen("pt");
        let pp = Obj::tensor(pt.clone(), pt);
        GeneratingData::new(
            vec!["pt".into()],
            vec![
                OneGen { name: "ev".into(), src: pp.clone(), tgt: Obj::Unit },
                OneGen { name: "coev".into(), src: Obj::Unit, tgt: pp },
            ],
            Vec::new(),
        )
        .unwrap()
    }

    fn tangle(text: &str) -> Tangle<usize> {
        let d = data();
        let m = d.parse_morph(text).unwrap();
        let mut n = 0;
        of_morph(&d, &Bord, &Unoriented, &m, &mut |_| {
            n += 1;
            n - 1
        })
    }

    #[test]
    fn circle_from_elbows() {
        let t = tangle("(coev ; ev)");
        assert!(t.arcs.is_empty());
        assert_eq!(t.circles.len(), 1);
        assert_eq!(t.circles[0].len(), 2);
    }

    #[test]
    fn zigzag_is_one_strand() {
        let t = tangle("((((r[pt] ; (I[pt] ⊗ coev)) ; inv(alpha[pt,pt,pt])) ; (ev ⊗ I[pt])) ; l[pt])");
        assert_eq!(t.arcs.len(), 1);
        assert_eq!((t.arcs[0].tail, t.arcs[0].head), (End::Src(0), End::Tgt(0)));
        assert!(t.circles.is_empty());
    }

    #[test]
    fn two_circles_side_by_side_merge_with_braid() {
        let t = tangle("((coev ⊗ coev) ; (ev ⊗ ev))");
        assert_eq!(t.circles.len(), 2);
        let k = "((((((coev ⊗ coev) ; alpha[pt,pt,(pt ⊗ pt)]) ; (I[pt] ⊗ inv(alpha[pt,pt,pt]))) ; \
                 (I[pt] ⊗ (beta[pt,pt] ⊗ I[pt]))) ; (I[pt] ⊗ alpha[pt,pt,pt])) ; inv(alpha[pt,pt,(pt ⊗ pt)]))";
        let t = tangle(&alloc::format!("({k} ; (ev ⊗ ev))"));
        assert_eq!(t.circles.len(), 1);
        assert_eq!(t.circles[0].len(), 4 + 4 + 4 * 4);
    }
}
