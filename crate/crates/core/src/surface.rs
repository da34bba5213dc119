//! Reconstruction of the surface denoted by a 2-cell term as a polygonal
//! complex, and its topological invariants.
//!
//! Every leaf of a term contributes polygons whose sides are the pieces of
//! its source and target tangles plus one vertical side per boundary point.
//! Generator leaves are disks (one polygon per boundary cycle); structural
//! leaves are product strips over arcs and annuli over matched circles.
//! Vertical composition glues the target pieces of one factor to the source
//! pieces of the next. Horizontal composition glues the vertical paths over
//! the shared middle object, through a connecting bigon because the two paths
//! may be subdivided differently.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::eval::{structural_tangles, EvalError};
use crate::presentations::{Presentation, Role};
use crate::tangle::{of_morph, End, Seg, Tangle};
use crate::term::{Cell, Morph};
use crate::typing::TypeError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("ill-typed term: {0}")]
    Type(#[from] TypeError),
    #[error("{0}")]
    Structural(String),
    #[error("complex is not a surface: {0}")]
    NotSurface(String),
    #[error("term does not denote a closed surface")]
    NotClosed,
    #[error("unknown generator {0:?}")]
    Unknown(String),
}

impl From<EvalError> for SurfaceError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Type(t) => SurfaceError::Type(t),
            other => SurfaceError::Structural(format!("{other}")),
        }
    }
}

/// Kind of an elementary polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// Disk contributed by a 2-generator.
    Generator(String),
    /// Product strip over an arc of a structural leaf.
    Strip,
    /// Product annulus over a circle of a structural leaf.
    Annulus,
    /// Bigon joining two vertical paths in a horizontal composite.
    Connector,
}

/// A polygon with an ordered cycle of sides (indices into [`CombSurface::glue`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub kind: PieceKind,
    pub sides: Vec<usize>,
}

/// Polygonal complex: sides are glued in pairs or left free.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CombSurface {
    pub pieces: Vec<Polygon>,
    /// Owning polygon and position of every side.
    pub owner: Vec<(usize, usize)>,
    /// Partner of every side: `(other, same)` where `same` means the start of
    /// one side is identified with the start of the other.
    pub glue: Vec<Option<(usize, bool)>>,
}

/// Invariants of one connected component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentInvariants {
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub boundary_circles: usize,
}

impl ComponentInvariants {
    /// Genus of an orientable component.
    pub fn genus(&self) -> Option<i64> {
        self.orientable.then(|| (2 - self.euler_characteristic - self.boundary_circles as i64) / 2)
    }

    /// Crosscap number of a non-orientable component.
    pub fn crosscaps(&self) -> Option<i64> {
        (!self.orientable).then(|| 2 - self.euler_characteristic - self.boundary_circles as i64)
    }
}

/// Component-wise invariants, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub components: Vec<ComponentInvariants>,
}

impl SurfaceInvariants {
    pub fn euler_characteristic(&self) -> i64 {
        self.components.iter().map(|c| c.euler_characteristic).sum()
    }

    pub fn orientable(&self) -> bool {
        self.components.iter().all(|c| c.orientable)
    }

    pub fn boundary_circles(&self) -> usize {
        self.components.iter().map(|c| c.boundary_circles).sum()
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_circles() == 0
    }

    /// Disjoint union.
    pub fn union(&self, other: &SurfaceInvariants) -> SurfaceInvariants {
        let mut components = self.components.clone();
        components.extend(other.components.iter().copied());
        components.sort();
        SurfaceInvariants { components }
    }
}

impl fmt::Display for SurfaceInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "components={};", self.components.len())?;
        for c in &self.components {
            write!(
                f,
                " [chi={} orientable={} boundary={}]",
                c.euler_characteristic, c.orientable, c.boundary_circles
            )?;
        }
        Ok(())
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl CombSurface {
    fn add(&mut self, kind: PieceKind, len: usize) -> Vec<usize> {
        let f = self.pieces.len();
        let sides: Vec<usize> = (self.glue.len()..self.glue.len() + len).collect();
        for (i, _) in sides.iter().enumerate() {
            self.owner.push((f, i));
            self.glue.push(None);
        }
        self.pieces.push(Polygon { kind, sides: sides.clone() });
        sides
    }

    fn join(&mut self, a: usize, b: usize, same: bool) {
        debug_assert!(self.glue[a].is_none() && self.glue[b].is_none() && a != b);
        self.glue[a] = Some((b, same));
        self.glue[b] = Some((a, same));
    }

    /// Corner index of the start (`end = false`) or end of a side.
    fn corner(&self, side: usize, end: bool, offsets: &[usize]) -> usize {
        let (f, i) = self.owner[side];
        let n = self.pieces[f].sides.len();
        offsets[f] + if end { (i + 1) % n } else { i }
    }

    /// Checks the gluing involution.
    pub fn check(&self) -> Result<(), SurfaceError> {
        for (a, g) in self.glue.iter().enumerate() {
            if let Some((b, same)) = *g {
                if b == a || self.glue.get(b).copied().flatten() != Some((a, same)) {
                    return Err(SurfaceError::NotSurface(format!("gluing of side {a} is not an involution")));
                }
            }
        }
        Ok(())
    }

    /// Components, Euler characteristic, orientability and boundary circles.
    pub fn invariants(&self) -> Result<SurfaceInvariants, SurfaceError> {
        self.check()?;
        let nf = self.pieces.len();
        let mut offsets = Vec::with_capacity(nf);
        let mut total = 0;
        for p in &self.pieces {
            offsets.push(total);
            total += p.sides.len();
        }
        // Vertices: corners identified across glued sides.
        let mut corners = Dsu::new(total);
        let mut faces = Dsu::new(nf);
        for (a, g) in self.glue.iter().enumerate() {
            if let Some((b, same)) = *g {
                let (s_a, e_a) = (self.corner(a, false, &offsets), self.corner(a, true, &offsets));
                let (s_b, e_b) = (self.corner(b, false, &offsets), self.corner(b, true, &offsets));
                if same {
                    corners.union(s_a, s_b);
                    corners.union(e_a, e_b);
                } else {
                    corners.union(s_a, e_b);
                    corners.union(e_a, s_b);
                }
                faces.union(self.owner[a].0, self.owner[b].0);
            }
        }
        // Orientation signs by propagation over gluings.
        let mut sign: Vec<Option<bool>> = vec![None; nf];
        let mut twisted: BTreeMap<usize, bool> = BTreeMap::new();
        for start in 0..nf {
            if sign[start].is_some() {
                continue;
            }
            sign[start] = Some(true);
            let mut stack = vec![start];
            while let Some(f) = stack.pop() {
                let sf = sign[f].expect("visited");
                for &a in &self.pieces[f].sides {
                    if let Some((b, same)) = self.glue[a] {
                        let g = self.owner[b].0;
                        // Coherent orientations traverse a glued side in opposite directions.
                        let want = if same { !sf } else { sf };
                        match sign[g] {
                            None => {
                                sign[g] = Some(want);
                                stack.push(g);
                            }
                            Some(x) if x != want => {
                                twisted.insert(faces.find(f), true);
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        let mut comps: BTreeMap<usize, (i64, i64, i64, Vec<usize>)> = BTreeMap::new();
        for f in 0..nf {
            let r = faces.find(f);
            comps.entry(r).or_insert((0, 0, 0, Vec::new())).2 += 1;
        }
        let mut vert_seen: BTreeMap<usize, usize> = BTreeMap::new();
        for f in 0..nf {
            for c in offsets[f]..offsets[f] + self.pieces[f].sides.len() {
                let v = corners.find(c);
                vert_seen.entry(v).or_insert(f);
            }
        }
        for (_, f) in vert_seen {
            comps.get_mut(&faces.find(f)).expect("component").0 += 1;
        }
        for (a, g) in self.glue.iter().enumerate() {
            let r = faces.find(self.owner[a].0);
            match g {
                Some((b, _)) if *b < a => {}
                Some(_) => comps.get_mut(&r).expect("component").1 += 1,
                None => {
                    let e = comps.get_mut(&r).expect("component");
                    e.1 += 1;
                    e.3.push(a);
                }
            }
        }
        let mut components = Vec::new();
        for (root, (v, e, f, free)) in comps {
            // Boundary circles: components of the graph of free sides.
            let mut bd = Dsu::new(total);
            for &a in &free {
                let s = corners.find(self.corner(a, false, &offsets));
                let t = corners.find(self.corner(a, true, &offsets));
                bd.union(s, t);
            }
            let mut roots: Vec<usize> = free.iter().map(|&a| bd.find(corners.find(self.corner(a, false, &offsets)))).collect();
            roots.sort_unstable();
            roots.dedup();
            // Each vertex on the boundary must meet exactly two free sides.
            let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
            for &a in &free {
                *degree.entry(corners.find(self.corner(a, false, &offsets))).or_default() += 1;
                *degree.entry(corners.find(self.corner(a, true, &offsets))).or_default() += 1;
            }
            if let Some((v, d)) = degree.iter().find(|(_, d)| **d != 2) {
                return Err(SurfaceError::NotSurface(format!("boundary vertex {v} meets {d} free sides")));
            }
            components.push(ComponentInvariants {
                euler_characteristic: v - e + f,
                orientable: !twisted.contains_key(&root),
                boundary_circles: roots.len(),
            });
        }
        components.sort();
        Ok(SurfaceInvariants { components })
    }
}

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

/// Piece of a tangle: leaf index within the 1-cell term and arc within the leaf.
type PieceId = (usize, usize);

/// Side carrying a tangle piece, with whether the side's traversal agrees
/// with the piece's own direction.
type Carrier = (usize, bool);

/// Partial surface of a 2-cell `f ⇒ g`.
struct Part {
    bottom: BTreeMap<PieceId, Carrier>,
    top: BTreeMap<PieceId, Carrier>,
    /// Vertical paths over source / target object points, bottom to top; the
    /// flag tells whether the side is traversed upwards by its polygon.
    side_src: Vec<Vec<(usize, bool)>>,
    side_tgt: Vec<Vec<(usize, bool)>>,
}

fn leaf_count(m: &Morph) -> usize {
    match m {
        Morph::Comp(a, b) | Morph::Tensor(a, b) => leaf_count(a) + leaf_count(b),
        _ => 1,
    }
}

fn shift(map: BTreeMap<PieceId, Carrier>, by: usize) -> BTreeMap<PieceId, Carrier> {
    map.into_iter().map(|((l, a), c)| ((l + by, a), c)).collect()
}

/// One step of a polygon boundary.
enum Step {
    Piece { bottom: bool, id: PieceId, along: bool },
    Vertical { end: End, up: bool },
}

struct Builder<'a> {
    p: &'a Presentation,
    s: CombSurface,
}

fn segs_steps<P: Copy + Into<PieceId>>(segs: &[Seg<P>], bottom: bool, reverse: bool) -> Vec<Step> {
    let mut out: Vec<Step> = segs
        .iter()
        .map(|g| Step::Piece { bottom, id: g.piece.into(), along: g.forward != reverse })
        .collect();
    if reverse {
        out.reverse();
    }
    out
}

#[derive(Clone, Copy)]
struct Pid(usize, usize);

impl From<Pid> for PieceId {
    fn from(p: Pid) -> PieceId {
        (p.0, p.1)
    }
}

impl From<crate::eval::Key> for PieceId {
    fn from(k: crate::eval::Key) -> PieceId {
        (k.leaf, k.arc)
    }
}

/// Boundary cycles through the arcs of a leaf: alternate bottom and top arcs
/// joined by verticals at shared endpoints.
fn arc_cycles<P: Copy + Into<PieceId>>(bot: &Tangle<P>, top: &Tangle<P>) -> Vec<Vec<Step>> {
    let mut done = [vec![false; bot.arcs.len()], vec![false; top.arcs.len()]];
    let mut out = Vec::new();
    for start in 0..bot.arcs.len() + top.arcs.len() {
        let (mut layer, mut i) = if start < bot.arcs.len() { (0, start) } else { (1, start - bot.arcs.len()) };
        if done[layer][i] {
            continue;
        }
        let tangles = [bot, top];
        let mut entry = tangles[layer].arcs[i].tail;
        let mut cycle = Vec::new();
        while !done[layer][i] {
            done[layer][i] = true;
            let arc = &tangles[layer].arcs[i];
            let reverse = entry != arc.tail;
            cycle.extend(segs_steps(&arc.chain, layer == 0, reverse));
            let exit = if reverse { arc.tail } else { arc.head };
            cycle.push(Step::Vertical { end: exit, up: layer == 0 });
            layer = 1 - layer;
            i = tangles[layer]
                .arcs
                .iter()
                .position(|a| a.tail == exit || a.head == exit)
                .expect("every boundary point lies on an arc of both sides");
            entry = exit;
        }
        out.push(cycle);
    }
    out
}

impl<'a> Builder<'a> {
    fn plain(&self, m: &Morph) -> Tangle<Pid> {
        of_morph(&self.p.data, self.p.shapes(), self.p.polarity(), m, &mut |i| Pid(i.leaf, i.arc))
    }

    /// Adds polygons for boundary cycles and records carriers.
    fn polygons(&mut self, cycles: Vec<(PieceKind, Vec<Step>)>, n_src: usize, n_tgt: usize) -> Part {
        let mut part = Part {
            bottom: BTreeMap::new(),
            top: BTreeMap::new(),
            side_src: vec![Vec::new(); n_src],
            side_tgt: vec![Vec::new(); n_tgt],
        };
        for (kind, cycle) in cycles {
            let sides = self.s.add(kind, cycle.len());
            for (side, step) in sides.into_iter().zip(cycle) {
                match step {
                    Step::Piece { bottom, id, along } => {
                        let m = if bottom { &mut part.bottom } else { &mut part.top };
                        m.insert(id, (side, along));
                    }
                    Step::Vertical { end: End::Src(k), up } => part.side_src[k].push((side, up)),
                    Step::Vertical { end: End::Tgt(k), up } => part.side_tgt[k].push((side, up)),
                }
            }
        }
        part
    }

    fn build(&mut self, c: &Cell) -> Result<Part, SurfaceError> {
        match c {
            Cell::Gen(name) => {
                let g = self.p.data.two_gen(name).ok_or_else(|| SurfaceError::Unknown(name.clone()))?.clone();
                let (tb, tt) = (self.plain(&g.src), self.plain(&g.tgt));
                let kind = PieceKind::Generator(name.clone());
                let mut cycles: Vec<_> = arc_cycles(&tb, &tt).into_iter().map(|c| (kind.clone(), c)).collect();
                for c in &tb.circles {
                    cycles.push((kind.clone(), segs_steps(c, true, false)));
                }
                for c in &tt.circles {
                    cycles.push((kind.clone(), segs_steps(c, false, true)));
                }
                Ok(self.polygons(cycles, tb.n_src(), tb.n_tgt()))
            }
            Cell::Struct(s) => self.structural(s, false),
            Cell::Inv(x) => match &**x {
                Cell::Struct(s) => self.structural(s, true),
                _ => Err(SurfaceError::Structural("inverse of a non-structural cell".into())),
            },
            Cell::VComp(v) => {
                let (first, rest) = v.split_first().ok_or_else(|| SurfaceError::Structural("empty chain".into()))?;
                let mut acc = self.build(first)?;
                for x in rest {
                    let next = self.build(x)?;
                    for (id, (a, along_a)) in &acc.top {
                        let (b, along_b) = next.bottom.get(id).copied().ok_or_else(|| {
                            SurfaceError::Structural(format!("piece {id:?} missing in vertical composite"))
                        })?;
                        self.s.join(*a, b, *along_a == along_b);
                    }
                    for (k, path) in next.side_src.into_iter().enumerate() {
                        acc.side_src[k].extend(path);
                    }
                    for (k, path) in next.side_tgt.into_iter().enumerate() {
                        acc.side_tgt[k].extend(path);
                    }
                    acc.top = next.top;
                }
                Ok(acc)
            }
            Cell::HComp(x, y) => {
                let (f1, g1) = self.p.data.cell_boundary(x)?;
                let a = self.build(x)?;
                let b = self.build(y)?;
                for (pa, pb) in a.side_tgt.iter().zip(&b.side_src) {
                    self.connect(pa, pb);
                }
                let mut bottom = a.bottom;
                bottom.extend(shift(b.bottom, leaf_count(&f1)));
                let mut top = a.top;
                top.extend(shift(b.top, leaf_count(&g1)));
                Ok(Part { bottom, top, side_src: a.side_src, side_tgt: b.side_tgt })
            }
            Cell::Tensor(x, y) => {
                let (f1, g1) = self.p.data.cell_boundary(x)?;
                let a = self.build(x)?;
                let b = self.build(y)?;
                let mut bottom = a.bottom;
                bottom.extend(shift(b.bottom, leaf_count(&f1)));
                let mut top = a.top;
                top.extend(shift(b.top, leaf_count(&g1)));
                let mut side_src = a.side_src;
                side_src.extend(b.side_src);
                let mut side_tgt = a.side_tgt;
                side_tgt.extend(b.side_tgt);
                Ok(Part { bottom, top, side_src, side_tgt })
            }
        }
    }

    /// Glues two vertical paths over the same point through a bigon.
    fn connect(&mut self, pa: &[(usize, bool)], pb: &[(usize, bool)]) {
        let sides = self.s.add(PieceKind::Connector, pa.len() + pb.len());
        // The bigon runs up along `pa` and back down along `pb`.
        for (k, &(orig, up)) in pa.iter().enumerate() {
            self.s.join(sides[k], orig, up);
        }
        for (k, &(orig, up)) in pb.iter().rev().enumerate() {
            self.s.join(sides[pa.len() + k], orig, !up);
        }
    }

    fn structural(&mut self, s: &crate::term::StructCell, inverse: bool) -> Result<Part, SurfaceError> {
        let (tb, tt, circles) = structural_tangles(self.p, s, inverse)?;
        let cycles: Vec<_> = arc_cycles(&tb, &tt).into_iter().map(|c| (PieceKind::Strip, c)).collect();
        let mut annuli = Vec::new();
        for (k, &(j, reversed)) in circles.iter().enumerate() {
            // Bottom circle forwards, seam up, top circle against the bottom's
            // direction, seam down.
            let mut steps = segs_steps(&tb.circles[j], true, false);
            steps.push(Step::Vertical { end: End::Src(usize::MAX), up: true });
            steps.extend(segs_steps(&tt.circles[k], false, !reversed));
            steps.push(Step::Vertical { end: End::Src(usize::MAX), up: false });
            annuli.push(steps);
        }
        let mut part = self.polygons(cycles, tb.n_src(), tb.n_tgt());
        for (steps, &(j, _)) in annuli.into_iter().zip(&circles) {
            let n = steps.len();
            let sides = self.s.add(PieceKind::Annulus, n);
            for (side, step) in sides.iter().zip(steps) {
                if let Step::Piece { bottom, id, along } = step {
                    let m = if bottom { &mut part.bottom } else { &mut part.top };
                    m.insert(id, (*side, along));
                }
            }
            // The two seams run in opposite directions between the same corners.
            self.s.join(sides[tb.circles[j].len()], sides[n - 1], false);
        }
        Ok(part)
    }
}

/// Reconstructs the surface of a 2-cell term.
pub fn reconstruct(t: &Cell, p: &Presentation) -> Result<CombSurface, SurfaceError> {
    let report = p.data.validate(t);
    if let Some(e) = report.issues.into_iter().next() {
        return Err(SurfaceError::Type(e));
    }
    let mut b = Builder { p, s: CombSurface::default() };
    b.build(t)?;
    Ok(b.s)
}

/// Invariants of the surface of a term.
pub fn invariants(t: &Cell, p: &Presentation) -> Result<SurfaceInvariants, SurfaceError> {
    reconstruct(t, p)?.invariants()
}

/// Euler characteristic of a closed term from its Morse events:
/// caps and cups count `+1`, saddles `-1`.
pub fn euler_by_events(t: &Cell, p: &Presentation) -> Result<i64, SurfaceError> {
    let (s, g) = p.data.cell_boundary(t)?;
    let closed = |m: &Morph| {
        of_morph(&p.data, p.shapes(), p.polarity(), m, &mut |_| ()).components() == 0
    };
    if !closed(&s) || !closed(&g) {
        return Err(SurfaceError::NotClosed);
    }
    let mut chi = 0;
    count_events(t, p, &mut chi);
    Ok(chi)
}

fn count_events(t: &Cell, p: &Presentation, acc: &mut i64) {
    match t {
        Cell::Gen(n) => *acc += p.role(n).map_or(0, Role::euler_weight),
        Cell::Struct(_) => {}
        Cell::Inv(x) => count_events(x, p, acc),
        Cell::VComp(v) => v.iter().for_each(|x| count_events(x, p, acc)),
        Cell::HComp(a, b) | Cell::Tensor(a, b) => {
            count_events(a, p, acc);
            count_events(b, p, acc);
        }
    }
}
