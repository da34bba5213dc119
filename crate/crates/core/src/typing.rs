//! Generating data, boundary computation, validation and checked constructors.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::parse::{self, ParseError, RESERVED};
use crate::term::{Cell, Morph, Obj, StructCell};

/// A 1-generator with its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneGen {
    pub name: String,
    pub src: Obj,
    pub tgt: Obj,
}

/// A 2-generator with its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoGen {
    pub name: String,
    pub src: Morph,
    pub tgt: Morph,
}

/// Generating data `G = (G0, G1, G2)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GeneratingData {
    pub objects: Vec<String>,
    pub one_gens: Vec<OneGen>,
    pub two_gens: Vec<TwoGen>,
}

/// Typing failure with the path of the offending subterm (child indices from the root).
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at {}: {kind}", fmt_path(.path))]
pub struct TypeError {
    pub path: Vec<usize>,
    pub kind: ErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ErrorKind {
    #[error("unknown generator {0:?}")]
    UnknownName(String),
    #[error("boundary mismatch: {0}")]
    Mismatch(String),
    #[error("malformed parameter: {0}")]
    Parameter(String),
}

/// Renders a path as `root.0.1`.
pub fn fmt_path(path: &[usize]) -> String {
    let mut s = String::from("root");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}

fn err<T>(path: &[usize], kind: ErrorKind) -> Result<T, TypeError> {
    Err(TypeError { path: path.to_vec(), kind })
}

fn sub(path: &[usize], i: usize) -> Vec<usize> {
    let mut p = path.to_vec();
    p.push(i);
    p
}

/// Data construction failures.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("duplicate or reserved name {0:?}")]
    Name(String),
    #[error("generator {name}: {err}")]
    Boundary { name: String, err: TypeError },
    #[error("2-generator {0} is not globular")]
    NotGlobular(String),
}

impl GeneratingData {
    /// Builds and checks generating data: distinct non-reserved names, well-typed
    /// boundaries and globular 2-generators.
    pub fn new(objects: Vec<String>, one_gens: Vec<OneGen>, two_gens: Vec<TwoGen>) -> Result<Self, DataError> {
        let mut seen: Vec<&str> = Vec::new();
        let names = objects
            .iter()
            .map(String::as_str)
            .chain(one_gens.iter().map(|g| g.name.as_str()))
            .chain(two_gens.iter().map(|g| g.name.as_str()));
        for n in names {
            if seen.contains(&n) || RESERVED.contains(&n) || n.is_empty() {
                return Err(DataError::Name(n.into()));
            }
            seen.push(n);
        }
        let data = GeneratingData { objects, one_gens, two_gens };
        for g in &data.one_gens {
            for o in [&g.src, &g.tgt] {
                data.check_obj(o, &[]).map_err(|err| DataError::Boundary { name: g.name.clone(), err })?;
            }
        }
        for g in &data.two_gens {
            let (a, b) = data.morph_boundary(&g.src).map_err(|err| DataError::Boundary { name: g.name.clone(), err })?;
            let (c, d) = data.morph_boundary(&g.tgt).map_err(|err| DataError::Boundary { name: g.name.clone(), err })?;
            if a != c || b != d {
                return Err(DataError::NotGlobular(g.name.clone()));
            }
        }
        Ok(data)
    }

    pub fn one_gen(&self, name: &str) -> Option<&OneGen> {
        self.one_gens.iter().find(|g| g.name == name)
    }

    pub fn two_gen(&self, name: &str) -> Option<&TwoGen> {
        self.two_gens.iter().find(|g| g.name == name)
    }

    pub fn check_obj(&self, o: &Obj, path: &[usize]) -> Result<(), TypeError> {
        match o {
            Obj::Unit => Ok(()),
            Obj::Gen(n) if self.objects.iter().any(|x| x == n) => Ok(()),
            Obj::Gen(n) => err(path, ErrorKind::UnknownName(n.clone())),
            Obj::Tensor(a, b) => {
                self.check_obj(a, &sub(path, 0))?;
                self.check_obj(b, &sub(path, 1))
            }
        }
    }

    /// `(source, target)` of a morphism term.
    pub fn morph_boundary(&self, m: &Morph) -> Result<(Obj, Obj), TypeError> {
        self.morph_boundary_at(m, &[])
    }

    fn morph_boundary_at(&self, m: &Morph, path: &[usize]) -> Result<(Obj, Obj), TypeError> {
        let t = |a: &Obj, b: &Obj| Obj::tensor(a.clone(), b.clone());
        match m {
            Morph::Gen(n) => match self.one_gen(n) {
                Some(g) => Ok((g.src.clone(), g.tgt.clone())),
                None => err(path, ErrorKind::UnknownName(n.clone())),
            },
            Morph::Id(u) => {
                self.check_obj(u, path)?;
                Ok((u.clone(), u.clone()))
            }
            Morph::Assoc(u, v, w) => {
                for o in [u, v, w] {
                    self.check_obj(o, path)?;
                }
                Ok((t(&t(u, v), w), t(u, &t(v, w))))
            }
            Morph::LUnit(u) => {
                self.check_obj(u, path)?;
                Ok((t(&Obj::Unit, u), u.clone()))
            }
            Morph::RUnit(u) => {
                self.check_obj(u, path)?;
                Ok((u.clone(), t(u, &Obj::Unit)))
            }
            Morph::Braid(u, v) => {
                self.check_obj(u, path)?;
                self.check_obj(v, path)?;
                Ok((t(u, v), t(v, u)))
            }
            Morph::Adj(x) => {
                if !x.is_structural_leaf() {
                    return err(path, ErrorKind::Parameter("inv(..) of a non-structural 1-cell".into()));
                }
                let (s, tt) = self.morph_boundary_at(x, &sub(path, 0))?;
                Ok((tt, s))
            }
            Morph::Comp(a, b) => {
                let (s1, t1) = self.morph_boundary_at(a, &sub(path, 0))?;
                let (s2, t2) = self.morph_boundary_at(b, &sub(path, 1))?;
                if t1 != s2 {
                    return err(path, ErrorKind::Mismatch(format!("target {t1} of first ≠ source {s2} of second")));
                }
                Ok((s1, t2))
            }
            Morph::Tensor(a, b) => {
                let (s1, t1) = self.morph_boundary_at(a, &sub(path, 0))?;
                let (s2, t2) = self.morph_boundary_at(b, &sub(path, 1))?;
                Ok((Obj::tensor(s1, s2), Obj::tensor(t1, t2)))
            }
        }
    }

    /// `(source, target)` of a 2-cell term.
    pub fn cell_boundary(&self, c: &Cell) -> Result<(Morph, Morph), TypeError> {
        self.cell_boundary_at(c, &[])
    }

    fn cell_boundary_at(&self, c: &Cell, path: &[usize]) -> Result<(Morph, Morph), TypeError> {
        match c {
            Cell::Gen(n) => match self.two_gen(n) {
                Some(g) => Ok((g.src.clone(), g.tgt.clone())),
                None => err(path, ErrorKind::UnknownName(n.clone())),
            },
            Cell::Struct(s) => self.struct_boundary(s, path),
            Cell::Inv(x) => match &**x {
                Cell::Struct(s) if s.is_invertible() => {
                    let (a, b) = self.struct_boundary(s, &sub(path, 0))?;
                    Ok((b, a))
                }
                _ => err(path, ErrorKind::Parameter("inv2(..) of a non-invertible 2-cell".into())),
            },
            Cell::VComp(v) => {
                if v.is_empty() {
                    return err(path, ErrorKind::Parameter("empty vertical chain".into()));
                }
                let mut bounds = Vec::with_capacity(v.len());
                for (i, p) in v.iter().enumerate() {
                    bounds.push(self.cell_boundary_at(p, &sub(path, i))?);
                }
                for i in 1..bounds.len() {
                    if bounds[i - 1].1 != bounds[i].0 {
                        return err(
                            &sub(path, i),
                            ErrorKind::Mismatch(format!(
                                "vertical gap: {} then {}",
                                bounds[i - 1].1,
                                bounds[i].0
                            )),
                        );
                    }
                }
                Ok((bounds[0].0.clone(), bounds.pop().unwrap().1))
            }
            Cell::HComp(a, b) => {
                let (s1, t1) = self.cell_boundary_at(a, &sub(path, 0))?;
                let (s2, t2) = self.cell_boundary_at(b, &sub(path, 1))?;
                let (_, x) = self.morph_boundary(&s1).map_err(|e| TypeError { path: sub(path, 0), kind: e.kind })?;
                let (y, _) = self.morph_boundary(&s2).map_err(|e| TypeError { path: sub(path, 1), kind: e.kind })?;
                if x != y {
                    return err(path, ErrorKind::Mismatch(format!("horizontal: {x} vs {y}")));
                }
                Ok((Morph::then(s1, s2), Morph::then(t1, t2)))
            }
            Cell::Tensor(a, b) => {
                let (s1, t1) = self.cell_boundary_at(a, &sub(path, 0))?;
                let (s2, t2) = self.cell_boundary_at(b, &sub(path, 1))?;
                Ok((Morph::tensor(s1, s2), Morph::tensor(t1, t2)))
            }
        }
    }

    fn struct_boundary(&self, s: &StructCell, path: &[usize]) -> Result<(Morph, Morph), TypeError> {
        let mut bounds = Vec::new();
        for m in s.morph_params() {
            bounds.push(self.morph_boundary(m).map_err(|e| TypeError {
                path: path.to_vec(),
                kind: ErrorKind::Parameter(e.to_string()),
            })?);
        }
        let objs: Vec<&Obj> = match s {
            StructCell::Phi0(a, b)
            | StructCell::Mu(a, b)
            | StructCell::Lam(a, b)
            | StructCell::Rho(a, b)
            | StructCell::Sig(a, b) => alloc::vec![a, b],
            StructCell::RR(a, b, c) | StructCell::SS(a, b, c) => alloc::vec![a, b, c],
            StructCell::Pi(a, b, c, d) => alloc::vec![a, b, c, d],
            _ => Vec::new(),
        };
        for o in objs {
            self.check_obj(o, path).map_err(|e| TypeError {
                path: path.to_vec(),
                kind: ErrorKind::Parameter(e.kind.to_string()),
            })?;
        }
        struct_boundary(s, &bounds).map_err(|m| TypeError { path: path.to_vec(), kind: ErrorKind::Parameter(m) })
    }

    /// Every violated constraint, empty iff the term is a valid paragraph.
    pub fn validate(&self, c: &Cell) -> ValidationReport {
        let mut issues = Vec::new();
        self.collect_issues(c, &[], &mut issues);
        ValidationReport { issues }
    }

    fn collect_issues(&self, c: &Cell, path: &[usize], out: &mut Vec<TypeError>) {
        let before = out.len();
        match c {
            Cell::VComp(v) => v.iter().enumerate().for_each(|(i, p)| self.collect_issues(p, &sub(path, i), out)),
            Cell::HComp(a, b) | Cell::Tensor(a, b) => {
                self.collect_issues(a, &sub(path, 0), out);
                self.collect_issues(b, &sub(path, 1), out);
            }
            _ => {}
        }
        if out.len() == before {
            if let Err(e) = self.cell_boundary_at(c, path) {
                out.push(e);
            }
        }
    }

    /// Parses and name-checks an object word.
    pub fn parse_obj(&self, text: &str) -> Result<Obj, TermError> {
        let o = parse::obj(text)?;
        self.check_obj(&o, &[])?;
        Ok(o)
    }

    /// Parses and type-checks a morphism term.
    pub fn parse_morph(&self, text: &str) -> Result<Morph, TermError> {
        let m = parse::morph(text)?;
        self.morph_boundary(&m)?;
        Ok(m)
    }

    /// Parses and validates a 2-cell term.
    pub fn parse_cell(&self, text: &str) -> Result<Cell, TermError> {
        let c = parse::cell(text)?;
        let report = self.validate(&c);
        if let Some(e) = report.issues.into_iter().next() {
            return Err(e.into());
        }
        Ok(c)
    }

    /// Checked `p ⊗ q`.
    pub fn tensor(&self, p: Cell, q: Cell) -> Result<Cell, TypeError> {
        let c = Cell::tensor(p, q);
        self.cell_boundary(&c)?;
        Ok(c)
    }

    /// Checked vertical composite; `ps` is in application order (first applied first),
    /// as in the DSL `(P1 . P2 . ...)`. Nested chains are flattened.
    pub fn vcompose(&self, ps: Vec<Cell>) -> Result<Cell, TypeError> {
        let c = Cell::chain(ps);
        self.cell_boundary(&c)?;
        Ok(c)
    }

    /// Checked horizontal composite `p * q` in math order: `q: a → b` acts first,
    /// `p: b → c` second. Requires `t(t(q)) = s(s(p))`.
    pub fn hcompose(&self, p: Cell, q: Cell) -> Result<Cell, TypeError> {
        let c = Cell::hc(q, p);
        self.cell_boundary(&c)?;
        Ok(c)
    }
}

/// Outcome of [`GeneratingData::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub issues: Vec<TypeError>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.issues {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Parse or type failure.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TermError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

fn m_then(a: &Morph, b: &Morph) -> Morph {
    Morph::then(a.clone(), b.clone())
}

fn m_tensor(a: &Morph, b: &Morph) -> Morph {
    Morph::tensor(a.clone(), b.clone())
}

fn o_t(a: &Obj, b: &Obj) -> Obj {
    Obj::tensor(a.clone(), b.clone())
}

/// Boundary of a structural 2-cell symbol given the boundaries of its morphism
/// parameters (in [`StructCell::morph_params`] order). Sources and targets are
/// written in DSL order: math `g ∘ f` is `(f ; g)`.
pub fn struct_boundary(s: &StructCell, pb: &[(Obj, Obj)]) -> Result<(Morph, Morph), String> {
    use Morph as M;
    let id = |o: &Obj| M::Id(o.clone());
    let alpha = |a: &Obj, b: &Obj, c: &Obj| M::Assoc(a.clone(), b.clone(), c.clone());
    let beta = |a: &Obj, b: &Obj| M::Braid(a.clone(), b.clone());
    Ok(match s {
        StructCell::Id(f) => (f.clone(), f.clone()),
        StructCell::Ac(f, f1, f2) => {
            // (f ∘ f') ∘ f''  ⇒  f ∘ (f' ∘ f'')
            if pb[2].1 != pb[1].0 || pb[1].1 != pb[0].0 {
                return Err("ac parameters are not composable".into());
            }
            (m_then(&m_then(f2, f1), f), m_then(f2, &m_then(f1, f)))
        }
        StructCell::Rc(f) => (m_then(&id(&pb[0].0), f), f.clone()),
        StructCell::Lc(f) => (m_then(f, &id(&pb[0].1)), f.clone()),
        StructCell::Eta(f) => {
            let fs = f.adjoint().ok_or("eta needs a structural 1-cell")?;
            (id(&pb[0].0), m_then(f, &fs))
        }
        StructCell::Eps(f) => {
            let fs = f.adjoint().ok_or("eps needs a structural 1-cell")?;
            (m_then(&fs, f), id(&pb[0].1))
        }
        StructCell::Phi(f, g, f2, g2) => {
            // (f ⊗ g) ∘ (f' ⊗ g')  ⇒  (f ∘ f') ⊗ (g ∘ g')
            if pb[2].1 != pb[0].0 || pb[3].1 != pb[1].0 {
                return Err("phi parameters are not composable".into());
            }
            (m_then(&m_tensor(f2, g2), &m_tensor(f, g)), m_tensor(&m_then(f2, f), &m_then(g2, g)))
        }
        StructCell::Phi0(a, b) => (id(&o_t(a, b)), m_tensor(&id(a), &id(b))),
        StructCell::Assoc2(f, g, h) => {
            let ((a, a1), (b, b1), (c, c1)) = (&pb[0], &pb[1], &pb[2]);
            (
                m_then(&m_tensor(&m_tensor(f, g), h), &alpha(a1, b1, c1)),
                m_then(&alpha(a, b, c), &m_tensor(f, &m_tensor(g, h))),
            )
        }
        StructCell::L2(f) => {
            let (a, b) = &pb[0];
            (m_then(&m_tensor(&id(&Obj::Unit), f), &M::LUnit(b.clone())), m_then(&M::LUnit(a.clone()), f))
        }
        StructCell::R2(f) => {
            let (a, b) = &pb[0];
            (m_then(f, &M::RUnit(b.clone())), m_then(&M::RUnit(a.clone()), &m_tensor(f, &id(&Obj::Unit))))
        }
        StructCell::Beta2(f, g) => {
            let ((a, b), (a1, b1)) = (&pb[0], &pb[1]);
            (m_then(&m_tensor(f, g), &beta(b, b1)), m_then(&beta(a, a1), &m_tensor(g, f)))
        }
        StructCell::Pi(a, b, c, d) => (
            m_then(
                &m_tensor(&alpha(a, b, c), &id(d)),
                &m_then(&alpha(a, &o_t(b, c), d), &m_tensor(&id(a), &alpha(b, c, d))),
            ),
            m_then(&alpha(&o_t(a, b), c, d), &alpha(a, b, &o_t(c, d))),
        ),
        StructCell::Mu(a, b) => (
            m_then(
                &m_tensor(&M::RUnit(a.clone()), &id(b)),
                &m_then(&alpha(a, &Obj::Unit, b), &m_tensor(&id(a), &M::LUnit(b.clone()))),
            ),
            id(&o_t(a, b)),
        ),
        StructCell::Lam(a, b) => (
            m_tensor(&M::LUnit(a.clone()), &id(b)),
            m_then(&alpha(&Obj::Unit, a, b), &M::LUnit(o_t(a, b))),
        ),
        StructCell::Rho(a, b) => (
            m_tensor(&id(a), &M::RUnit(b.clone())),
            m_then(&M::RUnit(o_t(a, b)), &alpha(a, b, &Obj::Unit)),
        ),
        StructCell::RR(a, b, c) => (
            m_then(&alpha(a, b, c), &m_then(&beta(a, &o_t(b, c)), &alpha(b, c, a))),
            m_then(&m_tensor(&beta(a, b), &id(c)), &m_then(&alpha(b, a, c), &m_tensor(&id(b), &beta(a, c)))),
        ),
        StructCell::SS(a, b, c) => {
            let ainv = |x: &Obj, y: &Obj, z: &Obj| M::adj(alpha(x, y, z));
            (
                m_then(&ainv(a, b, c), &m_then(&beta(&o_t(a, b), c), &ainv(c, a, b))),
                m_then(&m_tensor(&id(a), &beta(b, c)), &m_then(&ainv(a, c, b), &m_tensor(&beta(a, c), &id(b)))),
            )
        }
        StructCell::Sig(a, b) => (id(&o_t(a, b)), m_then(&beta(a, b), &beta(b, a))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn data() -> GeneratingData {
        let pt = Obj::gen("pt");
        let pp = Obj::tensor(pt.clone(), pt.clone());
        GeneratingData::new(
            vec!["pt".into()],
            vec![
                OneGen { name: "ev".into(), src: pp.clone(), tgt: Obj::Unit },
                OneGen { name: "coev".into(), src: Obj::Unit, tgt: pp },
            ],
            vec![TwoGen {
                name: "cap".into(),
                src: Morph::Id(Obj::Unit),
                tgt: Morph::then(Morph::gen("coev"), Morph::gen("ev")),
            }],
        )
        .unwrap()
    }

    #[test]
    fn morphism_boundaries() {
        let d = data();
        let b = d.parse_morph("beta[pt,pt]").unwrap();
        let pp = d.parse_obj("(pt ⊗ pt)").unwrap();
        assert_eq!(d.morph_boundary(&b).unwrap(), (pp.clone(), pp.clone()));
        let m = d.parse_morph("(I[(pt ⊗ pt)] ; ev)").unwrap();
        assert_eq!(d.morph_boundary(&m).unwrap(), (pp, Obj::Unit));
        let bad = parse::morph("(ev ; ev)").unwrap();
        assert!(matches!(d.morph_boundary(&bad).unwrap_err().kind, ErrorKind::Mismatch(_)));
        assert!(matches!(d.parse_obj("(pt ⊗ bad)"), Err(TermError::Type(_))));
    }

    #[test]
    fn eps_boundary() {
        let d = data();
        let c = d.parse_cell("eps[alpha[pt,pt,pt]]").unwrap();
        let (s, t) = d.cell_boundary(&c).unwrap();
        assert_eq!(s.to_string(), "(inv(alpha[pt,pt,pt]) ; alpha[pt,pt,pt])");
        assert_eq!(t.to_string(), "I[(pt ⊗ (pt ⊗ pt))]");
        assert!(d.parse_cell("eta[ev]").is_err());
    }

    #[test]
    fn validation_reports_paths() {
        let d = data();
        let c = parse::cell("(cap . id[ev])").unwrap();
        let r = d.validate(&c);
        assert_eq!(r.issues.len(), 1);
        assert_eq!(r.issues[0].path, vec![1]);
        let c = parse::cell("(cap . id[(coev ; ev)])").unwrap();
        assert!(d.validate(&c).is_valid());
        let c = parse::cell("phi0[pt,nope]").unwrap();
        assert!(matches!(d.validate(&c).issues[0].kind, ErrorKind::Parameter(_)));
    }

    #[test]
    fn constructors_check_boundaries() {
        let d = data();
        let cap = Cell::gen("cap");
        let idi = Cell::id(Morph::Id(Obj::Unit));
        let t = d.tensor(idi.clone(), cap.clone()).unwrap();
        let (s, _) = d.cell_boundary(&t).unwrap();
        assert_eq!(s.to_string(), "(I[1] ⊗ I[1])");
        assert!(d.hcompose(Cell::id(Morph::gen("ev")), Cell::id(Morph::gen("ev"))).is_err());
        let v = d.vcompose(vec![Cell::id(Morph::gen("ev"))]).unwrap();
        assert_eq!(v.to_string(), "(id[ev])");
    }
}
