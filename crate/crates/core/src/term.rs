//! The three term layers: object words, morphism terms (binary sentences) and
//! 2-cell terms (paragraphs).
//!
//! Composition nodes store their children in application order, matching the
//! DSL: `(F ; G)` is `G ∘ F`, `(P . Q)` is `Q ∘ P` and `(P # Q)` is `Q * P`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A binary word in the object generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Obj {
    Unit,
    Gen(String),
    Tensor(Box<Obj>, Box<Obj>),
}

impl Obj {
    pub fn gen(name: &str) -> Obj {
        Obj::Gen(name.into())
    }

    pub fn tensor(a: Obj, b: Obj) -> Obj {
        Obj::Tensor(Box::new(a), Box::new(b))
    }

    /// Object generator leaves from left to right (units dropped).
    pub fn points(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_points(&mut out);
        out
    }

    fn collect_points<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Obj::Unit => {}
            Obj::Gen(n) => out.push(n),
            Obj::Tensor(a, b) => {
                a.collect_points(out);
                b.collect_points(out);
            }
        }
    }

    /// Renames generator leaves.
    pub fn map_gens(&self, f: &impl Fn(&str) -> String) -> Obj {
        match self {
            Obj::Unit => Obj::Unit,
            Obj::Gen(n) => Obj::Gen(f(n)),
            Obj::Tensor(a, b) => Obj::tensor(a.map_gens(f), b.map_gens(f)),
        }
    }
}

/// A binary sentence: 1-cell term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Morph {
    Gen(String),
    /// `I_u`
    Id(Obj),
    /// `α_{u,v,w}: (u⊗v)⊗w → u⊗(v⊗w)`
    Assoc(Obj, Obj, Obj),
    /// `ℓ_u: 1⊗u → u`
    LUnit(Obj),
    /// `r_u: u → u⊗1`
    RUnit(Obj),
    /// `β_{u,v}: u⊗v → v⊗u`
    Braid(Obj, Obj),
    /// Formal adjoint `x*` of a structural leaf.
    Adj(Box<Morph>),
    /// `(F ; G)`: first `F`, then `G`.
    Comp(Box<Morph>, Box<Morph>),
    Tensor(Box<Morph>, Box<Morph>),
}

impl Morph {
    pub fn gen(name: &str) -> Morph {
        Morph::Gen(name.into())
    }

    /// `(first ; second)`.
    pub fn then(first: Morph, second: Morph) -> Morph {
        Morph::Comp(Box::new(first), Box::new(second))
    }

    /// Left-nested chain `((f0 ; f1) ; f2) ...`.
    pub fn chain(parts: impl IntoIterator<Item = Morph>) -> Morph {
        let mut it = parts.into_iter();
        let first = it.next().expect("empty chain");
        it.fold(first, Morph::then)
    }

    pub fn tensor(a: Morph, b: Morph) -> Morph {
        Morph::Tensor(Box::new(a), Box::new(b))
    }

    pub fn adj(x: Morph) -> Morph {
        Morph::Adj(Box::new(x))
    }

    pub fn is_structural_leaf(&self) -> bool {
        matches!(
            self,
            Morph::Id(_) | Morph::Assoc(..) | Morph::LUnit(_) | Morph::RUnit(_) | Morph::Braid(..)
        )
    }

    /// True when the term contains no 1-generator.
    pub fn is_structural(&self) -> bool {
        match self {
            Morph::Gen(_) => false,
            Morph::Adj(x) => x.is_structural(),
            Morph::Comp(a, b) | Morph::Tensor(a, b) => a.is_structural() && b.is_structural(),
            _ => true,
        }
    }

    /// The formal adjoint `f*`, defined when `f` is structural.
    pub fn adjoint(&self) -> Option<Morph> {
        match self {
            Morph::Gen(_) => None,
            Morph::Adj(x) => Some((**x).clone()),
            Morph::Id(_) => Some(self.clone()),
            Morph::Comp(a, b) => Some(Morph::then(b.adjoint()?, a.adjoint()?)),
            Morph::Tensor(a, b) => Some(Morph::tensor(a.adjoint()?, b.adjoint()?)),
            leaf => Some(Morph::adj(leaf.clone())),
        }
    }

    /// Renames object and 1-generator leaves.
    pub fn map_gens(&self, fo: &impl Fn(&str) -> String, fm: &impl Fn(&str) -> String) -> Morph {
        match self {
            Morph::Gen(n) => Morph::Gen(fm(n)),
            Morph::Id(u) => Morph::Id(u.map_gens(fo)),
            Morph::Assoc(u, v, w) => Morph::Assoc(u.map_gens(fo), v.map_gens(fo), w.map_gens(fo)),
            Morph::LUnit(u) => Morph::LUnit(u.map_gens(fo)),
            Morph::RUnit(u) => Morph::RUnit(u.map_gens(fo)),
            Morph::Braid(u, v) => Morph::Braid(u.map_gens(fo), v.map_gens(fo)),
            Morph::Adj(x) => Morph::adj(x.map_gens(fo, fm)),
            Morph::Comp(a, b) => Morph::then(a.map_gens(fo, fm), b.map_gens(fo, fm)),
            Morph::Tensor(a, b) => Morph::tensor(a.map_gens(fo, fm), b.map_gens(fo, fm)),
        }
    }

    /// Subterm at a child-index path.
    pub fn at(&self, path: &[usize]) -> Option<&Morph> {
        let Some((&i, rest)) = path.split_first() else { return Some(self) };
        match (self, i) {
            (Morph::Comp(a, _) | Morph::Tensor(a, _), 0) => a.at(rest),
            (Morph::Comp(_, b) | Morph::Tensor(_, b), 1) => b.at(rest),
            _ => None,
        }
    }

    /// Replaces the subterm at `path`.
    pub fn replace_at(&self, path: &[usize], new: Morph) -> Option<Morph> {
        let Some((&i, rest)) = path.split_first() else { return Some(new) };
        match (self, i) {
            (Morph::Comp(a, b), 0) => Some(Morph::then(a.replace_at(rest, new)?, (**b).clone())),
            (Morph::Comp(a, b), 1) => Some(Morph::then((**a).clone(), b.replace_at(rest, new)?)),
            (Morph::Tensor(a, b), 0) => Some(Morph::tensor(a.replace_at(rest, new)?, (**b).clone())),
            (Morph::Tensor(a, b), 1) => Some(Morph::tensor((**a).clone(), b.replace_at(rest, new)?)),
            _ => None,
        }
    }
}

/// Structural 2-cell symbols. Parameters follow the math-order rows of the
/// 2-cell table; see [`crate::typing::struct_boundary`] for each boundary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructCell {
    Id(Morph),
    /// `a^c_{f,f',f''}`
    Ac(Morph, Morph, Morph),
    /// `r^c_f`
    Rc(Morph),
    /// `ℓ^c_f`
    Lc(Morph),
    Eta(Morph),
    Eps(Morph),
    /// `φ⊗_{(f,g),(f',g')}`
    Phi(Morph, Morph, Morph, Morph),
    /// `φ⊗_{a,a'}`
    Phi0(Obj, Obj),
    /// `α_{f,g,h}` (pseudonatural component of the associator)
    Assoc2(Morph, Morph, Morph),
    /// `ℓ_f`
    L2(Morph),
    /// `r_f`
    R2(Morph),
    /// `β_{f,g}`
    Beta2(Morph, Morph),
    Pi(Obj, Obj, Obj, Obj),
    Mu(Obj, Obj),
    Lam(Obj, Obj),
    Rho(Obj, Obj),
    RR(Obj, Obj, Obj),
    SS(Obj, Obj, Obj),
    Sig(Obj, Obj),
}

impl StructCell {
    pub fn is_invertible(&self) -> bool {
        !matches!(self, StructCell::Eta(_) | StructCell::Eps(_))
    }

    pub fn dsl_name(&self) -> &'static str {
        match self {
            StructCell::Id(_) => "id",
            StructCell::Ac(..) => "ac",
            StructCell::Rc(_) => "rc",
            StructCell::Lc(_) => "lc",
            StructCell::Eta(_) => "eta",
            StructCell::Eps(_) => "eps",
            StructCell::Phi(..) => "phi",
            StructCell::Phi0(..) => "phi0",
            StructCell::Assoc2(..) => "assoc2",
            StructCell::L2(_) => "l2",
            StructCell::R2(_) => "r2",
            StructCell::Beta2(..) => "beta2",
            StructCell::Pi(..) => "pi",
            StructCell::Mu(..) => "mu",
            StructCell::Lam(..) => "lam",
            StructCell::Rho(..) => "rho",
            StructCell::RR(..) => "RR",
            StructCell::SS(..) => "SS",
            StructCell::Sig(..) => "sig",
        }
    }

    /// Morphism parameters in order.
    pub fn morph_params(&self) -> Vec<&Morph> {
        match self {
            StructCell::Id(f)
            | StructCell::Rc(f)
            | StructCell::Lc(f)
            | StructCell::Eta(f)
            | StructCell::Eps(f)
            | StructCell::L2(f)
            | StructCell::R2(f) => alloc::vec![f],
            StructCell::Ac(f, g, h) | StructCell::Assoc2(f, g, h) => alloc::vec![f, g, h],
            StructCell::Phi(f, g, f2, g2) => alloc::vec![f, g, f2, g2],
            StructCell::Beta2(f, g) => alloc::vec![f, g],
            _ => Vec::new(),
        }
    }

    /// Applies renamings to every parameter.
    pub fn map_gens(&self, fo: &impl Fn(&str) -> String, fm: &impl Fn(&str) -> String) -> StructCell {
        let m = |x: &Morph| x.map_gens(fo, fm);
        let o = |x: &Obj| x.map_gens(fo);
        match self {
            StructCell::Id(f) => StructCell::Id(m(f)),
            StructCell::Ac(f, g, h) => StructCell::Ac(m(f), m(g), m(h)),
            StructCell::Rc(f) => StructCell::Rc(m(f)),
            StructCell::Lc(f) => StructCell::Lc(m(f)),
            StructCell::Eta(f) => StructCell::Eta(m(f)),
            StructCell::Eps(f) => StructCell::Eps(m(f)),
            StructCell::Phi(f, g, f2, g2) => StructCell::Phi(m(f), m(g), m(f2), m(g2)),
            StructCell::Phi0(a, b) => StructCell::Phi0(o(a), o(b)),
            StructCell::Assoc2(f, g, h) => StructCell::Assoc2(m(f), m(g), m(h)),
            StructCell::L2(f) => StructCell::L2(m(f)),
            StructCell::R2(f) => StructCell::R2(m(f)),
            StructCell::Beta2(f, g) => StructCell::Beta2(m(f), m(g)),
            StructCell::Pi(a, b, c, d) => StructCell::Pi(o(a), o(b), o(c), o(d)),
            StructCell::Mu(a, b) => StructCell::Mu(o(a), o(b)),
            StructCell::Lam(a, b) => StructCell::Lam(o(a), o(b)),
            StructCell::Rho(a, b) => StructCell::Rho(o(a), o(b)),
            StructCell::RR(a, b, c) => StructCell::RR(o(a), o(b), o(c)),
            StructCell::SS(a, b, c) => StructCell::SS(o(a), o(b), o(c)),
            StructCell::Sig(a, b) => StructCell::Sig(o(a), o(b)),
        }
    }
}

/// A paragraph: 2-cell term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Gen(String),
    Struct(StructCell),
    /// Formal inverse of an invertible structural leaf.
    Inv(Box<Cell>),
    /// Vertical chain in application order.
    VComp(Vec<Cell>),
    /// `(P # Q)`: `P` acts on the first-applied part, `Q` on the second.
    HComp(Box<Cell>, Box<Cell>),
    Tensor(Box<Cell>, Box<Cell>),
}

impl Cell {
    pub fn gen(name: &str) -> Cell {
        Cell::Gen(name.into())
    }

    pub fn id(f: Morph) -> Cell {
        Cell::Struct(StructCell::Id(f))
    }

    pub fn st(s: StructCell) -> Cell {
        Cell::Struct(s)
    }

    pub fn inv(s: StructCell) -> Cell {
        Cell::Inv(Box::new(Cell::Struct(s)))
    }

    /// DSL-order horizontal node `(first # second)`.
    pub fn hc(first: Cell, second: Cell) -> Cell {
        Cell::HComp(Box::new(first), Box::new(second))
    }

    pub fn tensor(a: Cell, b: Cell) -> Cell {
        Cell::Tensor(Box::new(a), Box::new(b))
    }

    /// Vertical chain in application order, flattening nested chains.
    pub fn chain(parts: impl IntoIterator<Item = Cell>) -> Cell {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Cell::VComp(v) => out.extend(v),
                other => out.push(other),
            }
        }
        Cell::VComp(out)
    }

    /// Flattens nested vertical chains everywhere in the tree.
    pub fn normalized(&self) -> Cell {
        match self {
            Cell::VComp(v) => Cell::chain(v.iter().map(Cell::normalized)),
            Cell::HComp(a, b) => Cell::hc(a.normalized(), b.normalized()),
            Cell::Tensor(a, b) => Cell::tensor(a.normalized(), b.normalized()),
            Cell::Inv(x) => Cell::Inv(Box::new(x.normalized())),
            leaf => leaf.clone(),
        }
    }

    /// Number of leaves.
    pub fn size(&self) -> usize {
        match self {
            Cell::Gen(_) | Cell::Struct(_) | Cell::Inv(_) => 1,
            Cell::VComp(v) => v.iter().map(Cell::size).sum(),
            Cell::HComp(a, b) | Cell::Tensor(a, b) => a.size() + b.size(),
        }
    }

    /// Visits every leaf.
    pub fn for_each_leaf(&self, f: &mut impl FnMut(&Cell)) {
        match self {
            Cell::VComp(v) => v.iter().for_each(|c| c.for_each_leaf(f)),
            Cell::HComp(a, b) | Cell::Tensor(a, b) => {
                a.for_each_leaf(f);
                b.for_each_leaf(f);
            }
            leaf => f(leaf),
        }
    }

    /// Subterm at a child-index path.
    pub fn at(&self, path: &[usize]) -> Option<&Cell> {
        let Some((&i, rest)) = path.split_first() else { return Some(self) };
        match self {
            Cell::VComp(v) => v.get(i)?.at(rest),
            Cell::HComp(a, b) | Cell::Tensor(a, b) => match i {
                0 => a.at(rest),
                1 => b.at(rest),
                _ => None,
            },
            Cell::Inv(x) if i == 0 => x.at(rest),
            _ => None,
        }
    }

    /// Mutable subterm at a child-index path.
    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Cell> {
        let Some((&i, rest)) = path.split_first() else { return Some(self) };
        match self {
            Cell::VComp(v) => v.get_mut(i)?.at_mut(rest),
            Cell::HComp(a, b) | Cell::Tensor(a, b) => match i {
                0 => a.at_mut(rest),
                1 => b.at_mut(rest),
                _ => None,
            },
            Cell::Inv(x) if i == 0 => x.at_mut(rest),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Printing (canonical DSL form)
// ---------------------------------------------------------------------------

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::Unit => f.write_str("1"),
            Obj::Gen(n) => f.write_str(n),
            Obj::Tensor(a, b) => write!(f, "({a} ⊗ {b})"),
        }
    }
}

impl fmt::Display for Morph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Morph::Gen(n) => f.write_str(n),
            Morph::Id(u) => write!(f, "I[{u}]"),
            Morph::Assoc(u, v, w) => write!(f, "alpha[{u},{v},{w}]"),
            Morph::LUnit(u) => write!(f, "l[{u}]"),
            Morph::RUnit(u) => write!(f, "r[{u}]"),
            Morph::Braid(u, v) => write!(f, "beta[{u},{v}]"),
            Morph::Adj(x) => write!(f, "inv({x})"),
            Morph::Comp(a, b) => write!(f, "({a} ; {b})"),
            Morph::Tensor(a, b) => write!(f, "({a} ⊗ {b})"),
        }
    }
}

impl fmt::Display for StructCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.dsl_name();
        match self {
            StructCell::Phi(a, b, c, d) => write!(f, "phi[({a},{b}),({c},{d})]"),
            StructCell::Phi0(a, b)
            | StructCell::Mu(a, b)
            | StructCell::Lam(a, b)
            | StructCell::Rho(a, b)
            | StructCell::Sig(a, b) => write!(f, "{name}[{a},{b}]"),
            StructCell::RR(a, b, c) | StructCell::SS(a, b, c) => write!(f, "{name}[{a},{b},{c}]"),
            StructCell::Pi(a, b, c, d) => write!(f, "{name}[{a},{b},{c},{d}]"),
            other => {
                write!(f, "{name}[")?;
                for (i, m) in other.morph_params().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Gen(n) => f.write_str(n),
            Cell::Struct(s) => write!(f, "{s}"),
            Cell::Inv(x) => write!(f, "inv2({x})"),
            Cell::VComp(v) => {
                f.write_str("(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" . ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            Cell::HComp(a, b) => write!(f, "({a} # {b})"),
            Cell::Tensor(a, b) => write!(f, "({a} ⊗ {b})"),
        }
    }
}
