//! Generating data and relation lists for the unoriented and oriented 2D
//! bordism bicategories, a whiskering builder for 2-cell terms, the
//! orientation-forgetting map and a few standard closed-surface terms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::tangle::{ArcShapes, End, Polarity, Unoriented};
use crate::term::{Cell, Morph, Obj, StructCell};
use crate::typing::{GeneratingData, OneGen, TwoGen};

/// Number of relations in [`bord2_unoriented`].
pub const UNORIENTED_RELATION_COUNT: usize = 12;
/// Number of relations in [`bord2_oriented`].
pub const ORIENTED_RELATION_COUNT: usize = 8;
/// Number of cusp generators (including inverses) in [`bord2_oriented`].
pub const ORIENTED_CUSP_COUNT: usize = 4;

/// What a 2-generator does to the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    /// Birth of a circle (index 0).
    Cap,
    /// Death of a circle (index 2).
    Cup,
    /// Band move `(ev ; coev) ⇒ I`.
    Saddle,
    /// Band move `I ⇒ (ev ; coev)`.
    Cosaddle,
    /// Zigzag straightening and its inverse.
    Cusp,
    CuspInv,
    /// Symmetry generators and their inverses.
    Sym,
    SymInv,
}

impl Role {
    /// Contribution to the Euler characteristic of a closed surface.
    pub fn euler_weight(self) -> i64 {
        match self {
            Role::Cap | Role::Cup => 1,
            Role::Saddle | Role::Cosaddle => -1,
            _ => 0,
        }
    }
}

/// A named equation between two parallel 2-cell terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub lhs: Cell,
    pub rhs: Cell,
}

/// Generating data plus relations.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub oriented: bool,
    pub data: GeneratingData,
    pub roles: BTreeMap<String, Role>,
    pub relations: Vec<Relation>,
}

/// Arc shapes of the two elbows.
pub struct Elbows;

impl ArcShapes for Elbows {
    fn shape(&self, g: &str) -> Vec<(End, End)> {
        match g {
            "ev" => vec![(End::Src(0), End::Src(1))],
            "coev" => vec![(End::Tgt(0), End::Tgt(1))],
            _ => Vec::new(),
        }
    }
}

/// Polarity of `pt+` / `pt-`.
pub struct Signed;

impl Polarity for Signed {
    fn polarity(&self, label: &str) -> Option<bool> {
        match label {
            "pt+" => Some(true),
            "pt-" => Some(false),
            _ => None,
        }
    }
}

impl Presentation {
    pub fn polarity(&self) -> &'static dyn Polarity {
        if self.oriented {
            &Signed
        } else {
            &Unoriented
        }
    }

    pub fn shapes(&self) -> &'static dyn ArcShapes {
        &Elbows
    }

    pub fn role(&self, name: &str) -> Option<Role> {
        self.roles.get(name).copied()
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Checks that both sides of every relation are valid with equal boundaries.
    pub fn check_relations(&self) -> Result<(), String> {
        for r in &self.relations {
            let a = self.data.cell_boundary(&r.lhs).map_err(|e| format!("{} lhs: {e}", r.name))?;
            let b = self.data.cell_boundary(&r.rhs).map_err(|e| format!("{} rhs: {e}", r.name))?;
            if a != b {
                return Err(format!("{}: sides have different boundaries", r.name));
            }
        }
        Ok(())
    }

    /// Plain-text manifest: one line per object, generator and relation.
    pub fn manifest(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("presentation {}\n", self.name));
        for o in &self.data.objects {
            out.push_str(&format!("object {o}\n"));
        }
        for g in &self.data.one_gens {
            out.push_str(&format!("1-gen {} : {} -> {}\n", g.name, g.src, g.tgt));
        }
        for g in &self.data.two_gens {
            let role = self.role(&g.name).map(|r| format!("{r:?}").to_lowercase()).unwrap_or_default();
            out.push_str(&format!("2-gen {} [{}] : {} => {}\n", g.name, role, g.src, g.tgt));
        }
        for r in &self.relations {
            out.push_str(&format!("relation {} : {} = {}\n", r.name, r.lhs, r.rhs));
        }
        out.push_str(&format!(
            "counts objects={} 1-gens={} 2-gens={} relations={}\n",
            self.data.objects.len(),
            self.data.one_gens.len(),
            self.data.two_gens.len(),
            self.relations.len()
        ));
        out
    }
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

/// Whiskers `c` into the position `path` of the 1-cell `m`: the result acts as
/// `c` at that subterm and as the identity elsewhere.
pub fn whisker(m: &Morph, path: &[usize], c: Cell) -> Option<Cell> {
    let Some((&i, rest)) = path.split_first() else { return Some(c) };
    match (m, i) {
        (Morph::Comp(a, b), 0) => Some(Cell::hc(whisker(a, rest, c)?, Cell::id((**b).clone()))),
        (Morph::Comp(a, b), 1) => Some(Cell::hc(Cell::id((**a).clone()), whisker(b, rest, c)?)),
        (Morph::Tensor(a, b), 0) => Some(Cell::tensor(whisker(a, rest, c)?, Cell::id((**b).clone()))),
        (Morph::Tensor(a, b), 1) => Some(Cell::tensor(Cell::id((**a).clone()), whisker(b, rest, c)?)),
        _ => None,
    }
}

/// Builds a vertical chain of whiskered steps starting from a 1-cell.
#[derive(Clone, Debug)]
pub struct Builder<'a> {
    data: &'a GeneratingData,
    start: Morph,
    cur: Morph,
    steps: Vec<Cell>,
}

impl<'a> Builder<'a> {
    pub fn new(data: &'a GeneratingData, start: Morph) -> Self {
        Builder { data, start: start.clone(), cur: start, steps: Vec::new() }
    }

    pub fn current(&self) -> &Morph {
        &self.cur
    }

    /// Applies `cell` at the subterm `path` of the current 1-cell.
    pub fn apply(&mut self, path: &[usize], cell: Cell) -> Result<&mut Self, String> {
        let (s, t) = self.data.cell_boundary(&cell).map_err(|e| format!("step {}: {e}", self.steps.len()))?;
        let here = self.cur.at(path).ok_or_else(|| format!("step {}: no subterm at {path:?}", self.steps.len()))?;
        if *here != s {
            return Err(format!("step {}: expected {s} at {path:?}, found {here}", self.steps.len()));
        }
        let w = whisker(&self.cur, path, cell).expect("path checked");
        self.cur = self.cur.replace_at(path, t).expect("path checked");
        self.steps.push(w);
        Ok(self)
    }

    /// Applies a named 2-generator or structural cell at `path`.
    pub fn gen(&mut self, path: &[usize], name: &str) -> Result<&mut Self, String> {
        self.apply(path, Cell::gen(name))
    }

    pub fn finish(&self) -> Cell {
        if self.steps.is_empty() {
            Cell::id(self.start.clone())
        } else {
            Cell::chain(self.steps.iter().cloned())
        }
    }
}

// ---------------------------------------------------------------------------
// Shared pieces
// ---------------------------------------------------------------------------

fn o(n: &str) -> Obj {
    Obj::gen(n)
}

fn g(n: &str) -> Morph {
    Morph::gen(n)
}

fn pair(x: &str, y: &str) -> Obj {
    Obj::tensor(o(x), o(y))
}

/// The zigzag `x → x` built from `coev` on the right and `ev` on the left;
/// `twist_cup` / `twist_cap` insert a braid after the cup / before the cap.
fn zigzag(x: &str, y: &str, twist_cup: bool, twist_cap: bool) -> Morph {
    let cup = if twist_cup { Morph::then(g("coev"), Morph::Braid(o(x), o(y))) } else { g("coev") };
    let cap = if twist_cap { Morph::then(Morph::Braid(o(x), o(y)), g("ev")) } else { g("ev") };
    Morph::chain([
        Morph::RUnit(o(x)),
        Morph::tensor(Morph::Id(o(x)), cup),
        Morph::adj(Morph::Assoc(o(x), o(y), o(x))),
        Morph::tensor(cap, Morph::Id(o(x))),
        Morph::LUnit(o(x)),
    ])
}

/// The zigzag shapes of the oriented cusp generators.
pub fn oriented_zigzags() -> (Morph, Morph) {
    // pt+ strand: the cup is braided so that its legs read (pt+ ⊗ pt-) then (pt- ⊗ pt+).
    let zp = Morph::chain([
        Morph::RUnit(o("pt+")),
        Morph::tensor(Morph::Id(o("pt+")), Morph::then(g("coev"), Morph::Braid(o("pt+"), o("pt-")))),
        Morph::adj(Morph::Assoc(o("pt+"), o("pt-"), o("pt+"))),
        Morph::tensor(g("ev"), Morph::Id(o("pt+"))),
        Morph::LUnit(o("pt+")),
    ]);
    let zm = Morph::chain([
        Morph::RUnit(o("pt-")),
        Morph::tensor(Morph::Id(o("pt-")), g("coev")),
        Morph::adj(Morph::Assoc(o("pt-"), o("pt+"), o("pt-"))),
        Morph::tensor(Morph::then(Morph::Braid(o("pt-"), o("pt+")), g("ev")), Morph::Id(o("pt-"))),
        Morph::LUnit(o("pt-")),
    ]);
    (zp, zm)
}

/// The unoriented zigzag `pt → pt`.
pub fn unoriented_zigzag() -> Morph {
    zigzag("pt", "pt", false, false)
}

fn circle() -> Morph {
    Morph::then(g("coev"), g("ev"))
}

fn elbow_gens(x: &Obj) -> Vec<OneGen> {
    vec![
        OneGen { name: "ev".into(), src: x.clone(), tgt: Obj::Unit },
        OneGen { name: "coev".into(), src: Obj::Unit, tgt: x.clone() },
    ]
}

fn morse_gens(x: &Obj) -> Vec<(TwoGen, Role)> {
    let ix = Morph::Id(x.clone());
    let ev_coev = Morph::then(g("ev"), g("coev"));
    vec![
        (TwoGen { name: "cap".into(), src: Morph::Id(Obj::Unit), tgt: circle() }, Role::Cap),
        (TwoGen { name: "cup".into(), src: circle(), tgt: Morph::Id(Obj::Unit) }, Role::Cup),
        (TwoGen { name: "saddle".into(), src: ev_coev.clone(), tgt: ix.clone() }, Role::Saddle),
        (TwoGen { name: "cosaddle".into(), src: ix, tgt: ev_coev }, Role::Cosaddle),
    ]
}

fn st(s: StructCell) -> Cell {
    Cell::st(s)
}

fn inv(s: StructCell) -> Cell {
    Cell::inv(s)
}

/// The four Morse cancellations (cap or cosaddle next to an elbow, undone by a
/// saddle or cup).
fn morse_relations(data: &GeneratingData) -> Vec<Relation> {
    let (ev, coev) = (g("ev"), g("coev"));
    let mut out = Vec::new();
    let mut b = Builder::new(data, coev.clone());
    b.apply(&[], inv(StructCell::Rc(coev.clone())))
        .and_then(|b| b.gen(&[0], "cap"))
        .and_then(|b| b.apply(&[], st(StructCell::Ac(coev.clone(), ev.clone(), coev.clone()))))
        .and_then(|b| b.gen(&[1], "saddle"))
        .and_then(|b| b.apply(&[], st(StructCell::Lc(coev.clone()))))
        .expect("morse1");
    out.push(Relation { name: "morse1".into(), lhs: b.finish(), rhs: Cell::id(coev.clone()) });

    let mut b = Builder::new(data, coev.clone());
    b.apply(&[], inv(StructCell::Lc(coev.clone())))
        .and_then(|b| b.gen(&[1], "cosaddle"))
        .and_then(|b| b.apply(&[], inv(StructCell::Ac(coev.clone(), ev.clone(), coev.clone()))))
        .and_then(|b| b.gen(&[0], "cup"))
        .and_then(|b| b.apply(&[], st(StructCell::Rc(coev.clone()))))
        .expect("morse2");
    out.push(Relation { name: "morse2".into(), lhs: b.finish(), rhs: Cell::id(coev.clone()) });

    let mut b = Builder::new(data, ev.clone());
    b.apply(&[], inv(StructCell::Lc(ev.clone())))
        .and_then(|b| b.gen(&[1], "cap"))
        .and_then(|b| b.apply(&[], inv(StructCell::Ac(ev.clone(), coev.clone(), ev.clone()))))
        .and_then(|b| b.gen(&[0], "saddle"))
        .and_then(|b| b.apply(&[], st(StructCell::Rc(ev.clone()))))
        .expect("morse3");
    out.push(Relation { name: "morse3".into(), lhs: b.finish(), rhs: Cell::id(ev.clone()) });

    let mut b = Builder::new(data, ev.clone());
    b.apply(&[], inv(StructCell::Rc(ev.clone())))
        .and_then(|b| b.gen(&[0], "cosaddle"))
        .and_then(|b| b.apply(&[], st(StructCell::Ac(ev.clone(), coev.clone(), ev.clone()))))
        .and_then(|b| b.gen(&[1], "cup"))
        .and_then(|b| b.apply(&[], st(StructCell::Lc(ev.clone()))))
        .expect("morse4");
    out.push(Relation { name: "morse4".into(), lhs: b.finish(), rhs: Cell::id(ev) });
    out
}

/// `g . g_inv = id` and `g_inv . g = id`.
fn inverse_pair(name: &str, inv_name: &str, src: &Morph, tgt: &Morph) -> [Relation; 2] {
    [
        Relation {
            name: format!("{name}.{inv_name}"),
            lhs: Cell::chain([Cell::gen(name), Cell::gen(inv_name)]),
            rhs: Cell::id(src.clone()),
        },
        Relation {
            name: format!("{inv_name}.{name}"),
            lhs: Cell::chain([Cell::gen(inv_name), Cell::gen(name)]),
            rhs: Cell::id(tgt.clone()),
        },
    ]
}

fn build(name: &str, oriented: bool, objects: Vec<String>, one: Vec<OneGen>, two: Vec<(TwoGen, Role)>) -> Presentation {
    let roles = two.iter().map(|(t, r)| (t.name.clone(), *r)).collect();
    let data = GeneratingData::new(objects, one, two.into_iter().map(|(t, _)| t).collect())
        .expect("built-in generating data is well-formed");
    Presentation { name: name.into(), oriented, data, roles, relations: Vec::new() }
}

/// Unoriented 2D bordism: one object `pt`, elbows `ev`/`coev`, four symmetry,
/// four Morse and two cusp generators.
pub fn bord2_unoriented() -> Presentation {
    let x = pair("pt", "pt");
    let pt = o("pt");
    let beta = Morph::Braid(pt.clone(), pt.clone());
    let ev_t = Morph::then(beta.clone(), g("ev"));
    let coev_t = Morph::then(g("coev"), beta.clone());
    let z = unoriented_zigzag();
    let mut two = vec![
        (TwoGen { name: "sym_ev".into(), src: g("ev"), tgt: ev_t.clone() }, Role::Sym),
        (TwoGen { name: "sym_ev_inv".into(), src: ev_t.clone(), tgt: g("ev") }, Role::SymInv),
        (TwoGen { name: "sym_coev".into(), src: g("coev"), tgt: coev_t.clone() }, Role::Sym),
        (TwoGen { name: "sym_coev_inv".into(), src: coev_t.clone(), tgt: g("coev") }, Role::SymInv),
    ];
    two.extend(morse_gens(&x));
    two.push((TwoGen { name: "cusp".into(), src: z.clone(), tgt: Morph::Id(pt.clone()) }, Role::Cusp));
    two.push((TwoGen { name: "cusp_inv".into(), src: Morph::Id(pt.clone()), tgt: z.clone() }, Role::CuspInv));
    let mut p = build("unoriented", false, vec!["pt".into()], elbow_gens(&x), two);

    let mut rels = Vec::new();
    rels.extend(inverse_pair("cusp", "cusp_inv", &z, &Morph::Id(pt.clone())));
    rels.extend(morse_relations(&p.data));
    rels.extend(inverse_pair("sym_ev", "sym_ev_inv", &g("ev"), &ev_t));
    rels.extend(inverse_pair("sym_coev", "sym_coev_inv", &g("coev"), &coev_t));
    // Twisting an elbow twice is the identity.
    let sig = StructCell::Sig(pt.clone(), pt.clone());
    let mut b = Builder::new(&p.data, g("ev"));
    b.gen(&[], "sym_ev")
        .and_then(|b| b.gen(&[1], "sym_ev"))
        .and_then(|b| b.apply(&[], inv(StructCell::Ac(g("ev"), beta.clone(), beta.clone()))))
        .and_then(|b| b.apply(&[0], inv(sig.clone())))
        .and_then(|b| b.apply(&[], st(StructCell::Rc(g("ev")))))
        .expect("twist_ev");
    rels.push(Relation { name: "twist_ev".into(), lhs: b.finish(), rhs: Cell::id(g("ev")) });
    let mut b = Builder::new(&p.data, g("coev"));
    b.gen(&[], "sym_coev")
        .and_then(|b| b.gen(&[0], "sym_coev"))
        .and_then(|b| b.apply(&[], st(StructCell::Ac(beta.clone(), beta.clone(), g("coev")))))
        .and_then(|b| b.apply(&[1], inv(sig)))
        .and_then(|b| b.apply(&[], st(StructCell::Lc(g("coev")))))
        .expect("twist_coev");
    rels.push(Relation { name: "twist_coev".into(), lhs: b.finish(), rhs: Cell::id(g("coev")) });
    p.relations = rels;
    debug_assert_eq!(p.relations.len(), UNORIENTED_RELATION_COUNT);
    p
}

/// Oriented 2D bordism: objects `pt+`, `pt-`, elbows on `(pt+ ⊗ pt-)`, four
/// Morse generators and four cusp generators (one zigzag per orientation and
/// their inverses).
pub fn bord2_oriented() -> Presentation {
    let x = pair("pt+", "pt-");
    let (zp, zm) = oriented_zigzags();
    let (ip, im) = (Morph::Id(o("pt+")), Morph::Id(o("pt-")));
    let mut two = morse_gens(&x);
    two.push((TwoGen { name: "cusp_p".into(), src: zp.clone(), tgt: ip.clone() }, Role::Cusp));
    two.push((TwoGen { name: "cusp_p_inv".into(), src: ip.clone(), tgt: zp.clone() }, Role::CuspInv));
    two.push((TwoGen { name: "cusp_m".into(), src: zm.clone(), tgt: im.clone() }, Role::Cusp));
    two.push((TwoGen { name: "cusp_m_inv".into(), src: im.clone(), tgt: zm.clone() }, Role::CuspInv));
    let mut p = build("oriented", true, vec!["pt+".into(), "pt-".into()], elbow_gens(&x), two);
    let mut rels = Vec::new();
    rels.extend(inverse_pair("cusp_p", "cusp_p_inv", &zp, &ip));
    rels.extend(inverse_pair("cusp_m", "cusp_m_inv", &zm, &im));
    rels.extend(morse_relations(&p.data));
    p.relations = rels;
    debug_assert_eq!(p.relations.len(), ORIENTED_RELATION_COUNT);
    p
}

/// Looks up a built-in presentation by name.
pub fn by_name(name: &str) -> Option<Presentation> {
    match name {
        "unoriented" => Some(bord2_unoriented()),
        "oriented" => Some(bord2_oriented()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Forgetting orientations
// ---------------------------------------------------------------------------

fn forget_obj(n: &str) -> String {
    match n {
        "pt+" | "pt-" => "pt".into(),
        other => other.into(),
    }
}

fn same(n: &str) -> String {
    n.to_string()
}

/// Path of the braided cup inside the oriented `pt+` zigzag.
const ZP_CUP_PATH: [usize; 5] = [0, 0, 0, 1, 1];
/// Path of the braided cap inside the oriented `pt-` zigzag.
const ZM_CAP_PATH: [usize; 3] = [0, 1, 0];

/// Image of an oriented term under the forgetful map to unoriented bordism.
/// Morse generators keep their names; each oriented cusp becomes the
/// unoriented cusp after untwisting its braided elbow.
pub fn forget_orientation(t: &Cell) -> Cell {
    let zp = zigzag("pt", "pt", true, false);
    let zm = zigzag("pt", "pt", false, true);
    let image = |name: &str| -> Cell {
        match name {
            "cusp_p" => Cell::chain([whisker(&zp, &ZP_CUP_PATH, Cell::gen("sym_coev_inv")).unwrap(), Cell::gen("cusp")]),
            "cusp_p_inv" => Cell::chain([Cell::gen("cusp_inv"), whisker(&zp, &ZP_CUP_PATH, Cell::gen("sym_coev")).unwrap()]),
            "cusp_m" => Cell::chain([whisker(&zm, &ZM_CAP_PATH, Cell::gen("sym_ev_inv")).unwrap(), Cell::gen("cusp")]),
            "cusp_m_inv" => Cell::chain([Cell::gen("cusp_inv"), whisker(&zm, &ZM_CAP_PATH, Cell::gen("sym_ev")).unwrap()]),
            other => Cell::gen(other),
        }
    };
    fn go(t: &Cell, image: &dyn Fn(&str) -> Cell) -> Cell {
        match t {
            Cell::Gen(n) => image(n),
            Cell::Struct(s) => Cell::Struct(s.map_gens(&forget_obj, &same)),
            Cell::Inv(x) => Cell::Inv(alloc::boxed::Box::new(go(x, image))),
            Cell::VComp(v) => Cell::chain(v.iter().map(|c| go(c, image))),
            Cell::HComp(a, b) => Cell::hc(go(a, image), go(b, image)),
            Cell::Tensor(a, b) => Cell::tensor(go(a, image), go(b, image)),
        }
    }
    go(t, &image)
}

// ---------------------------------------------------------------------------
// Standard closed surfaces
// ---------------------------------------------------------------------------

/// `cap` followed by `cup`.
pub fn sphere_term() -> Cell {
    Cell::chain([Cell::gen("cap"), Cell::gen("cup")])
}

/// Closed orientable surface of genus `g`: a circle is born, `g` times split
/// and re-merged, then capped off. Valid over both presentations.
pub fn genus_term(p: &Presentation, genus: usize) -> Cell {
    let ev = g("ev");
    let mut b = Builder::new(&p.data, Morph::Id(Obj::Unit));
    b.gen(&[], "cap").and_then(|b| b.apply(&[1], inv(StructCell::Rc(ev.clone())))).expect("genus prefix");
    for _ in 0..genus {
        b.gen(&[1, 0], "cosaddle").and_then(|b| b.gen(&[1, 0], "saddle")).expect("handle");
    }
    b.apply(&[1], st(StructCell::Rc(ev))).and_then(|b| b.gen(&[], "cup")).expect("genus suffix");
    b.finish()
}

/// Counts 2-generator leaves by role.
pub fn role_counts(p: &Presentation, t: &Cell) -> BTreeMap<Role, usize> {
    let mut out = BTreeMap::new();
    t.for_each_leaf(&mut |c| {
        if let Cell::Gen(n) = c {
            if let Some(r) = p.role(n) {
                *out.entry(r).or_insert(0) += 1;
            }
        }
    });
    out
}
