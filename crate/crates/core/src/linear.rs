//! Linear diagrams: combinatorial descriptions of a 1-manifold with a Morse
//! function to the line, and the moves relating equivalent diagrams.
//!
//! A diagram is a left-to-right sequence of regions separated by
//! permutations. A plain region `(N)` carries `N` sheets. A `cap` region
//! `(N cap)` has `N − 2` sheets on its left and `N` on its right: the top two
//! sheets (positions `N − 1, N`) are born in it. A `cup` region `(N cup)` is
//! the mirror image: the top two sheets die. A separator `σ` connects sheet
//! `i` on its left to sheet `σ(i)` on its right. Sheets on the far left and
//! far right run off to infinity.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RegionKind {
    Plain,
    /// Two sheets are born.
    Cap,
    /// Two sheets die.
    Cup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub sheets: usize,
    pub kind: RegionKind,
}

impl Region {
    pub fn plain(n: usize) -> Self {
        Region { sheets: n, kind: RegionKind::Plain }
    }

    /// Sheets on the left boundary.
    pub fn left(&self) -> usize {
        match self.kind {
            RegionKind::Cap => self.sheets - 2,
            _ => self.sheets,
        }
    }

    /// Sheets on the right boundary.
    pub fn right(&self) -> usize {
        match self.kind {
            RegionKind::Cup => self.sheets - 2,
            _ => self.sheets,
        }
    }
}

/// Permutation in image form (`p[i]` is the image of `i`), zero-based.
pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// `first` followed by `second`.
pub fn then(first: &Perm, second: &Perm) -> Perm {
    first.iter().map(|&i| second[i]).collect()
}

fn is_perm(p: &Perm) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !core::mem::replace(&mut seen[i], true))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearDiagram {
    pub regions: Vec<Region>,
    /// `separators[k]` sits between regions `k` and `k + 1`.
    pub separators: Vec<Perm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("move {0:?} does not apply at position {1}")]
    Inapplicable(LinearMove, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LinearMove {
    /// Inserts a plain region with identity separator before a region.
    Isotopy,
    /// Moves a separator fixing the top two sheets across a cap or cup region.
    CommuteSmallSigma,
    /// Absorbs the transposition of the top two sheets into a cap (on its
    /// right) or a cup (on its left).
    AbsorbTransposition,
    /// Removes an interior plain region, composing its two separators.
    MergePermutations,
    /// Cancels `(N cap) (N−2 N−1 N) (N cup)` to a plain region.
    CancelCupCap,
}

impl LinearMove {
    pub const ALL: [LinearMove; 5] = [
        LinearMove::Isotopy,
        LinearMove::CommuteSmallSigma,
        LinearMove::AbsorbTransposition,
        LinearMove::MergePermutations,
        LinearMove::CancelCupCap,
    ];
}

/// Component census of the reconstructed 1-manifold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub circles: usize,
    pub intervals: usize,
}

impl LinearDiagram {
    pub fn new(regions: Vec<Region>, separators: Vec<Perm>) -> Result<Self, LinearError> {
        let d = LinearDiagram { regions, separators };
        d.check()?;
        Ok(d)
    }

    pub fn check(&self) -> Result<(), LinearError> {
        let bad = |m: String| Err(LinearError::Invalid(m));
        if self.regions.is_empty() {
            return bad("no regions".into());
        }
        if self.separators.len() + 1 != self.regions.len() {
            return bad("separator count must be one less than region count".into());
        }
        for (k, r) in self.regions.iter().enumerate() {
            if r.kind != RegionKind::Plain && r.sheets < 2 {
                return bad(format!("region {k} has a turning point with fewer than 2 sheets"));
            }
        }
        for (k, s) in self.separators.iter().enumerate() {
            let (l, r) = (self.regions[k].right(), self.regions[k + 1].left());
            if l != r {
                return bad(format!("sheet counts {l} and {r} differ across separator {k}"));
            }
            if s.len() != l || !is_perm(s) {
                return bad(format!("separator {k} is not a permutation of {l} sheets"));
            }
        }
        Ok(())
    }

    /// Circles and intervals of the described 1-manifold.
    pub fn reconstruct_1manifold(&self) -> Result<Census, LinearError> {
        self.check()?;
        // Node (region, side, sheet) numbered consecutively.
        let mut offs = Vec::new();
        let mut total = 0;
        for r in &self.regions {
            offs.push((total, total + r.left()));
            total += r.left() + r.right();
        }
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        };
        for (k, r) in self.regions.iter().enumerate() {
            let (l, rt) = offs[k];
            let through = r.left().min(r.right());
            for i in 0..through {
                union(l + i, rt + i);
            }
            match r.kind {
                RegionKind::Cap => union(rt + r.sheets - 2, rt + r.sheets - 1),
                RegionKind::Cup => union(l + r.sheets - 2, l + r.sheets - 1),
                RegionKind::Plain => {}
            }
        }
        for (k, s) in self.separators.iter().enumerate() {
            for (i, &j) in s.iter().enumerate() {
                union(offs[k].1 + i, offs[k + 1].0 + j);
            }
        }
        let last = self.regions.len() - 1;
        let ends: Vec<usize> = (0..self.regions[0].left())
            .map(|i| offs[0].0 + i)
            .chain((0..self.regions[last].right()).map(|i| offs[last].1 + i))
            .collect();
        let mut roots: Vec<usize> = (0..total).map(|x| find(&mut parent, x)).collect();
        let mut end_roots: Vec<usize> = ends.iter().map(|&e| roots[e]).collect();
        end_roots.sort_unstable();
        end_roots.dedup();
        roots.sort_unstable();
        roots.dedup();
        Ok(Census { circles: roots.len() - end_roots.len(), intervals: end_roots.len() })
    }

    /// Positions at which a move applies.
    pub fn applicable(&self, m: LinearMove) -> Vec<usize> {
        (0..self.regions.len().max(self.separators.len())).filter(|&k| self.apply_move(m, k).is_ok()).collect()
    }

    /// Applies a move. Positions index regions, except for
    /// [`LinearMove::CommuteSmallSigma`] where they index separators.
    pub fn apply_move(&self, m: LinearMove, pos: usize) -> Result<LinearDiagram, LinearError> {
        let no = Err(LinearError::Inapplicable(m, pos));
        let mut d = self.clone();
        match m {
            LinearMove::Isotopy => {
                let Some(r) = self.regions.get(pos) else { return no };
                d.regions.insert(pos, Region::plain(r.left()));
                d.separators.insert(pos, identity(r.left()));
            }
            LinearMove::MergePermutations => {
                if pos == 0 || pos + 1 >= self.regions.len() || self.regions[pos].kind != RegionKind::Plain {
                    return no;
                }
                let merged = then(&self.separators[pos - 1], &self.separators[pos]);
                d.regions.remove(pos);
                d.separators.remove(pos);
                d.separators[pos - 1] = merged;
            }
            LinearMove::AbsorbTransposition => {
                let Some(r) = self.regions.get(pos) else { return no };
                let n = r.sheets;
                let mut t = identity(n);
                match r.kind {
                    RegionKind::Cap if pos < self.separators.len() => {
                        t.swap(n - 2, n - 1);
                        d.separators[pos] = then(&t, &self.separators[pos]);
                    }
                    RegionKind::Cup if pos > 0 => {
                        t.swap(n - 2, n - 1);
                        d.separators[pos - 1] = then(&self.separators[pos - 1], &t);
                    }
                    _ => return no,
                }
            }
            LinearMove::CommuteSmallSigma => {
                // Separator `pos` moves across region `pos + 1`.
                let k = pos + 1;
                if k >= self.regions.len() || k >= self.separators.len() {
                    return no;
                }
                let r = self.regions[k];
                let s = &self.separators[pos];
                let Some(small) = r.sheets.checked_sub(2) else { return no };
                let moved: Perm = match r.kind {
                    RegionKind::Cap => (0..r.sheets).map(|i| if i < small { s[i] } else { i }).collect(),
                    RegionKind::Cup if (small..r.sheets).all(|i| s[i] == i) => s[..small].to_vec(),
                    _ => return no,
                };
                d.separators[pos] = identity(r.left());
                d.separators[k] = then(&moved, &self.separators[k]);
            }
            LinearMove::CancelCupCap => {
                if pos + 1 >= self.regions.len() {
                    return no;
                }
                let (a, b) = (self.regions[pos], self.regions[pos + 1]);
                let n = a.sheets;
                if a.kind != RegionKind::Cap || b.kind != RegionKind::Cup || b.sheets != n || n < 3 {
                    return no;
                }
                let mut cyc = identity(n);
                cyc[n - 3] = n - 2;
                cyc[n - 2] = n - 1;
                cyc[n - 1] = n - 3;
                if self.separators[pos] != cyc {
                    return no;
                }
                d.regions.splice(pos..pos + 2, [Region::plain(n - 2)]);
                d.separators.remove(pos);
            }
        }
        d.check()?;
        Ok(d)
    }
}

fn cycles(p: &Perm) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut c = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = p[i];
        }
        out.push(c);
    }
    out
}

impl fmt::Display for LinearDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.regions.iter().any(|r| r.sheets > 9);
        for (k, r) in self.regions.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
                let cs = cycles(&self.separators[k - 1]);
                if cs.is_empty() {
                    f.write_str("[]")?;
                }
                for c in cs {
                    let items: Vec<String> = c.iter().map(|i| format!("{}", i + 1)).collect();
                    write!(f, "[{}]", items.join(if wide { "," } else { "" }))?;
                }
                f.write_str(" ")?;
            }
            match r.kind {
                RegionKind::Plain => write!(f, "({})", r.sheets)?,
                RegionKind::Cap => write!(f, "({} cap)", r.sheets)?,
                RegionKind::Cup => write!(f, "({} cup)", r.sheets)?,
            }
        }
        Ok(())
    }
}

fn parse_cycle(body: &str) -> Result<Vec<usize>, LinearError> {
    let items: Vec<&str> = if body.contains(',') {
        body.split(',').map(str::trim).collect()
    } else {
        body.char_indices().map(|(i, c)| &body[i..i + c.len_utf8()]).filter(|s| !s.trim().is_empty()).collect()
    };
    items
        .into_iter()
        .map(|s| match s.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v - 1),
            _ => Err(LinearError::Parse(format!("bad sheet index {s:?}"))),
        })
        .collect()
}

/// Parses `(5 cap) [24][35] (5 cup) [] (3)`.
pub fn parse(text: &str) -> Result<LinearDiagram, LinearError> {
    let mut regions = Vec::new();
    let mut seps: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut pending: Option<Vec<Vec<usize>>> = None;
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest.as_bytes()[0];
        let close = match open {
            b'(' => ')',
            b'[' => ']',
            _ => return Err(LinearError::Parse(format!("unexpected text {rest:?}"))),
        };
        let end = rest.find(close).ok_or_else(|| LinearError::Parse(format!("unclosed {:?}", open as char)))?;
        let body = &rest[1..end];
        if open == b'(' {
            if !regions.is_empty() {
                seps.push(pending.take().ok_or_else(|| LinearError::Parse("missing separator".into()))?);
            } else if pending.is_some() {
                return Err(LinearError::Parse("diagram must start with a region".into()));
            }
            let mut words = body.split_whitespace();
            let n: usize = words
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| LinearError::Parse(format!("bad region {body:?}")))?;
            let kind = match words.next() {
                None => RegionKind::Plain,
                Some("cap") => RegionKind::Cap,
                Some("cup") => RegionKind::Cup,
                Some(w) => return Err(LinearError::Parse(format!("unknown region kind {w:?}"))),
            };
            if words.next().is_some() {
                return Err(LinearError::Parse(format!("bad region {body:?}")));
            }
            regions.push(Region { sheets: n, kind });
        } else {
            if regions.is_empty() {
                return Err(LinearError::Parse("diagram must start with a region".into()));
            }
            let c = parse_cycle(body)?;
            pending.get_or_insert_with(Vec::new);
            if !c.is_empty() {
                pending.as_mut().expect("just set").push(c);
            }
        }
        rest = rest[end + 1..].trim_start();
    }
    if pending.is_some() {
        return Err(LinearError::Parse("diagram must end with a region".into()));
    }
    if regions.is_empty() {
        return Err(LinearError::Parse("empty diagram".into()));
    }
    let mut separators = Vec::new();
    for (k, cs) in seps.into_iter().enumerate() {
        let n = regions[k].right();
        let mut p = identity(n);
        for c in cs {
            if c.iter().any(|&i| i >= n) {
                return Err(LinearError::Invalid(format!("separator {k} mentions a sheet beyond {n}")));
            }
            if (1..c.len()).any(|w| c[..w].contains(&c[w])) {
                return Err(LinearError::Invalid(format!("separator {k} repeats a sheet within one cycle")));
            }
            let mut cyc = identity(n);
            for w in 0..c.len() {
                cyc[c[w]] = c[(w + 1) % c.len()];
            }
            p = then(&p, &cyc);
        }
        separators.push(p);
    }
    LinearDiagram::new(regions, separators)
}
