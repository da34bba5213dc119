//! Recursive-descent parser for the term DSL.
//!
//! Grammar (whitespace-insensitive, `(*)` is an ASCII alias for `⊗`):
//!
//! ```text
//! obj   := 1 | NAME | ( obj ⊗ obj )
//! morph := NAME | I[obj] | alpha[obj,obj,obj] | l[obj] | r[obj] | beta[obj,obj]
//!        | inv(morph) | ( morph ; morph ) | ( morph ⊗ morph )
//! cell  := NAME | id[morph] | ac[morph,morph,morph] | rc[morph] | lc[morph]
//!        | eta[morph] | eps[morph] | phi[(morph,morph),(morph,morph)] | phi0[obj,obj]
//!        | assoc2[morph,morph,morph] | l2[morph] | r2[morph] | beta2[morph,morph]
//!        | pi[obj,obj,obj,obj] | mu[obj,obj] | lam[obj,obj] | rho[obj,obj]
//!        | RR[obj,obj,obj] | SS[obj,obj,obj] | sig[obj,obj] | inv2(cell)
//!        | ( cell . cell . ... ) | ( cell # cell ) | ( cell ⊗ cell )
//! ```

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::term::{Cell, Morph, Obj, StructCell};

/// Names that cannot be used for generators.
pub const RESERVED: &[&str] = &[
    "1", "I", "alpha", "l", "r", "beta", "inv", "inv2", "id", "ac", "rc", "lc", "eta", "eps",
    "phi", "phi0", "assoc2", "l2", "r2", "beta2", "pi", "mu", "lam", "rho", "RR", "SS", "sig",
];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Dot,
    Hash,
    Tensor,
    Name(String),
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '1'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '+' | '-' | '−' | '\'')
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if text[i..].starts_with("(*)") {
            out.push((i, Tok::Tensor));
            for _ in 0..3 {
                it.next();
            }
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '.' => Tok::Dot,
            '#' => Tok::Hash,
            '⊗' => Tok::Tensor,
            c if is_name_start(c) => {
                let mut name = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if is_name_char(c) {
                        name.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((i, Tok::Name(name)));
                continue;
            }
            other => {
                return Err(ParseError { pos: i, msg: format!("unexpected character {other:?}") })
            }
        };
        out.push((i, tok));
        it.next();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len() })
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.here(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() { Ok(()) } else { self.err("trailing input") }
    }

    fn name(&mut self) -> Option<String> {
        if let Some(Tok::Name(n)) = self.peek() {
            let n = n.clone();
            self.pos += 1;
            Some(n)
        } else {
            None
        }
    }

    fn obj(&mut self) -> Result<Obj, ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let a = self.obj()?;
            self.expect(Tok::Tensor, "⊗")?;
            let b = self.obj()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(Obj::tensor(a, b));
        }
        match self.name() {
            Some(n) if n == "1" => Ok(Obj::Unit),
            Some(n) if RESERVED.contains(&n.as_str()) => {
                self.pos -= 1;
                self.err(format!("reserved name {n:?} used as object generator"))
            }
            Some(n) => Ok(Obj::Gen(n)),
            None => self.err("expected object word"),
        }
    }

    fn objs(&mut self, n: usize) -> Result<Vec<Obj>, ParseError> {
        self.expect(Tok::LBrack, "'['")?;
        let mut out = Vec::new();
        for i in 0..n {
            if i > 0 {
                self.expect(Tok::Comma, "','")?;
            }
            out.push(self.obj()?);
        }
        self.expect(Tok::RBrack, "']'")?;
        Ok(out)
    }

    fn morphs(&mut self, n: usize) -> Result<Vec<Morph>, ParseError> {
        self.expect(Tok::LBrack, "'['")?;
        let mut out = Vec::new();
        for i in 0..n {
            if i > 0 {
                self.expect(Tok::Comma, "','")?;
            }
            out.push(self.morph()?);
        }
        self.expect(Tok::RBrack, "']'")?;
        Ok(out)
    }

    fn morph(&mut self) -> Result<Morph, ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let a = self.morph()?;
            let node = match self.peek() {
                Some(Tok::Semi) => {
                    self.pos += 1;
                    Morph::then(a, self.morph()?)
                }
                Some(Tok::Tensor) => {
                    self.pos += 1;
                    Morph::tensor(a, self.morph()?)
                }
                _ => return self.err("expected ';' or ⊗"),
            };
            self.expect(Tok::RParen, "')'")?;
            return Ok(node);
        }
        let start = self.pos;
        let Some(n) = self.name() else { return self.err("expected morphism term") };
        let take = |p: &mut Self, k: usize| p.objs(k);
        Ok(match n.as_str() {
            "I" => Morph::Id(take(self, 1)?.remove(0)),
            "alpha" => {
                let mut v = take(self, 3)?;
                let w = v.pop().unwrap();
                let b = v.pop().unwrap();
                Morph::Assoc(v.pop().unwrap(), b, w)
            }
            "l" => Morph::LUnit(take(self, 1)?.remove(0)),
            "r" => Morph::RUnit(take(self, 1)?.remove(0)),
            "beta" => {
                let mut v = take(self, 2)?;
                let b = v.pop().unwrap();
                Morph::Braid(v.pop().unwrap(), b)
            }
            "inv" => {
                self.expect(Tok::LParen, "'('")?;
                let x = self.morph()?;
                self.expect(Tok::RParen, "')'")?;
                if !x.is_structural_leaf() {
                    self.pos = start;
                    return self.err("inv(..) applies only to a structural 1-cell symbol");
                }
                Morph::adj(x)
            }
            other if RESERVED.contains(&other) => {
                self.pos = start;
                return self.err(format!("reserved name {other:?} used as 1-generator"));
            }
            _ => Morph::Gen(n),
        })
    }

    fn cell(&mut self) -> Result<Cell, ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let a = self.cell()?;
            let node = match self.peek() {
                Some(Tok::Hash) => {
                    self.pos += 1;
                    Cell::hc(a, self.cell()?)
                }
                Some(Tok::Tensor) => {
                    self.pos += 1;
                    Cell::tensor(a, self.cell()?)
                }
                _ => {
                    let mut parts = alloc::vec![a];
                    while self.peek() == Some(&Tok::Dot) {
                        self.pos += 1;
                        parts.push(self.cell()?);
                    }
                    Cell::VComp(parts)
                }
            };
            self.expect(Tok::RParen, "')'")?;
            return Ok(node);
        }
        let start = self.pos;
        let Some(n) = self.name() else { return self.err("expected 2-cell term") };
        let s = match n.as_str() {
            "inv2" => {
                self.expect(Tok::LParen, "'('")?;
                let x = self.cell()?;
                self.expect(Tok::RParen, "')'")?;
                match &x {
                    Cell::Struct(s) if s.is_invertible() => {}
                    _ => {
                        self.pos = start;
                        return self.err("inv2(..) applies only to an invertible structural 2-cell symbol");
                    }
                }
                return Ok(Cell::Inv(Box::new(x)));
            }
            "id" => StructCell::Id(self.morphs(1)?.remove(0)),
            "rc" => StructCell::Rc(self.morphs(1)?.remove(0)),
            "lc" => StructCell::Lc(self.morphs(1)?.remove(0)),
            "eta" => StructCell::Eta(self.morphs(1)?.remove(0)),
            "eps" => StructCell::Eps(self.morphs(1)?.remove(0)),
            "l2" => StructCell::L2(self.morphs(1)?.remove(0)),
            "r2" => StructCell::R2(self.morphs(1)?.remove(0)),
            "ac" | "assoc2" => {
                let mut v = self.morphs(3)?.into_iter();
                let (a, b, c) = (v.next().unwrap(), v.next().unwrap(), v.next().unwrap());
                if n == "ac" { StructCell::Ac(a, b, c) } else { StructCell::Assoc2(a, b, c) }
            }
            "beta2" => {
                let mut v = self.morphs(2)?.into_iter();
                StructCell::Beta2(v.next().unwrap(), v.next().unwrap())
            }
            "phi" => {
                self.expect(Tok::LBrack, "'['")?;
                let pair = |p: &mut Self| -> Result<(Morph, Morph), ParseError> {
                    p.expect(Tok::LParen, "'('")?;
                    let a = p.morph()?;
                    p.expect(Tok::Comma, "','")?;
                    let b = p.morph()?;
                    p.expect(Tok::RParen, "')'")?;
                    Ok((a, b))
                };
                let (f, g) = pair(self)?;
                self.expect(Tok::Comma, "','")?;
                let (f2, g2) = pair(self)?;
                self.expect(Tok::RBrack, "']'")?;
                StructCell::Phi(f, g, f2, g2)
            }
            "phi0" | "mu" | "lam" | "rho" | "sig" => {
                let mut v = self.objs(2)?.into_iter();
                let (a, b) = (v.next().unwrap(), v.next().unwrap());
                match n.as_str() {
                    "phi0" => StructCell::Phi0(a, b),
                    "mu" => StructCell::Mu(a, b),
                    "lam" => StructCell::Lam(a, b),
                    "rho" => StructCell::Rho(a, b),
                    _ => StructCell::Sig(a, b),
                }
            }
            "RR" | "SS" => {
                let mut v = self.objs(3)?.into_iter();
                let (a, b, c) = (v.next().unwrap(), v.next().unwrap(), v.next().unwrap());
                if n == "RR" { StructCell::RR(a, b, c) } else { StructCell::SS(a, b, c) }
            }
            "pi" => {
                let mut v = self.objs(4)?.into_iter();
                StructCell::Pi(v.next().unwrap(), v.next().unwrap(), v.next().unwrap(), v.next().unwrap())
            }
            other if RESERVED.contains(&other) => {
                self.pos = start;
                return self.err(format!("reserved name {other:?} used as 2-generator"));
            }
            _ => return Ok(Cell::Gen(n)),
        };
        Ok(Cell::Struct(s))
    }
}

/// Parses an object word (syntax only).
pub fn obj(text: &str) -> Result<Obj, ParseError> {
    let mut p = Parser::new(text)?;
    let o = p.obj()?;
    p.finish()?;
    Ok(o)
}

/// Parses a morphism term (syntax only).
pub fn morph(text: &str) -> Result<Morph, ParseError> {
    let mut p = Parser::new(text)?;
    let m = p.morph()?;
    p.finish()?;
    Ok(m)
}

/// Parses a 2-cell term (syntax only).
pub fn cell(text: &str) -> Result<Cell, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.cell()?;
    p.finish()?;
    Ok(c)
}

/// Drops lines starting with `//`, the comment form used in `.bc` files.
pub fn strip_comments(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with("//"))
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}
