//! Plain-text algebra files.
//!
//! ```text
//! # comment
//! name M2Q
//! dim 4
//! mult 0 1 -> 1:1          (x_0 · x_1 = x_1; omitted products are zero)
//! unit 0:1 3:1
//! lambda 0:1 3:1
//! e 0,0:1 1,2:1
//! star 1 0 0 0             (one line per row, n lines)
//! ```
//!
//! Indices are zero-based; coefficients are rationals `p` or `p/q`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::FrobAlgebra;
use crate::linalg::{parse_rational, Matrix};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct AlgFileError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, AlgFileError> {
    Err(AlgFileError { line, message: message.into() })
}

fn coeff(line: usize, s: &str) -> Result<Q, AlgFileError> {
    parse_rational(s).ok_or_else(|| AlgFileError { line, message: format!("bad rational {s:?}") })
}

fn index(line: usize, s: &str, n: usize) -> Result<usize, AlgFileError> {
    match s.trim().parse::<usize>() {
        Ok(i) if i < n => Ok(i),
        _ => err(line, format!("bad basis index {s:?} (dimension {n})")),
    }
}

/// Parses `k:q` terms into a dense vector.
fn sparse_vec(line: usize, words: &[&str], n: usize) -> Result<Vec<Q>, AlgFileError> {
    let mut v = vec![Q::zero(); n];
    for w in words {
        let (k, q) = w.split_once(':').ok_or_else(|| AlgFileError { line, message: format!("expected k:q, got {w:?}") })?;
        v[index(line, k, n)?] += coeff(line, q)?;
    }
    Ok(v)
}

pub fn parse(text: &str) -> Result<FrobAlgebra, AlgFileError> {
    let mut name = String::from("algebra");
    let mut dim: Option<usize> = None;
    let mut mult: Option<Vec<Vec<Vec<Q>>>> = None;
    let mut unit = None;
    let mut lambda = None;
    let mut e: Option<Matrix> = None;
    let mut star_rows: Vec<Vec<Q>> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let words: Vec<&str> = l.split_whitespace().collect();
        let key = words[0];
        if key == "name" {
            name = words[1..].join(" ");
            continue;
        }
        if key == "dim" {
            if dim.is_some() {
                return err(ln, "dim given twice");
            }
            let n: usize = words.get(1).and_then(|w| w.parse().ok()).ok_or_else(|| AlgFileError { line: ln, message: "bad dim".into() })?;
            if n == 0 {
                return err(ln, "dim must be positive");
            }
            dim = Some(n);
            mult = Some(vec![vec![vec![Q::zero(); n]; n]; n]);
            continue;
        }
        let Some(n) = dim else { return err(ln, "dim must come first") };
        match key {
            "mult" => {
                if words.len() < 4 || words[3] != "->" {
                    return err(ln, "expected `mult i j -> k:q ...`");
                }
                let (i, j) = (index(ln, words[1], n)?, index(ln, words[2], n)?);
                let v = sparse_vec(ln, &words[4..], n)?;
                mult.as_mut().expect("set with dim")[i][j] = v;
            }
            "unit" => unit = Some(sparse_vec(ln, &words[1..], n)?),
            "lambda" => lambda = Some(sparse_vec(ln, &words[1..], n)?),
            "e" => {
                let mut m = Matrix::zeros(n, n);
                for w in &words[1..] {
                    let (ij, q) = w.split_once(':').ok_or_else(|| AlgFileError { line: ln, message: format!("expected i,j:q, got {w:?}") })?;
                    let (i, j) = ij.split_once(',').ok_or_else(|| AlgFileError { line: ln, message: format!("expected i,j:q, got {w:?}") })?;
                    let (i, j) = (index(ln, i, n)?, index(ln, j, n)?);
                    m[(i, j)] += coeff(ln, q)?;
                }
                e = Some(m);
            }
            "star" => {
                if words.len() != n + 1 {
                    return err(ln, format!("star row needs {n} entries"));
                }
                star_rows.push(words[1..].iter().map(|w| coeff(ln, w)).collect::<Result<_, _>>()?);
            }
            other => return err(ln, format!("unknown keyword {other:?}")),
        }
    }
    let Some(n) = dim else { return err(0, "missing dim") };
    let unit = unit.ok_or_else(|| AlgFileError { line: 0, message: "missing unit".into() })?;
    let mut a = FrobAlgebra::new(&name, mult.expect("set with dim"), unit);
    a.lambda = lambda;
    a.e = e;
    if !star_rows.is_empty() {
        if star_rows.len() != n {
            return err(0, format!("star needs {n} rows, got {}", star_rows.len()));
        }
        a.star = Some(Matrix::from_rows(star_rows));
    }
    Ok(a)
}

/// Prints an algebra in the file format; `parse(print(a))` reproduces `a`.
pub fn print(a: &FrobAlgebra) -> String {
    let n = a.dim;
    let terms = |v: &[Q]| -> String {
        v.iter().enumerate().filter(|(_, q)| !q.is_zero()).map(|(k, q)| format!(" {k}:{q}")).collect()
    };
    let mut out = format!("name {}\ndim {n}\n", a.name);
    for i in 0..n {
        for j in 0..n {
            if a.mult[i][j].iter().any(|q| !q.is_zero()) {
                out += &format!("mult {i} {j} ->{}\n", terms(&a.mult[i][j]));
            }
        }
    }
    out += &format!("unit{}\n", terms(&a.unit));
    if let Some(l) = &a.lambda {
        out += &format!("lambda{}\n", terms(l));
    }
    if let Some(e) = &a.e {
        out += "e";
        for i in 0..n {
            for j in 0..n {
                if !e[(i, j)].is_zero() {
                    out += &format!(" {i},{j}:{}", e[(i, j)]);
                }
            }
        }
        out += "\n";
    }
    if let Some(s) = &a.star {
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| format!("{}", s[(i, j)])).collect();
            out += &format!("star {}\n", row.join(" "));
        }
    }
    out
}
