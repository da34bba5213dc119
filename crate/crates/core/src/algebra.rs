//! Finite-dimensional algebras over the rationals with Frobenius data.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::linalg::{q, solve_or_certify, Infeasibility, Matrix};
use crate::Q;

/// Algebra with basis `x_0 .. x_{n-1}`, optional Frobenius data `(λ, e)` and an
/// optional anti-automorphism `star`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobAlgebra {
    pub name: String,
    pub dim: usize,
    /// `mult[i][j][k]`: coefficient of `x_k` in `x_i x_j`.
    pub mult: Vec<Vec<Vec<Q>>>,
    pub unit: Vec<Q>,
    pub lambda: Option<Vec<Q>>,
    /// `e = Σ e[(i, j)] x_i ⊗ x_j`.
    pub e: Option<Matrix>,
    /// Column `j` holds `star(x_j)`.
    pub star: Option<Matrix>,
}

/// Outcome of a structure check: every failed identity with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub failures: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }
}

/// Result of [`FrobAlgebra::check_separable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separability {
    /// An `A`-central `ẽ` (as a coefficient matrix) with `μ(ẽ) = 1`.
    Separable(Matrix),
    NotSeparable(Infeasibility),
}

pub type Vector = Vec<Q>;

fn zero_vec(n: usize) -> Vector {
    vec![Q::zero(); n]
}

fn basis(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

fn add_scaled(acc: &mut [Q], v: &[Q], s: &Q) {
    if s.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += b * s;
        }
    }
}

fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

impl FrobAlgebra {
    /// Algebra from structure constants, unit and optional data.
    pub fn new(name: &str, mult: Vec<Vec<Vec<Q>>>, unit: Vector) -> Self {
        FrobAlgebra { name: name.into(), dim: unit.len(), mult, unit, lambda: None, e: None, star: None }
    }

    pub fn basis(&self, i: usize) -> Vector {
        basis(self.dim, i)
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                add_scaled(&mut out, &self.mult[i][j], &(a * b));
            }
        }
        out
    }

    pub fn apply_star(&self, x: &[Q]) -> Option<Vector> {
        self.star.as_ref().map(|s| s.mul_vec(x))
    }

    pub fn lambda_of(&self, x: &[Q]) -> Option<Q> {
        self.lambda.as_ref().map(|l| l.iter().zip(x).map(|(a, b)| a * b).fold(Q::zero(), |s, t| s + t))
    }

    /// Pairs `(a_i, b_i)` with `e = Σ a_i ⊗ b_i` (one pair per nonzero coefficient).
    pub fn e_pairs(&self) -> Vec<(Vector, Vector)> {
        let Some(e) = &self.e else { return Vec::new() };
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let c = &e[(i, j)];
                if !c.is_zero() {
                    let mut a = self.basis(i);
                    a[i] = c.clone();
                    out.push((a, self.basis(j)));
                }
            }
        }
        out
    }

    /// Coefficient matrix of `Σ f(a_i) ⊗ g(b_i)`.
    fn tensor_coeffs(&self, pairs: &[(Vector, Vector)]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (a, b) in pairs {
            for (i, x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    if !y.is_zero() {
                        m[(i, j)] += x * y;
                    }
                }
            }
        }
        m
    }

    /// Associativity and unit laws.
    pub fn check_algebra(&self) -> Report {
        let mut r = Report::default();
        let n = self.dim;
        if self.mult.len() != n || self.mult.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            r.fail("structure constants have the wrong shape".into());
            return r;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (xi, xj, xk) = (self.basis(i), self.basis(j), self.basis(k));
                    if self.mul(&self.mul(&xi, &xj), &xk) != self.mul(&xi, &self.mul(&xj, &xk)) {
                        r.fail(format!("associativity fails on (x{i} x{j}) x{k}"));
                    }
                }
            }
            let xi = self.basis(i);
            if self.mul(&self.unit, &xi) != xi || self.mul(&xi, &self.unit) != xi {
                r.fail(format!("unit law fails on x{i}"));
            }
        }
        if let Some(s) = &self.star {
            for i in 0..n {
                for j in 0..n {
                    let lhs = s.mul_vec(&self.mul(&self.basis(i), &self.basis(j)));
                    let rhs = self.mul(&s.column(j), &s.column(i));
                    if lhs != rhs {
                        r.fail(format!("star is not an anti-homomorphism on x{i} x{j}"));
                    }
                }
            }
            if !s.mul(s).is_identity() {
                r.fail("star is not an involution".into());
            }
        }
        r
    }

    /// `A`-centrality of `e`, Frobenius normalization and the snake relations.
    pub fn check_frobenius(&self) -> Report {
        let mut r = Report::default();
        let (Some(_), Some(_)) = (&self.lambda, &self.e) else {
            r.fail("missing λ or e".into());
            return r;
        };
        let pairs = self.e_pairs();
        for w in 0..self.dim {
            let xw = self.basis(w);
            let left: Vec<_> = pairs.iter().map(|(a, b)| (self.mul(&xw, a), b.clone())).collect();
            let right: Vec<_> = pairs.iter().map(|(a, b)| (a.clone(), self.mul(b, &xw))).collect();
            if self.tensor_coeffs(&left) != self.tensor_coeffs(&right) {
                r.fail(format!("e is not A-central for w = x{w}"));
            }
        }
        let mut s1 = zero_vec(self.dim);
        let mut s2 = zero_vec(self.dim);
        for (a, b) in &pairs {
            add_scaled(&mut s1, b, &self.lambda_of(a).unwrap());
            add_scaled(&mut s2, a, &self.lambda_of(b).unwrap());
        }
        if s1 != self.unit {
            r.fail("Σ λ(x_i) y_i ≠ 1".into());
        }
        if s2 != self.unit {
            r.fail("Σ x_i λ(y_i) ≠ 1".into());
        }
        // Snake relations with b(x, y) = λ(xy): (id ⊗ b)(e ⊗ id) = id = (b ⊗ id)(id ⊗ e).
        for k in 0..self.dim {
            let xk = self.basis(k);
            let mut one = zero_vec(self.dim);
            let mut two = zero_vec(self.dim);
            for (a, b) in &pairs {
                add_scaled(&mut one, a, &self.lambda_of(&self.mul(b, &xk)).unwrap());
                add_scaled(&mut two, b, &self.lambda_of(&self.mul(&xk, a)).unwrap());
            }
            if one != xk || two != xk {
                r.fail(format!("snake relation fails on x{k}"));
            }
        }
        r
    }

    /// `λ` trace-like (and the symmetric bilinear form).
    pub fn check_symmetric(&self) -> Report {
        let mut r = Report::default();
        if self.lambda.is_none() {
            r.fail("missing λ".into());
            return r;
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let (xi, xj) = (self.basis(i), self.basis(j));
                if self.lambda_of(&self.mul(&xi, &xj)) != self.lambda_of(&self.mul(&xj, &xi)) {
                    r.fail(format!("λ(x{i} x{j}) ≠ λ(x{j} x{i})"));
                }
            }
        }
        r
    }

    /// `Σ (w x_i z) ⊗ y_i = Σ x_i ⊗ (z y_i w)` for all basis `w, z`.
    pub fn is_e_bicentral(&self) -> bool {
        let pairs = self.e_pairs();
        (0..self.dim).all(|w| {
            (0..self.dim).all(|z| {
                let (xw, xz) = (self.basis(w), self.basis(z));
                let l: Vec<_> = pairs.iter().map(|(a, b)| (self.mul(&self.mul(&xw, a), &xz), b.clone())).collect();
                let rr: Vec<_> = pairs.iter().map(|(a, b)| (a.clone(), self.mul(&self.mul(&xz, b), &xw))).collect();
                self.tensor_coeffs(&l) == self.tensor_coeffs(&rr)
            })
        })
    }

    /// Handle element `H = Σ x_i y_i`.
    pub fn handle_element(&self) -> Vector {
        let mut h = zero_vec(self.dim);
        for (a, b) in self.e_pairs() {
            add_scaled(&mut h, &self.mul(&a, &b), &Q::one());
        }
        h
    }

    /// `λ(H^g)`.
    pub fn closed_value(&self, g: usize) -> Q {
        let h = self.handle_element();
        let mut p = self.unit.clone();
        for _ in 0..g {
            p = self.mul(&p, &h);
        }
        self.lambda_of(&p).expect("closed_value needs λ")
    }

    /// `u(x) = Σ a_i x b_i`.
    pub fn u_map(&self, x: &[Q]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (a, b) in self.e_pairs() {
            add_scaled(&mut out, &self.mul(&self.mul(&a, x), &b), &Q::one());
        }
        out
    }

    /// Basis of the center `z(A)`.
    pub fn center(&self) -> Vec<Vector> {
        // Unknown z; constraints z x_j - x_j z = 0 for all j.
        let n = self.dim;
        let mut m = Matrix::zeros(n * n, n);
        for j in 0..n {
            let xj = self.basis(j);
            for i in 0..n {
                let xi = self.basis(i);
                let c = self.mul(&xi, &xj);
                let d = self.mul(&xj, &xi);
                for k in 0..n {
                    m[(j * n + k, i)] = &c[k] - &d[k];
                }
            }
        }
        m.nullspace()
    }

    /// The cocenter `A/[A,A]`.
    pub fn cocenter(&self) -> Cocenter {
        Cocenter::new(self)
    }

    /// Solves `Σ a_i z b_i = 1` for `z`.
    pub fn separability_solution(&self) -> Result<Vector, Infeasibility> {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for c in 0..n {
            let col = self.u_map(&self.basis(c));
            for r in 0..n {
                m[(r, c)] = col[r].clone();
            }
        }
        solve_or_certify(&m, &self.unit)
    }

    /// Separability test with an explicit witness or an infeasibility certificate.
    pub fn check_separable(&self) -> Separability {
        if self.lambda.is_some() && self.e.is_some() {
            return match self.separability_solution() {
                Ok(z) => {
                    let pairs: Vec<_> = self.e_pairs().into_iter().map(|(a, b)| (a, self.mul(&z, &b))).collect();
                    Separability::Separable(self.tensor_coeffs(&pairs))
                }
                Err(c) => Separability::NotSeparable(c),
            };
        }
        // Direct system in the n² coefficients of ẽ: centrality and μ(ẽ) = 1.
        let n = self.dim;
        let mut rows: Vec<Vec<Q>> = Vec::new();
        let mut rhs = Vec::new();
        for w in 0..n {
            let xw = self.basis(w);
            for p in 0..n {
                for q_ in 0..n {
                    let mut row = zero_vec(n * n);
                    for i in 0..n {
                        for j in 0..n {
                            let l = &self.mul(&xw, &self.basis(i))[p] * if j == q_ { Q::one() } else { Q::zero() };
                            let r = if i == p { self.mul(&self.basis(j), &xw)[q_].clone() } else { Q::zero() };
                            row[i * n + j] = l - r;
                        }
                    }
                    rows.push(row);
                    rhs.push(Q::zero());
                }
            }
        }
        for k in 0..n {
            let mut row = zero_vec(n * n);
            for i in 0..n {
                for j in 0..n {
                    row[i * n + j] = self.mult[i][j][k].clone();
                }
            }
            rows.push(row);
            rhs.push(self.unit[k].clone());
        }
        match solve_or_certify(&Matrix::from_rows(rows), &rhs) {
            Ok(x) => {
                let mut m = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = x[i * n + j].clone();
                    }
                }
                Separability::Separable(m)
            }
            Err(c) => Separability::NotSeparable(c),
        }
    }

    /// Whether a coefficient matrix is an `A`-central element with `μ = 1`.
    pub fn is_separability_witness(&self, m: &Matrix) -> bool {
        let mut pairs = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !m[(i, j)].is_zero() {
                    let mut a = self.basis(i);
                    a[i] = m[(i, j)].clone();
                    pairs.push((a, self.basis(j)));
                }
            }
        }
        let central = (0..self.dim).all(|w| {
            let xw = self.basis(w);
            let l: Vec<_> = pairs.iter().map(|(a, b)| (self.mul(&xw, a), b.clone())).collect();
            let r: Vec<_> = pairs.iter().map(|(a, b)| (a.clone(), self.mul(b, &xw))).collect();
            self.tensor_coeffs(&l) == self.tensor_coeffs(&r)
        });
        let mut mu = zero_vec(self.dim);
        for (a, b) in &pairs {
            add_scaled(&mut mu, &self.mul(a, b), &Q::one());
        }
        central && mu == self.unit
    }

    /// Circle maps `u: A/[A,A] → z(A)`, `[x] ↦ Σ a_i x b_i`, and
    /// `v: z(A) → A/[A,A]`, `c ↦ [c z]` with `z` the cap element
    /// ([`FrobAlgebra::cap_element`]). Matrices in the bases of
    /// [`FrobAlgebra::cocenter`] and [`FrobAlgebra::center`].
    pub fn circle_maps(&self) -> (Matrix, Matrix) {
        let co = self.cocenter();
        let center = self.center();
        // Coordinates in the center basis.
        let mut cb = Matrix::zeros(self.dim, center.len());
        for (c, v) in center.iter().enumerate() {
            for r in 0..self.dim {
                cb[(r, c)] = v[r].clone();
            }
        }
        let mut u = Matrix::zeros(center.len(), co.dim());
        for k in 0..co.dim() {
            let img = self.u_map(&co.reps[k]);
            let coords = cb.solve(&img).expect("u lands in the center");
            for r in 0..center.len() {
                u[(r, k)] = coords[r].clone();
            }
        }
        let z = self.cap_element();
        let mut v = Matrix::zeros(co.dim(), center.len());
        for (c, zc) in center.iter().enumerate() {
            let img = co.project(&self.mul(zc, &z));
            for r in 0..co.dim() {
                v[(r, c)] = img[r].clone();
            }
        }
        (u, v)
    }

    /// Representative of the cap value: a solution of `Σ a_i z b_i = 1` when one
    /// exists, otherwise the unit.
    pub fn cap_element(&self) -> Vector {
        self.separability_solution().unwrap_or_else(|_| self.unit.clone())
    }

    /// The pairing `b(x, y) = λ(xy)` as a `1 × n²` matrix (index `i n + j`).
    pub fn pairing_matrix(&self) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(1, n * n);
        for i in 0..n {
            for j in 0..n {
                m[(0, i * n + j)] = self.lambda_of(&self.mult[i][j]).expect("pairing needs λ");
            }
        }
        m
    }
}

/// Quotient `A/[A,A]` with chosen representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocenter {
    /// Representatives in `A` of the quotient basis.
    pub reps: Vec<Vector>,
    /// `dim C × dim A` projection matrix.
    pub proj: Matrix,
}

impl Cocenter {
    fn new(a: &FrobAlgebra) -> Self {
        let n = a.dim;
        // Span of commutators.
        let mut rows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c: Vector = a.mult[i][j].iter().zip(&a.mult[j][i]).map(|(x, y)| x - y).collect();
                if !is_zero_vec(&c) {
                    rows.push(c);
                }
            }
        }
        let mut comm = if rows.is_empty() { Matrix::zeros(0, n) } else { Matrix::from_rows(rows) };
        let pivots = comm.rref();
        let comm_basis: Vec<Vector> = (0..pivots.len()).map(|r| (0..n).map(|c| comm[(r, c)].clone()).collect()).collect();
        // Complement: basis vectors at non-pivot columns.
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let reps: Vec<Vector> = free.iter().map(|&f| basis(n, f)).collect();
        // Change of basis [comm | reps] to read off coordinates.
        let mut full = Matrix::zeros(n, n);
        for (c, v) in comm_basis.iter().chain(reps.iter()).enumerate() {
            for r in 0..n {
                full[(r, c)] = v[r].clone();
            }
        }
        let mut proj = Matrix::zeros(reps.len(), n);
        for k in 0..n {
            let coords = full.solve(&basis(n, k)).expect("basis of A");
            for (r, x) in coords[comm_basis.len()..].iter().enumerate() {
                proj[(r, k)] = x.clone();
            }
        }
        Cocenter { reps, proj }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn project(&self, x: &[Q]) -> Vector {
        self.proj.mul_vec(x)
    }
}

// ---------------------------------------------------------------------------
// Built-in test algebras
// ---------------------------------------------------------------------------

fn constants(n: usize, f: impl Fn(usize, usize) -> Vector) -> Vec<Vec<Vec<Q>>> {
    (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
}

fn e_matrix(n: usize, entries: &[(usize, usize, Q)]) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for (i, j, c) in entries {
        m[(*i, *j)] = c.clone();
    }
    m
}

/// `Q` with `λ = id`, `e = 1 ⊗ 1`.
pub fn rationals() -> FrobAlgebra {
    let mut a = FrobAlgebra::new("Q", constants(1, |_, _| vec![q(1)]), vec![q(1)]);
    a.lambda = Some(vec![q(1)]);
    a.e = Some(e_matrix(1, &[(0, 0, q(1))]));
    a.star = Some(Matrix::identity(1));
    a
}

/// `Q × Q` with idempotent basis, `λ` = sum of coordinates, `e = p0⊗p0 + p1⊗p1`.
pub fn q_times_q() -> FrobAlgebra {
    let mut a = FrobAlgebra::new(
        "QxQ",
        constants(2, |i, j| if i == j { basis(2, i) } else { zero_vec(2) }),
        vec![q(1), q(1)],
    );
    a.lambda = Some(vec![q(1), q(1)]);
    a.e = Some(e_matrix(2, &[(0, 0, q(1)), (1, 1, q(1))]));
    a.star = Some(Matrix::identity(2));
    a
}

/// `M₂(Q)` with basis `E11, E12, E21, E22` (index `2i + j`), `λ = tr`,
/// `e = Σ E_ij ⊗ E_ji`, star = transpose.
pub fn m2q() -> FrobAlgebra {
    let idx = |i: usize, j: usize| 2 * i + j;
    let mut a = FrobAlgebra::new(
        "M2Q",
        constants(4, |x, y| {
            let (i, j, k, l) = (x / 2, x % 2, y / 2, y % 2);
            if j == k { basis(4, idx(i, l)) } else { zero_vec(4) }
        }),
        vec![q(1), q(0), q(0), q(1)],
    );
    a.lambda = Some(vec![q(1), q(0), q(0), q(1)]);
    let mut e = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            e.push((idx(i, j), idx(j, i), q(1)));
        }
    }
    a.e = Some(e_matrix(4, &e));
    let mut t = Matrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            t[(idx(j, i), idx(i, j))] = q(1);
        }
    }
    a.star = Some(t);
    a
}

/// `Q[Z/2] = Q[s]/(s² − 1)`, `λ(a + bs) = a`, `e = 1⊗1 + s⊗s`.
pub fn group_algebra_z2() -> FrobAlgebra {
    let mut a = FrobAlgebra::new("QZ2", constants(2, |i, j| basis(2, (i + j) % 2)), vec![q(1), q(0)]);
    a.lambda = Some(vec![q(1), q(0)]);
    a.e = Some(e_matrix(2, &[(0, 0, q(1)), (1, 1, q(1))]));
    a.star = Some(Matrix::identity(2));
    a
}

/// `Q[x]/(x²)`, `λ(a + bx) = b`, `e = 1⊗x + x⊗1`: symmetric Frobenius, not separable.
pub fn dual_numbers() -> FrobAlgebra {
    let mut a = FrobAlgebra::new(
        "Qx2",
        constants(2, |i, j| if i + j < 2 { basis(2, i + j) } else { zero_vec(2) }),
        vec![q(1), q(0)],
    );
    a.lambda = Some(vec![q(0), q(1)]);
    a.e = Some(e_matrix(2, &[(0, 1, q(1)), (1, 0, q(1))]));
    a.star = Some(Matrix::identity(2));
    a
}

/// The five built-in test algebras.
pub fn test_algebras() -> Vec<FrobAlgebra> {
    vec![rationals(), q_times_q(), m2q(), group_algebra_z2(), dual_numbers()]
}

/// Diagonal algebra `Q^n` with weights `λ(p_i) = w_i` (nonzero) and `e = Σ p_i ⊗ p_i / w_i`.
pub fn diagonal(weights: &[Q]) -> FrobAlgebra {
    let n = weights.len();
    let mut a = FrobAlgebra::new(
        "diag",
        constants(n, |i, j| if i == j { basis(n, i) } else { zero_vec(n) }),
        vec![q(1); n],
    );
    a.lambda = Some(weights.to_vec());
    let e: Vec<_> = (0..n).map(|i| (i, i, weights[i].recip())).collect();
    a.e = Some(e_matrix(n, &e));
    a.star = Some(Matrix::identity(n));
    a
}

/// `λ(z h^g)` with `z` the cap element and `h = Σ a_i u(b_i)`: the closed
/// genus-`g` value in the extended evaluation, where the circle carries `A/[A,A]`.
pub fn closed_value_extended(a: &FrobAlgebra, g: usize) -> Q {
    let mut h = zero_vec(a.dim);
    for (x, y) in a.e_pairs() {
        add_scaled(&mut h, &a.mul(&x, &a.u_map(&y)), &Q::one());
    }
    let mut p = a.cap_element();
    for _ in 0..g {
        p = a.mul(&p, &h);
    }
    a.lambda_of(&p).expect("λ required")
}
