//! Small dense complex linear algebra for `L x L` covariance matrices:
//! Hermitian Cholesky with rank detection, the quadratic form `c^H R^-1 c`,
//! and projection onto orthogonal complements.
//!
//! Everything is unblocked and allocation-light; arrays are expected to stay
//! in the tens of antennas.

use std::ops::{Deref, Index};

use num_complex::Complex64;

pub type C64 = Complex64;

/// Relative residual above which a right-hand side is taken to have a
/// component outside the column space of a singular matrix.
const RANGE_RTOL: f64 = 1e-8;

/// Norm below which (relative to the input) a projection counts as zero.
const PROJECTION_RTOL: f64 = 1e-12;

/// A complex column vector, e.g. a propagation vector across `L` antennas.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexVector(Vec<C64>);

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Self {
        ComplexVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        ComplexVector(vec![C64::new(0.0, 0.0); n])
    }

    /// Builds a vector from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        ComplexVector(pairs.iter().map(|&(re, im)| C64::new(re, im)).collect())
    }

    /// `e_i` in dimension `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = C64::new(1.0, 0.0);
        v
    }

    /// Inner product `self^H other`.
    pub fn dot(&self, other: &ComplexVector) -> C64 {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scaled(&self, s: C64) -> ComplexVector {
        ComplexVector(self.0.iter().map(|z| z * s).collect())
    }

    /// `self -= s * other`
    pub fn axpy_sub(&mut self, s: C64, other: &ComplexVector) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a -= s * b;
        }
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }
}

impl Deref for ComplexVector {
    type Target = [C64];
    fn deref(&self) -> &[C64] {
        &self.0
    }
}

impl From<Vec<C64>> for ComplexVector {
    fn from(v: Vec<C64>) -> Self {
        ComplexVector(v)
    }
}

/// Square Hermitian matrix. Only the lower triangle (including the diagonal)
/// is stored authoritatively; the upper triangle is read as its conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<C64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        m.add_diagonal(1.0);
        m
    }

    /// Diagonal matrix with real entries.
    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * m.n + i] = C64::new(v, 0.0);
        }
        m
    }

    /// Reads the lower triangle of a full row-major matrix. Imaginary parts
    /// on the diagonal are dropped.
    pub fn from_lower(n: usize, full: &[C64]) -> Self {
        assert_eq!(full.len(), n * n, "expected {n}x{n} entries");
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..i {
                m.data[i * n + j] = full[i * n + j];
            }
            m.data[i * n + i] = C64::new(full[i * n + i].re, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if i >= j {
            self.data[i * self.n + j]
        } else {
            self.data[j * self.n + i].conj()
        }
    }

    /// `self += weight * v v^H`
    pub fn add_rank_one(&mut self, weight: f64, v: &[C64]) {
        debug_assert_eq!(v.len(), self.n);
        for i in 0..self.n {
            let vi = v[i] * weight;
            for j in 0..i {
                self.data[i * self.n + j] += vi * v[j].conj();
            }
            self.data[i * self.n + i].re += weight * v[i].norm_sqr();
        }
    }

    /// `self += s * I`
    pub fn add_diagonal(&mut self, s: f64) {
        for i in 0..self.n {
            self.data[i * self.n + i].re += s;
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i].re).sum()
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[i * self.n + i].re)
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[C64]) -> ComplexVector {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect::<Vec<C64>>()
            .into()
    }

    /// Real quadratic form `w^H M w`.
    pub fn quadratic_form(&self, w: &[C64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            acc += self.data[i * self.n + i].re * w[i].norm_sqr();
            for j in 0..i {
                acc += 2.0 * (w[i].conj() * self.data[i * self.n + j] * w[j]).re;
            }
        }
        acc
    }

    /// Pivot tolerance `n * eps * max_diagonal`.
    pub fn singularity_tolerance(&self) -> f64 {
        self.n as f64 * f64::EPSILON * self.max_diagonal()
    }
}

/// Lower-triangular factor `G` with `G G^H = M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    n: usize,
    lower: Vec<C64>,
}

/// Returned by [`cholesky`] when a pivot falls below the singularity
/// tolerance. This signals rank deficiency, which is expected for noiseless
/// covariances with fewer interferers than antennas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankDeficient {
    /// Index of the first pivot that fell below tolerance.
    pub pivot: usize,
    pub rank: usize,
}

impl Index<(usize, usize)> for Cholesky {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.lower[i * self.n + j]
    }
}

impl Cholesky {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `G y = c`.
    pub fn forward_solve(&self, c: &[C64]) -> ComplexVector {
        let n = self.n;
        let mut y = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = c[i];
            for k in 0..i {
                s -= self.lower[i * n + k] * y[k];
            }
            y[i] = s / self.lower[i * n + i];
        }
        y.into()
    }

    /// Solves `M x = c` by forward then backward substitution.
    pub fn solve(&self, c: &[C64]) -> ComplexVector {
        let n = self.n;
        let mut x = self.forward_solve(c).into_inner();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.lower[k * n + i].conj() * x[k];
            }
            x[i] = s / self.lower[i * n + i].conj();
        }
        x.into()
    }

    /// `G G^H` as a Hermitian matrix.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.n;
        let mut full = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..=i {
                full[i * n + j] = (0..=j)
                    .map(|k| self.lower[i * n + k] * self.lower[j * n + k].conj())
                    .sum();
            }
        }
        HermitianMatrix::from_lower(n, &full)
    }
}

/// Semidefinite factorization: columns whose pivot drops to `tol` or below
/// are zeroed and flagged instead of aborting.
fn factor_semidefinite(m: &HermitianMatrix, tol: f64) -> (Vec<C64>, Vec<bool>) {
    let n = m.n;
    let mut g = vec![C64::new(0.0, 0.0); n * n];
    let mut skipped = vec![false; n];
    for j in 0..n {
        let mut d = m.data[j * n + j].re;
        for k in 0..j {
            d -= g[j * n + k].norm_sqr();
        }
        if d <= tol {
            skipped[j] = true;
            continue;
        }
        let pivot = d.sqrt();
        g[j * n + j] = C64::new(pivot, 0.0);
        for i in j + 1..n {
            let mut s = m.data[i * n + j];
            for k in 0..j {
                s -= g[i * n + k] * g[j * n + k].conj();
            }
            g[i * n + j] = s / pivot;
        }
    }
    (g, skipped)
}

/// Hermitian Cholesky factorization.
pub fn cholesky(m: &HermitianMatrix) -> Result<Cholesky, RankDeficient> {
    let (lower, skipped) = factor_semidefinite(m, m.singularity_tolerance());
    match skipped.iter().position(|&s| s) {
        None => Ok(Cholesky { n: m.n, lower }),
        Some(pivot) => Err(RankDeficient {
            pivot,
            rank: skipped.iter().filter(|s| !**s).count(),
        }),
    }
}

/// `c^H M^-1 c` for Hermitian positive semidefinite `M`.
///
/// For singular `M` the result is `f64::INFINITY` when `c` has a component
/// outside the column space of `M`, and the pseudo-inverse form
/// `c^H M^+ c` otherwise.
pub fn quadratic_form_inverse(c: &[C64], m: &HermitianMatrix) -> f64 {
    let n = m.n;
    assert_eq!(c.len(), n, "dimension mismatch");
    let (g, skipped) = factor_semidefinite(m, m.singularity_tolerance());
    let c_norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut y = vec![C64::new(0.0, 0.0); n];
    let mut acc = 0.0;
    for i in 0..n {
        let mut s = c[i];
        for k in 0..i {
            s -= g[i * n + k] * y[k];
        }
        if skipped[i] {
            if s.norm() > RANGE_RTOL * c_norm {
                return f64::INFINITY;
            }
        } else {
            y[i] = s / g[i * n + i];
            acc += y[i].norm_sqr();
        }
    }
    acc
}

/// Component of `c` orthogonal to the span of `basis`, by modified
/// Gram-Schmidt with one full re-orthogonalization pass. Returns the zero
/// vector when `c` lies in the span.
pub fn project_out(c: &ComplexVector, basis: &[&ComplexVector]) -> ComplexVector {
    let mut ortho: Vec<ComplexVector> = Vec::with_capacity(basis.len());
    for b in basis {
        assert_eq!(b.len(), c.len(), "basis dimension mismatch");
        let norm0 = b.norm();
        if norm0 == 0.0 {
            continue;
        }
        let mut v = (*b).clone();
        for _ in 0..2 {
            for q in &ortho {
                let s = q.dot(&v);
                v.axpy_sub(s, q);
            }
        }
        let norm = v.norm();
        if norm > PROJECTION_RTOL * norm0 {
            ortho.push(v.scaled(C64::new(1.0 / norm, 0.0)));
        }
    }
    let mut w = c.clone();
    for _ in 0..2 {
        for q in &ortho {
            let s = q.dot(&w);
            w.axpy_sub(s, q);
        }
    }
    if w.norm() <= PROJECTION_RTOL * c.norm() {
        return ComplexVector::zeros(c.len());
    }
    w
}
