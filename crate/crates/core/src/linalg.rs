//! Dense complex Hermitian linear algebra.
//!
//! Matrices are small (a few hundred to about a thousand rows), so everything
//! is stored densely in row-major order. The eigensolver reduces to real
//! symmetric tridiagonal form with Householder reflections and then runs the
//! implicit QL iteration; both stages use a fixed operation order, so equal
//! inputs give bit-identical outputs.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `|a_ij - conj(a_ji)|` accepted by [`HermitianOperator::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Components below this magnitude are skipped when fixing eigenvector phases.
pub const PHASE_FIX_THRESHOLD: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data; `data.len()` must be `dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rk = rhs.row(k);
                let oi = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in oi.iter_mut().zip(rk) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Principal submatrix on the given (row = column) indices.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self[(idx[i], idx[j])])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Finite Hermitian matrix: a truncated effect, observable or Hamiltonian.
///
/// Construction validates Hermiticity within [`HERMITIAN_TOL`] and then
/// replaces the matrix by `(A + A*)/2`, so the stored entries are exactly
/// Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, HERMITIAN_TOL)
    }

    /// Like [`new`](Self::new) with a caller-chosen symmetry tolerance, for
    /// matrices assembled from long floating-point sums.
    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        if m.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let defect = m.hermitian_defect();
        if defect > tol {
            return Err(Error::NotHermitian { asymmetry: defect });
        }
        Ok(Self::symmetrized(m))
    }

    fn symmetrized(mut m: CMatrix) -> Self {
        let n = m.dim();
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    pub fn zero(dim: usize) -> Self {
        Self(CMatrix::zeros(dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(CMatrix::from_real_diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::symmetrized(self.0.add(&rhs.0))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::symmetrized(self.0.sub(&rhs.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `A + c I` for real `c`.
    pub fn shift(&self, c: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.dim() {
            m[(i, i)] += c;
        }
        Self(m)
    }

    /// `U A U*` for an arbitrary square `U`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::symmetrized(u.matmul(&self.0).matmul(&u.adjoint()))
    }

    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self(self.0.principal_submatrix(idx))
    }

    /// `<v|A|v>`, which is real for Hermitian `A`.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let av = self.0.mul_vec(v);
        v.iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// `tr(rho A)`.
    pub fn trace_with(&self, rho: &HermitianOperator) -> f64 {
        let n = self.dim();
        assert_eq!(n, rho.dim());
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (rho.0[(i, j)] * self.0[(j, i)]).re;
            }
        }
        acc
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.0.max_abs_diff(&rhs.0)
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors stored as
/// the columns of `eigenvectors`.
///
/// In every eigenvector the first component with modulus above
/// [`PHASE_FIX_THRESHOLD`] is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }

    /// `U diag(f(lambda)) U*`.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, |i, j| {
            let mut acc = ZERO;
            for k in 0..n {
                acc += u[(i, k)] * u[(j, k)].conj() * fl[k];
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_function(|l| l)
    }
}

/// Full eigendecomposition of a Hermitian operator.
pub fn eig_hermitian(a: &HermitianOperator) -> SpectralDecomposition {
    let n = a.dim();
    let (diag, offdiag, q) = tridiagonalize(a.matrix(), true);

    // T = D S D* with S real symmetric tridiagonal and D a diagonal of phases.
    let mut phases = vec![ONE; n];
    let mut sub = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let e = offdiag[k];
        let r = e.norm();
        phases[k + 1] = if r > 0.0 { phases[k] * (e / r) } else { phases[k] };
        sub[k + 1] = r;
    }
    let mut d = diag;
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut d, &mut sub, Some(&mut z), n);

    // U = Q D Z
    let mut u = CMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let qd = q[(i, k)] * phases[k];
            if qd == ZERO {
                continue;
            }
            let zk = &z[k * n..(k + 1) * n];
            for j in 0..n {
                u[(i, j)] += qd * zk[j];
            }
        }
    }
    fix_phases(&mut u);
    SpectralDecomposition { eigenvalues: d, eigenvectors: u }
}

/// Householder reduction `A = Q T Q*`; returns diag(T), subdiag(T) and Q
/// (identity when `want_q` is false).
fn tridiagonalize(a: &CMatrix, want_q: bool) -> (Vec<f64>, Vec<Complex64>, CMatrix) {
    let n = a.dim();
    let mut a = a.clone();
    let mut q = CMatrix::identity(n);
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let tail_norm2: f64 = ((k + 2)..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail_norm2 == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = (x0.norm_sqr() + tail_norm2).sqrt();
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };

        let v = &mut v[..m];
        v[0] = x0 + phase * alpha;
        for i in 1..m {
            v[i] = a[(k + 1 + i, k)];
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // p = tau * A_sub v
        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a.data[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            let s: Complex64 = row.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
            *pi = s * tau;
        }
        let vp: Complex64 = v.iter().zip(p.iter()).map(|(x, y)| x.conj() * y).sum();
        let kappa = 0.5 * tau * vp.re;
        // w = p - kappa v, stored in p
        for i in 0..m {
            p[i] -= v[i] * kappa;
        }
        // A_sub -= v w* + w v*
        for i in 0..m {
            let vi = v[i];
            let wi = p[i];
            let row = &mut a.data[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for j in 0..m {
                row[j] -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        let beta = -phase * alpha;
        a[(k + 1, k)] = beta;
        a[(k, k + 1)] = beta.conj();
        for i in (k + 2)..n {
            a[(i, k)] = ZERO;
            a[(k, i)] = ZERO;
        }

        // Q <- Q H, H = I - tau v v*
        if !want_q {
            continue;
        }
        for r in 0..n {
            let row = &mut q.data[r * n + k + 1..r * n + n];
            let s: Complex64 = row.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<Complex64>() * tau;
            for j in 0..m {
                row[j] -= s * v[j].conj();
            }
        }
    }

    let diag = (0..n).map(|i| a[(i, i)].re).collect();
    let offdiag = (0..n.saturating_sub(1)).map(|i| a[(i + 1, i)]).collect();
    (diag, offdiag, q)
}

/// Implicit QL on a real symmetric tridiagonal matrix (EISPACK tql2).
///
/// `d` holds the diagonal, `e[1..n]` the subdiagonal. `z` (row-major n x n)
/// accumulates the rotations. On return `d` is ascending and the columns of
/// `z` are the matching eigenvectors.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>, n: usize) {
    if n == 0 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zk = &mut z[k * n..(k + 1) * n];
                            let t = zk[i + 1];
                            zk[i + 1] = s * zk[i] + c * t;
                            zk[i] = c * zk[i] - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // selection sort keeps the ordering deterministic for ties
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            if let Some(z) = z.as_deref_mut() {
                for row in 0..n {
                    z.swap(row * n + i, row * n + k);
                }
            }
        }
    }
}

fn fix_phases(u: &mut CMatrix) {
    let n = u.dim();
    for j in 0..n {
        let pivot = (0..n).map(|i| u[(i, j)]).find(|z| z.norm() > PHASE_FIX_THRESHOLD);
        if let Some(c) = pivot {
            let rot = c.conj() / c.norm();
            for i in 0..n {
                u[(i, j)] *= rot;
            }
            // exact zero imaginary part on the pivot
            let i0 = (0..n).find(|&i| u[(i, j)].norm() > PHASE_FIX_THRESHOLD).unwrap();
            u[(i0, j)] = Complex64::new(u[(i0, j)].norm(), 0.0);
        }
    }
}

pub fn operator_norm(a: &HermitianOperator) -> f64 {
    let ev = eigenvalues(a);
    ev.first().unwrap().abs().max(ev.last().unwrap().abs())
}

/// Eigenvalues only (ascending).
pub fn eigenvalues(a: &HermitianOperator) -> Vec<f64> {
    let n = a.dim();
    let (diag, offdiag, _) = tridiagonalize(a.matrix(), false);
    let mut d = diag;
    let mut sub = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        sub[k + 1] = offdiag[k].norm();
    }
    tql2(&mut d, &mut sub, None, n);
    d
}

pub fn min_eigenvalue(a: &HermitianOperator) -> f64 {
    eigenvalues(a)[0]
}

pub fn max_eigenvalue(a: &HermitianOperator) -> f64 {
    *eigenvalues(a).last().unwrap()
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd(a: &HermitianOperator, tol: f64) -> bool {
    min_eigenvalue(a) >= -tol
}

/// Inverse of a strictly positive definite operator.
pub fn inverse_pd(a: &HermitianOperator) -> Result<HermitianOperator> {
    let dec = eig_hermitian(a);
    let norm = dec.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let lmin = dec.eigenvalues[0];
    if lmin.is_nan() || lmin <= 1e-12 * norm || norm == 0.0 {
        return Err(Error::Singular { min_eigenvalue: lmin, norm });
    }
    Ok(HermitianOperator::symmetrized(dec.apply_function(|l| 1.0 / l)))
}

/// Matrix JSON wire format: `{"dim": n, "re": [...], "im": [...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        Self {
            dim: m.dim(),
            re: m.as_slice().iter().map(|z| z.re).collect(),
            im: m.as_slice().iter().map(|z| z.im).collect(),
        }
    }
}

impl From<&HermitianOperator> for MatrixJson {
    fn from(h: &HermitianOperator) -> Self {
        Self::from(h.matrix())
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.re.len() != self.im.len() {
            return Err(Error::InvalidInput("re and im arrays differ in length".into()));
        }
        let data = self.re.iter().zip(&self.im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        CMatrix::from_row_major(self.dim, data)
    }

    pub fn to_hermitian(&self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_matrix()?)
    }
}
