//! Truncated operators of the number–phase pair.
//!
//! Every phase-type effect here is a Toeplitz matrix: entry `(m, n)` only
//! depends on `m - n`. Truncation to a window keeps the leading block of the
//! infinite matrix (the compression `P_K Φ(X) P_K`); nothing is renormalized.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::angle::TWO_PI;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianOperator};
use crate::transport::{ProbCircle, ProbInt};

use super::arcs::{ArcSet, IndexSet};
use super::window::{FockWindow, TorusWindow, Window};

/// `e^{ikθ}`, exact at the seam `θ = 2π`.
fn cis(k: i64, theta: f64) -> Complex64 {
    if theta == 0.0 || theta == TWO_PI {
        return Complex64::new(1.0, 0.0);
    }
    let phase = k as f64 * theta;
    Complex64::new(phase.cos(), phase.sin())
}

/// `∫_a^b e^{ikθ} dθ/2π`.
pub fn arc_fourier_coefficient(k: i64, a: f64, b: f64) -> Complex64 {
    if k == 0 {
        return Complex64::new((b - a) / TWO_PI, 0.0);
    }
    (cis(k, b) - cis(k, a)) / Complex64::new(0.0, TWO_PI * k as f64)
}

/// `∫_X e^{ikθ} dθ/2π` for `k = 0..len`.
pub fn fourier_coefficients(x: &ArcSet, len: usize) -> Vec<Complex64> {
    if x.is_full() {
        let mut c = vec![Complex64::new(0.0, 0.0); len];
        if len > 0 {
            c[0] = Complex64::new(1.0, 0.0);
        }
        return c;
    }
    (0..len as i64)
        .map(|k| {
            if k == 0 {
                Complex64::new(x.measure(), 0.0)
            } else {
                x.arcs().iter().map(|&(a, b)| arc_fourier_coefficient(k, a, b)).sum()
            }
        })
        .collect()
}

/// Hermitian Toeplitz matrix with first column `col` (`entry(m, n) = col[m - n]`
/// for `m >= n`, conjugated above the diagonal).
pub fn hermitian_toeplitz(col: &[Complex64]) -> HermitianOperator {
    let n = col.len();
    let mut m = CMatrix::from_fn(n, |i, j| if i >= j { col[i - j] } else { col[j - i].conj() });
    for i in 0..n {
        m[(i, i)] = Complex64::new(col[0].re, 0.0);
    }
    HermitianOperator::new(m).expect("Toeplitz construction is exactly Hermitian")
}

fn toeplitz_effect(x: &ArcSet, dim: usize) -> HermitianOperator {
    hermitian_toeplitz(&fourier_coefficients(x, dim))
}

/// Canonical phase effect `Φ(X)` on the number basis window.
pub fn phase_effect(x: &ArcSet, w: FockWindow) -> HermitianOperator {
    toeplitz_effect(x, w.dim())
}

/// Angle effect `Q(X)` of `L²(T)` on a Fourier window.
pub fn torus_position_effect(x: &ArcSet, w: TorusWindow) -> HermitianOperator {
    toeplitz_effect(x, w.dim())
}

/// Phase-type effect on either window (same Toeplitz kernel).
pub fn angle_effect(x: &ArcSet, w: Window) -> HermitianOperator {
    toeplitz_effect(x, w.dim())
}

/// Diagonal projection onto the labels in `y`.
pub fn number_projection(y: &IndexSet, w: Window) -> Result<HermitianOperator> {
    let mut diag = vec![0.0; w.dim()];
    for &k in y.indices() {
        diag[w.require_position(k)?] = 1.0;
    }
    Ok(HermitianOperator::from_real_diagonal(&diag))
}

/// `e^{iθN} E e^{-iθN}`: entry `(m, n)` picks up `e^{iθ(m-n)}`.
pub fn phase_shift_conjugate(e: &HermitianOperator, theta: f64) -> HermitianOperator {
    let n = e.dim();
    let phases: Vec<Complex64> = (0..n as i64).map(|k| Complex64::from_polar(1.0, k as f64 * theta)).collect();
    let m = CMatrix::from_fn(n, |i, j| {
        if i >= j {
            phases[i - j] * e.get(i, j)
        } else {
            phases[j - i].conj() * e.get(i, j)
        }
    });
    HermitianOperator::new(m).expect("phase conjugation preserves Hermiticity")
}

/// Cyclic moment operator `V^(k) = Σ_n |n><n+k|` on the window.
pub fn moment_operator(k: usize, w: FockWindow) -> Result<CMatrix> {
    if k >= w.dim() {
        return Err(Error::OutOfWindow { index: k as i64, window: Window::Fock(w).describe() });
    }
    let mut m = CMatrix::zeros(w.dim());
    for n in 0..w.dim() - k {
        m[(n, n + k)] = Complex64::new(1.0, 0.0);
    }
    Ok(m)
}

/// `∫_{-π}^{π} θ² e^{ikθ} dθ/2π`.
pub fn second_moment_coefficient(k: i64) -> f64 {
    if k == 0 {
        PI * PI / 3.0
    } else {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        2.0 * sign / (kf * kf)
    }
}

fn second_moment_toeplitz(dim: usize) -> HermitianOperator {
    let col: Vec<Complex64> =
        (0..dim as i64).map(|k| Complex64::new(second_moment_coefficient(k), 0.0)).collect();
    hermitian_toeplitz(&col)
}

/// `Φ[2] = ∫ θ² dΦ(θ)` with θ taken in `(-π, π]`.
pub fn second_phase_moment(w: FockWindow) -> HermitianOperator {
    second_moment_toeplitz(w.dim())
}

/// `Q² = ∫ θ² dQ(θ)` on a Fourier window.
pub fn torus_q2(w: TorusWindow) -> HermitianOperator {
    second_moment_toeplitz(w.dim())
}

/// `P² = diag(k²)` on a Fourier window.
pub fn torus_p2(w: TorusWindow) -> HermitianOperator {
    let diag: Vec<f64> = (w.kmin()..=w.kmax()).map(|k| (k * k) as f64).collect();
    HermitianOperator::from_real_diagonal(&diag)
}

/// `N² = diag(n²)` on a Fock window.
pub fn number_squared(w: FockWindow) -> HermitianOperator {
    let diag: Vec<f64> = (0..w.dim()).map(|n| (n * n) as f64).collect();
    HermitianOperator::from_real_diagonal(&diag)
}

/// Convolution smearing `(μ * Φ)(X) = Σ_j μ_j Φ(X ⊖ θ_j)`.
pub fn smear_phase(mu: &ProbCircle, x: &ArcSet, w: FockWindow) -> HermitianOperator {
    let mut acc = HermitianOperator::zero(w.dim());
    for &(theta, weight) in mu.atoms() {
        acc = acc.add(&phase_effect(&x.translate(-theta), w).scale(weight));
    }
    acc
}

/// Convolution smearing `(ν * N)(Y) = Σ_k ν({k}) N((Y - k) ∩ window)`.
pub fn smear_number(nu: &ProbInt, y: &IndexSet, w: Window) -> HermitianOperator {
    let mut diag = vec![0.0; w.dim()];
    for (k, weight) in nu.iter() {
        for &label in y.indices() {
            if let Some(i) = w.position(label - k) {
                diag[i] += weight;
            }
        }
    }
    HermitianOperator::from_real_diagonal(&diag)
}
