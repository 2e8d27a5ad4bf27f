//! Finite-section ground states of the weighted number/phase energies,
//! Lenard joint-predictability bounds and complementarity witnesses.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::christoffel::christoffel_sequence;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, eigenvalues, inverse_pd, max_eigenvalue, min_eigenvalue, HermitianOperator};
use crate::observables::{
    number_projection, number_squared, phase_effect, second_phase_moment, torus_p2, torus_position_effect,
    torus_q2, ArcSet, FockWindow, IndexSet, TorusWindow, Window,
};

/// Default tolerance on consecutive section eigenvalues.
pub const DEFAULT_SECTION_TOL: f64 = 1e-7;

/// Slack allowed in `α_{k+1} <= α_k`.
pub const MONOTONE_SLACK: f64 = 1e-10;

/// Which Hilbert space a section lives in: the number basis of `ℓ²(N)` or
/// the Fourier basis of `L²(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Fock,
    Torus,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Fock => "fock",
            Space::Torus => "torus",
        })
    }
}

impl FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fock" => Ok(Space::Fock),
            "torus" => Ok(Space::Torus),
            other => Err(Error::InvalidInput(format!("unknown space '{other}' (expected fock or torus)"))),
        }
    }
}

impl Space {
    /// Basis window of a section: `dim` states for fock, `[-size, size]` for
    /// torus.
    pub fn window(self, size: usize) -> Result<Window> {
        match self {
            Space::Fock => Ok(FockWindow::new(size)?.into()),
            Space::Torus => Ok(TorusWindow::symmetric(size).into()),
        }
    }

    /// Section sizes 8..256 (fock dimension) or 4..512 (torus half-width).
    pub fn default_schedule(self) -> Vec<usize> {
        match self {
            Space::Fock => vec![8, 16, 32, 64, 128, 256],
            Space::Torus => vec![4, 8, 16, 32, 64, 128, 256, 512],
        }
    }
}

/// `H(t) = (1-t)·kinetic + t·angular`: `(1-t)N² + tΦ[2]` on a Fock window or
/// `(1-t)P² + tQ²` on `[-size, size]`.
pub fn weighted_hamiltonian(space: Space, t: f64, size: usize) -> Result<(Window, HermitianOperator)> {
    check_weight(t)?;
    let window = space.window(size)?;
    let h = match window {
        Window::Fock(w) => number_squared(w).scale(1.0 - t).add(&second_phase_moment(w).scale(t)),
        Window::Torus(w) => torus_p2(w).scale(1.0 - t).add(&torus_q2(w).scale(t)),
    };
    Ok((window, h))
}

fn check_weight(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("weight {t} outside [0, 1]")));
    }
    Ok(())
}

fn check_schedule(space: Space, dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidInput("empty section schedule".into()));
    }
    if dims.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidInput(format!("section schedule {dims:?} is not increasing")));
    }
    if space == Space::Fock && dims[0] == 0 {
        return Err(Error::InvalidInput("fock sections need dimension >= 1".into()));
    }
    Ok(())
}

/// Outcome of a finite-section run.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateReport {
    pub space: Space,
    /// Section sizes actually diagonalized (fock dimension or torus half-width).
    pub dims: Vec<usize>,
    /// Smallest eigenvalue of each section.
    pub alphas: Vec<f64>,
    pub value: f64,
    /// Ground vector of the last section, over its window.
    pub vector: Vec<Complex64>,
    /// Whether the last two sections agree within the tolerance.
    pub converged: bool,
}

impl GroundStateReport {
    /// Window of the last section.
    pub fn window(&self) -> Window {
        let size = *self.dims.last().expect("report has at least one section");
        self.space.window(size).expect("report sizes are valid")
    }

    /// Coefficient of the basis vector labelled `label`, zero outside the window.
    pub fn coefficient(&self, label: i64) -> Complex64 {
        self.window().position(label).map_or(Complex64::new(0.0, 0.0), |i| self.vector[i])
    }

    fn rescaled(mut self, s: f64) -> Self {
        self.alphas.iter_mut().for_each(|a| *a *= s);
        self.value *= s;
        self
    }
}

/// JSON form `{"space", "dims", "alphas", "value", "vector": [[re, im], ...], "converged"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundStateReportJson {
    pub space: Space,
    pub dims: Vec<usize>,
    pub alphas: Vec<f64>,
    pub value: f64,
    pub vector: Vec<[f64; 2]>,
    pub converged: bool,
}

impl From<&GroundStateReport> for GroundStateReportJson {
    fn from(r: &GroundStateReport) -> Self {
        Self {
            space: r.space,
            dims: r.dims.clone(),
            alphas: r.alphas.clone(),
            value: r.value,
            vector: r.vector.iter().map(|c| [c.re, c.im]).collect(),
            converged: r.converged,
        }
    }
}

impl TryFrom<GroundStateReportJson> for GroundStateReport {
    type Error = Error;
    fn try_from(js: GroundStateReportJson) -> Result<Self> {
        check_schedule(js.space, &js.dims)?;
        if js.alphas.len() != js.dims.len() {
            return Err(Error::InvalidInput("alphas and dims differ in length".into()));
        }
        let report = GroundStateReport {
            space: js.space,
            dims: js.dims,
            alphas: js.alphas,
            value: js.value,
            vector: js.vector.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
            converged: js.converged,
        };
        if report.vector.len() != report.window().dim() {
            return Err(Error::InvalidInput("ground vector does not match the last section".into()));
        }
        Ok(report)
    }
}

/// Ground value of `H(t)` by finite sections over `dims`.
///
/// Sections are diagonalized in schedule order and the run stops as soon as
/// two consecutive smallest eigenvalues differ by less than `tol`; the
/// report then lists only the sections computed. Nested windows give a
/// nonincreasing sequence, which is checked.
pub fn finite_section_ground(space: Space, t: f64, dims: &[usize], tol: f64) -> Result<GroundStateReport> {
    check_weight(t)?;
    check_schedule(space, dims)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let mut done = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut vector = Vec::new();
    let mut converged = false;
    for &size in dims {
        let (_, h) = weighted_hamiltonian(space, t, size)?;
        let eig = eig_hermitian(&h);
        let alpha = eig.eigenvalues[0];
        if let Some(&prev) = alphas.last() {
            if alpha > prev + MONOTONE_SLACK {
                return Err(Error::NumericalConsistency(format!(
                    "section eigenvalue rose from {prev} to {alpha} at size {size}"
                )));
            }
        }
        done.push(size);
        alphas.push(alpha);
        vector = eig.eigenvector(0);
        if let [.., a, b] = alphas[..] {
            if (a - b).abs() < tol {
                converged = true;
                break;
            }
        }
    }
    Ok(GroundStateReport {
        space,
        value: *alphas.last().expect("schedule is nonempty"),
        dims: done,
        alphas,
        vector,
        converged,
    })
}

/// Ground state of `P² + Q²` on `L²(T)` (twice the `t = 1/2` run).
pub fn oscillator_torus_ground(dims: &[usize]) -> Result<GroundStateReport> {
    Ok(finite_section_ground(Space::Torus, 0.5, dims, DEFAULT_SECTION_TOL / 2.0)?.rescaled(2.0))
}

/// Ground state of `N² + Φ[2]` on `ℓ²(N)` (twice the `t = 1/2` run).
pub fn oscillator_fock_ground(dims: &[usize]) -> Result<GroundStateReport> {
    Ok(finite_section_ground(Space::Fock, 0.5, dims, DEFAULT_SECTION_TOL / 2.0)?.rescaled(2.0))
}

/// Smallest eigenvalue `Ẽ₀` of `P² + Q²`, computed once on the default
/// schedule.
pub fn torus_oscillator_energy() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        oscillator_torus_ground(&Space::Torus.default_schedule())
            .expect("default schedule is valid")
            .value
    })
}

/// Lenard bound for the pair `Φ(X)`, `N(Y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LenardReport {
    pub a_plus: f64,
    pub bound: f64,
    pub truncated_sup: f64,
}

/// `a₊` is the top eigenvalue of `N(Y)Φ(X)N(Y)`, i.e. of the principal
/// submatrix of `Φ(X)` on `Y`; the bound is `1 + √a₊`. `truncated_sup` is the
/// top eigenvalue of `Φ(X) + N(Y)` on the window, a lower estimate of the
/// supremum of `Φ_ρ(X) + N_ρ(Y)` over states.
pub fn lenard_bound(x: &ArcSet, y: &IndexSet, w: FockWindow) -> Result<LenardReport> {
    if x.measure() >= 1.0 {
        return Err(Error::BoundInapplicable("X has full measure".into()));
    }
    let window = Window::Fock(w);
    let positions = y.indices().iter().map(|&k| window.require_position(k)).collect::<Result<Vec<_>>>()?;
    let phi = phase_effect(x, w);
    let a_plus = if positions.is_empty() { 0.0 } else { max_eigenvalue(&phi.principal_submatrix(&positions)) };
    let truncated_sup = max_eigenvalue(&phi.add(&number_projection(y, window)?));
    Ok(LenardReport { a_plus, bound: 1.0 + a_plus.max(0.0).sqrt(), truncated_sup })
}

/// Spectrum of `N(Y)Φ(X)N(Y)` restricted to the range of `N(Y)`.
pub fn fock_meet_spectrum(x: &ArcSet, y: &IndexSet, w: FockWindow) -> Result<Vec<f64>> {
    let window = Window::Fock(w);
    let positions = y.indices().iter().map(|&k| window.require_position(k)).collect::<Result<Vec<_>>>()?;
    Ok(eigenvalues(&phase_effect(x, w).principal_submatrix(&positions)))
}

/// Spectrum of `P(Y)Q(X)P(Y)` restricted to the range of `P(Y)`, in a torus
/// window.
pub fn torus_meet_spectrum(x: &ArcSet, y: &IndexSet, w: TorusWindow) -> Result<Vec<f64>> {
    let window = Window::Torus(w);
    let positions = y.indices().iter().map(|&k| window.require_position(k)).collect::<Result<Vec<_>>>()?;
    Ok(eigenvalues(&torus_position_effect(x, w).principal_submatrix(&positions)))
}

fn check_basis_index(e: &HermitianOperator, idx: usize) -> Result<()> {
    if idx >= e.dim() {
        return Err(Error::OutOfWindow { index: idx as i64, window: format!("dim {}", e.dim()) });
    }
    Ok(())
}

/// Largest `α` with `E - α|e><e| >= 0`, as `1/⟨e|E⁻¹|e⟩`.
pub fn max_scalar_below_inverse(e: &HermitianOperator, idx: usize) -> Result<f64> {
    check_basis_index(e, idx)?;
    let inv = inverse_pd(e)?;
    Ok(1.0 / inv.get(idx, idx).re)
}

/// Largest `α` with `E - α|e><e| >= 0`, by bisection on the smallest
/// eigenvalue to absolute width `1e-12`.
pub fn max_scalar_below_bisection(e: &HermitianOperator, idx: usize) -> Result<f64> {
    check_basis_index(e, idx)?;
    let feasible = |alpha: f64| {
        let mut m = e.matrix().clone();
        m[(idx, idx)] -= Complex64::new(alpha, 0.0);
        min_eigenvalue(&HermitianOperator::new(m).expect("diagonal shift keeps Hermiticity")) >= 0.0
    };
    if !feasible(0.0) {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, e.get(idx, idx).re);
    if feasible(hi) {
        return Ok(hi);
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest `α >= 0` with `E - α|e><e|` positive semidefinite: the inverse
/// route when `E` is well inside the positive cone, bisection otherwise.
pub fn max_scalar_below(e: &HermitianOperator, idx: usize) -> Result<f64> {
    check_basis_index(e, idx)?;
    if min_eigenvalue(e) > 1e-10 {
        max_scalar_below_inverse(e, idx)
    } else {
        max_scalar_below_bisection(e, idx)
    }
}

/// `α_max(k)`: the largest multiple of `|0><0|` below the `k`-dimensional
/// section of `Φ(X)`, for each `k` in `dims`.
///
/// The value is the Christoffel number of `1_X dθ/2π`, which decays
/// geometrically in `k` and drops below double-precision resolution of any
/// matrix route within a few dozen dimensions; it is evaluated by
/// [`christoffel_sequence`] instead of inverting `Φ_k(X)`.
pub fn complementarity_decay(x: &ArcSet, dims: &[usize]) -> Result<Vec<(usize, f64)>> {
    let l = x.measure();
    if !(l > 0.0 && l < 1.0) {
        return Err(Error::BoundInapplicable(format!("needs 0 < ℓ(X) < 1, got {l}")));
    }
    check_schedule(Space::Fock, dims)?;
    let kmax = *dims.last().expect("schedule is nonempty");
    let seq = christoffel_sequence(x, kmax);
    Ok(dims.iter().map(|&k| (k, seq[k - 1])).collect())
}

/// `W E W*` with `W = Σ_k |k><k+r|`: drops the first `r` rows and columns.
pub fn shift_compress(e: &HermitianOperator, r: usize) -> Result<HermitianOperator> {
    if r >= e.dim() {
        return Err(Error::OutOfWindow { index: r as i64, window: format!("dim {}", e.dim()) });
    }
    let idx: Vec<usize> = (r..e.dim()).collect();
    Ok(e.principal_submatrix(&idx))
}
