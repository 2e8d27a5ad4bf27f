//! Measurement-uncertainty region: margin errors of covariant phase-space
//! approximators, the error-sum bound, boundary tracing, and joint
//! observables with a sharp phase-kernel structure.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{arc_distance, TWO_PI};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianOperator};
use crate::observables::{
    angle_margin, angle_second_moment, fourier_margin, number_squared, second_phase_moment, torus_p2, torus_q2,
    DensityState, FockWindow, TorusWindow, Window,
};
use crate::spectral_bounds::{finite_section_ground, torus_oscillator_energy, Space, DEFAULT_SECTION_TOL};
use crate::transport::{
    second_moment_circle, second_moment_int, w2_circle, w2_integers, ProbCircle, ProbInt,
};

/// Slack on `d1² + d2² >= Ẽ₀`.
pub const ERROR_SUM_SLACK: f64 = 1e-6;

/// Slack on the trade-off monotonicity of a boundary curve.
pub const BOUNDARY_SLACK: f64 = 1e-8;

/// Default angle grid for discretized distributions.
pub const DEFAULT_GRID: usize = 2048;

/// Pair of margin errors `(d1, d2)`: angle (phase) error and Fourier-index
/// (number) error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPoint {
    pub d1: f64,
    pub d2: f64,
    pub source: String,
}

impl ErrorPoint {
    pub fn new(d1: f64, d2: f64, source: impl Into<String>) -> Result<Self> {
        for (name, v) in [("d1", d1), ("d2", d2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!("{name} = {v} is not a finite nonnegative error")));
            }
        }
        Ok(Self { d1, d2, source: source.into() })
    }

    /// `d1² + d2²`.
    pub fn square_sum(&self) -> f64 {
        self.d1 * self.d1 + self.d2 * self.d2
    }
}

fn torus_state_window(sigma: &DensityState) -> Result<TorusWindow> {
    match sigma.window() {
        Window::Torus(w) => Ok(w),
        Window::Fock(_) => Err(Error::InvalidInput("margin errors need a state on a torus window".into())),
    }
}

/// Margin errors of the covariant approximator generated by `σ`:
/// `d1 = √Q_σ[2]`, `d2 = √P_σ[2]`, with the angle moment taken exactly as
/// `tr[σQ²]`.
pub fn margin_errors_from_sigma(sigma: &DensityState) -> Result<ErrorPoint> {
    torus_state_window(sigma)?;
    let d1 = angle_second_moment(sigma)?.max(0.0).sqrt();
    let d2 = second_moment_int(&fourier_margin(sigma)?).sqrt();
    ErrorPoint::new(d1, d2, "covariant")
}

/// As [`margin_errors_from_sigma`], with `Q_σ` discretized on `grid` cells.
pub fn margin_errors_from_sigma_grid(sigma: &DensityState, grid: usize) -> Result<ErrorPoint> {
    let d1 = second_moment_circle(&angle_margin(sigma, grid)?).sqrt();
    let d2 = second_moment_int(&fourier_margin(sigma)?).sqrt();
    ErrorPoint::new(d1, d2, format!("covariant, grid {grid}"))
}

/// Result of comparing `d1² + d2²` with `Ẽ₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSumCheck {
    pub sum: f64,
    pub bound: f64,
    pub satisfied: bool,
}

/// `Q_σ[2] + P_σ[2] >= Ẽ₀ - 1e-6`.
pub fn error_sum_check(sigma: &DensityState) -> Result<ErrorSumCheck> {
    let p = margin_errors_from_sigma(sigma)?;
    let sum = p.square_sum();
    let bound = torus_oscillator_energy();
    Ok(ErrorSumCheck { sum, bound, satisfied: sum >= bound - ERROR_SUM_SLACK })
}

/// Default weights `t = 0.05, 0.10, ..., 0.95`.
pub fn default_tgrid() -> Vec<f64> {
    (1..20).map(|i| i as f64 / 20.0).collect()
}

fn check_tgrid(tgrid: &[f64]) -> Result<()> {
    if tgrid.is_empty() {
        return Err(Error::InvalidInput("empty weight grid".into()));
    }
    if let Some(t) = tgrid.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(Error::InvalidInput(format!("weight {t} outside (0, 1)")));
    }
    if tgrid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidInput("weight grid is not increasing".into()));
    }
    Ok(())
}

/// One traced point.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub t: f64,
    pub point: ErrorPoint,
    /// Weighted ground energy `(1-t)d2² + td1²`.
    pub energy: f64,
    pub converged: bool,
}

/// Candidate boundary of the error region, one point per weight.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub space: Space,
    pub points: Vec<BoundaryPoint>,
}

impl BoundaryCurve {
    /// CSV with header `t,d1,d2,energy,converged`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,d1,d2,energy,converged\n");
        for p in &self.points {
            writeln!(out, "{},{},{},{},{}", p.t, p.point.d1, p.point.d2, p.energy, p.converged)
                .expect("writing to a String cannot fail");
        }
        out
    }

    /// Largest violation of `d1` nonincreasing / `d2` nondecreasing in `t`.
    pub fn monotonicity_defect(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| {
                let (a, b) = (&w[0].point, &w[1].point);
                (b.d1 - a.d1).max(a.d2 - b.d2).max(0.0)
            })
            .fold(0.0, f64::max)
    }

    pub fn is_monotone(&self) -> bool {
        self.monotonicity_defect() <= BOUNDARY_SLACK
    }
}

/// Margin errors of the ground state of `H(t)` for each `t`.
///
/// On the torus the errors are `⟨ψ|Q²|ψ⟩^{1/2}`, `⟨ψ|P²|ψ⟩^{1/2}`; on the
/// Fock side the same moments are taken with `Φ[2]` and `N²`, which equals
/// embedding `ψ` as a torus state supported on nonnegative indices.
pub fn trace_boundary(space: Space, tgrid: &[f64], dims: &[usize]) -> Result<BoundaryCurve> {
    check_tgrid(tgrid)?;
    let mut points = Vec::with_capacity(tgrid.len());
    for &t in tgrid {
        let report = finite_section_ground(space, t, dims, DEFAULT_SECTION_TOL)?;
        let (angular, kinetic) = match report.window() {
            Window::Fock(w) => (second_phase_moment(w), number_squared(w)),
            Window::Torus(w) => (torus_q2(w), torus_p2(w)),
        };
        let d1 = angular.expectation(&report.vector).max(0.0).sqrt();
        let d2 = kinetic.expectation(&report.vector).max(0.0).sqrt();
        points.push(BoundaryPoint {
            t,
            point: ErrorPoint::new(d1, d2, format!("{space} ground state, t = {t}"))?,
            energy: report.value,
            converged: report.converged,
        });
    }
    Ok(BoundaryCurve { space, points })
}

/// Weighted ground energies of the two spaces at one weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetEvidence {
    pub t: f64,
    pub fock_value: f64,
    pub torus_value: f64,
    pub gap: f64,
}

/// Numerical comparison of the Fock-side and torus-side weighted ground
/// energies. A positive gap at interior weights is evidence, not proof, that
/// the number-phase error region is strictly smaller.
pub fn strict_subset_evidence(tgrid: &[f64], fock_dims: &[usize], torus_dims: &[usize]) -> Result<Vec<SubsetEvidence>> {
    check_tgrid(tgrid)?;
    tgrid
        .iter()
        .map(|&t| {
            let fock_value = finite_section_ground(Space::Fock, t, fock_dims, DEFAULT_SECTION_TOL)?.value;
            let torus_value = finite_section_ground(Space::Torus, t, torus_dims, DEFAULT_SECTION_TOL)?.value;
            Ok(SubsetEvidence { t, fock_value, torus_value, gap: fock_value - torus_value })
        })
        .collect()
}

/// Joint observable on `T × N` given by Markov kernels on a number window:
/// in `|n>` the phase outcome is drawn from `p_n` and the number outcome
/// from `q_n`, i.e. `F(X × Y) = Σ_n p_n(X) q_n(Y) |n><n|`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelJoint {
    window: FockWindow,
    phase: Vec<ProbCircle>,
    number: Vec<ProbInt>,
}

impl KernelJoint {
    pub fn new(window: FockWindow, phase: Vec<ProbCircle>, number: Vec<ProbInt>) -> Result<Self> {
        let d = window.dim();
        if phase.len() != d || number.len() != d {
            return Err(Error::InvalidInput(format!(
                "kernel has {} phase and {} number distributions for a window of dimension {d}",
                phase.len(),
                number.len()
            )));
        }
        if let Some((n, _)) = number.iter().enumerate().find(|(_, q)| q.iter().any(|(k, _)| k < 0)) {
            return Err(Error::InvalidInput(format!("number kernel at n = {n} charges negative integers")));
        }
        Ok(Self { window, phase, number })
    }

    /// Kernel with the sharp number margin `F₂ = N`.
    pub fn sharp_number(window: FockWindow, phase: Vec<ProbCircle>) -> Result<Self> {
        let number = (0..window.dim() as i64).map(ProbInt::point).collect();
        Self::new(window, phase, number)
    }

    /// Kernel with number margin `ν * N`: `q_n({l}) = ν({l - n})`.
    pub fn smeared_number(window: FockWindow, phase: Vec<ProbCircle>, nu: &ProbInt) -> Result<Self> {
        let number = (0..window.dim() as i64).map(|n| nu.shift(n)).collect();
        Self::new(window, phase, number)
    }

    /// The same phase distribution in every number state, sharp number margin.
    pub fn constant(window: FockWindow, p: ProbCircle) -> Result<Self> {
        Self::sharp_number(window, vec![p; window.dim()])
    }

    pub fn window(&self) -> FockWindow {
        self.window
    }

    pub fn phase_kernel(&self) -> &[ProbCircle] {
        &self.phase
    }

    pub fn number_kernel(&self) -> &[ProbInt] {
        &self.number
    }

    /// The common phase distribution, if the kernel does not depend on `n`.
    pub fn constant_phase(&self) -> Option<&ProbCircle> {
        let first = &self.phase[0];
        self.phase.iter().all(|p| p == first).then_some(first)
    }

    /// First-margin distribution `Σ_n ρ_nn p_n` in the state `ρ`.
    pub fn phase_distribution(&self, rho: &DensityState) -> Result<ProbCircle> {
        if rho.window() != Window::Fock(self.window) {
            return Err(Error::InvalidInput("state and kernel live on different windows".into()));
        }
        let weights: Vec<f64> = (0..self.window.dim()).map(|n| rho.matrix().get(n, n).re.max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        let parts: Vec<(f64, &ProbCircle)> =
            weights.iter().zip(&self.phase).filter(|(w, _)| **w > 0.0).map(|(w, p)| (w / total, p)).collect();
        ProbCircle::mixture(&parts)
    }
}

/// Second-margin distribution of the embedded `T × Z` observable in `e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedMargin {
    pub k: i64,
    pub distribution: ProbInt,
    /// `W2(p_{e_k}, δ_k)`.
    pub error: f64,
    /// `W2(p^{F₂}_{|k|}, δ_{|k|})` on the source side.
    pub source_error: f64,
}

/// All embedded second margins and their suprema.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub margins: Vec<EmbeddedMargin>,
    pub sup_error: f64,
    pub sup_source_error: f64,
}

/// Tolerance on the per-state error identity of the embedding.
pub const EMBED_TOL: f64 = 1e-12;

/// Second margins of the `T × Z` observable obtained from `F` through the
/// isometry `|n> ↦ e_n`, completed on negative indices by reflection:
/// `e_k` with `k >= 0` gets `q_k`, `e_{-n}` gets `Y ↦ q_n(-Y)`. Each
/// per-state error is checked against the corresponding `F`-side error.
pub fn embed_joint_to_z(f: &KernelJoint) -> Result<Embedding> {
    let kmax = f.window.dim() as i64 - 1;
    let mut margins = Vec::with_capacity(2 * kmax as usize + 1);
    for k in -kmax..=kmax {
        let n = k.unsigned_abs() as usize;
        let source = &f.number[n];
        let distribution = if k >= 0 { source.clone() } else { source.reflect() };
        let error = w2_integers(&distribution, &ProbInt::point(k));
        let source_error = w2_integers(source, &ProbInt::point(n as i64));
        if (error - source_error).abs() > EMBED_TOL {
            return Err(Error::NumericalConsistency(format!(
                "embedded error {error} differs from source error {source_error} at k = {k}"
            )));
        }
        margins.push(EmbeddedMargin { k, distribution, error, source_error });
    }
    let sup_error = margins.iter().map(|m| m.error).fold(0.0, f64::max);
    let sup_source_error = margins.iter().map(|m| m.source_error).fold(0.0, f64::max);
    Ok(Embedding { margins, sup_error, sup_source_error })
}

/// States used to bound the phase error from below.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeFamily {
    /// Number of equally spaced centres for the phase-localized states.
    pub angles: usize,
    /// Whether number states `|n>` are probed as well.
    pub number_states: bool,
    /// Cells used to discretize the canonical phase distribution.
    pub grid: usize,
}

impl Default for ProbeFamily {
    fn default() -> Self {
        Self { angles: 16, number_states: true, grid: DEFAULT_GRID }
    }
}

impl ProbeFamily {
    /// The probe states on a Fock window: `Σ_{n<K} e^{inθ₀}|n>/√K` for each
    /// centre `θ₀`, then the number states.
    pub fn states(&self, w: FockWindow) -> Result<Vec<DensityState>> {
        let d = w.dim();
        let mut out = Vec::new();
        for j in 0..self.angles {
            let theta = TWO_PI * j as f64 / self.angles as f64;
            let psi: Vec<Complex64> = (0..d).map(|n| Complex64::cis(n as f64 * theta)).collect();
            out.push(DensityState::pure(w.into(), &psi)?);
        }
        if self.number_states {
            for n in 0..d as i64 {
                out.push(DensityState::basis(w.into(), n)?);
            }
        }
        Ok(out)
    }
}

/// Canonical phase distribution of a Fock state on `grid` cells.
///
/// The Fock and Fourier effects share one Toeplitz kernel, so the state is
/// read on the window `[0, K-1]` of `L²(T)`.
pub fn canonical_phase_distribution(rho: &DensityState, grid: usize) -> Result<ProbCircle> {
    let w = match rho.window() {
        Window::Fock(w) => w,
        Window::Torus(_) => return Err(Error::InvalidInput("expected a state on a Fock window".into())),
    };
    let torus = TorusWindow::new(0, w.dim() as i64 - 1)?;
    angle_margin(&DensityState::new(torus.into(), rho.matrix().clone())?, grid)
}

/// Phase-error information for a kernel joint observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseErrorBounds {
    /// Certified lower bound on `sup_ρ W2(M₁_ρ, Φ_ρ)` from the probes.
    pub lower: f64,
    /// Exact value when the phase kernel does not depend on `n`.
    pub exact_if_constant: Option<f64>,
}

/// `max_θ (Σ_j w_j d(θ_j, θ)²)^{1/2}`: the error of a constant phase kernel.
/// Between consecutive antipodes `θ_j + π` the sum is a convex quadratic in
/// `θ`, so the maximum sits at an antipode.
pub fn constant_kernel_phase_error(p: &ProbCircle) -> f64 {
    p.atoms()
        .iter()
        .map(|&(a, _)| {
            let theta = a + std::f64::consts::PI;
            p.atoms().iter().map(|&(b, w)| w * arc_distance(b, theta).powi(2)).sum::<f64>()
        })
        .fold(0.0, f64::max)
        .sqrt()
}

/// Lower bound on the phase error `d(M₁, Φ)` of `F` from the probe states,
/// and the exact value for constant kernels.
///
/// Each probe contributes `W2(M₁_ρ, Φ̂_ρ) - h/2`, where `Φ̂_ρ` is the grid
/// discretization with cell width `h`; moving every cell mass to its centre
/// costs at most `h/2`, so the result is a lower bound on the supremum.
pub fn kernel_joint_phase_error_bounds(f: &KernelJoint, probes: &ProbeFamily) -> Result<PhaseErrorBounds> {
    if probes.grid == 0 {
        return Err(Error::InvalidInput("probe grid must be positive".into()));
    }
    let slack = 0.5 * TWO_PI / probes.grid as f64;
    let mut lower: f64 = 0.0;
    for rho in probes.states(f.window)? {
        let m1 = f.phase_distribution(&rho)?;
        let phi = canonical_phase_distribution(&rho, probes.grid)?;
        lower = lower.max(w2_circle(&m1, &phi) - slack);
    }
    Ok(PhaseErrorBounds { lower, exact_if_constant: f.constant_phase().map(constant_kernel_phase_error) })
}

/// Embeds a Fock vector as the torus state supported on `e_0..e_{K-1}`.
pub fn fock_vector_on_torus(psi: &[Complex64]) -> Result<DensityState> {
    let w = TorusWindow::new(0, psi.len() as i64 - 1)?;
    DensityState::pure(w.into(), psi)
}

/// Random density matrix `G G* / tr` from a complex matrix `G`.
pub fn density_from_factor(window: Window, g: &CMatrix) -> Result<DensityState> {
    let m = g.matmul(&g.adjoint());
    let tr: f64 = (0..m.dim()).map(|i| m[(i, i)].re).sum();
    DensityState::new(window, HermitianOperator::new(m.scale(1.0 / tr))?)
}
