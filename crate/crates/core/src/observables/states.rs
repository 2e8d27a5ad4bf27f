use num_complex::Complex64;

use crate::angle::TWO_PI;
use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, CMatrix, HermitianOperator};
use crate::transport::{ProbCircle, ProbInt};

use super::arcs::ArcSet;
use super::effects::{angle_effect, arc_fourier_coefficient, torus_q2};
use super::window::{TorusWindow, Window};

/// Tolerance on positivity and unit trace of a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Density matrix on a Fock or Fourier window.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    window: Window,
    matrix: HermitianOperator,
}

impl DensityState {
    pub fn new(window: Window, matrix: HermitianOperator) -> Result<Self> {
        if matrix.dim() != window.dim() {
            return Err(Error::InvalidInput(format!(
                "state has dimension {} but window {} has {}",
                matrix.dim(),
                window.describe(),
                window.dim()
            )));
        }
        let tr = matrix.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidInput(format!("state trace {tr} differs from 1")));
        }
        let lmin = min_eigenvalue(&matrix);
        if lmin < -STATE_TOL {
            return Err(Error::NumericalConsistency(format!("state has negative eigenvalue {lmin:e}")));
        }
        Ok(Self { window, matrix })
    }

    /// `|ψ><ψ|` for the normalized vector `ψ / ‖ψ‖`.
    pub fn pure(window: Window, psi: &[Complex64]) -> Result<Self> {
        if psi.len() != window.dim() {
            return Err(Error::InvalidInput(format!(
                "vector length {} does not match window dimension {}",
                psi.len(),
                window.dim()
            )));
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        let m = CMatrix::from_fn(v.len(), |i, j| v[i] * v[j].conj());
        Self::new(window, HermitianOperator::new(m)?)
    }

    /// Basis state with label `k`.
    pub fn basis(window: Window, k: i64) -> Result<Self> {
        let i = window.require_position(k)?;
        let mut diag = vec![0.0; window.dim()];
        diag[i] = 1.0;
        Ok(Self { window, matrix: HermitianOperator::from_real_diagonal(&diag) })
    }

    /// Convex combination `Σ p_i ρ_i` of states on the same window.
    pub fn mixture(parts: &[(f64, &DensityState)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("empty mixture".into()))?;
        let window = first.1.window;
        let mut acc = HermitianOperator::zero(window.dim());
        for (p, s) in parts {
            if s.window != window {
                return Err(Error::InvalidInput("mixture of states on different windows".into()));
            }
            if *p < 0.0 {
                return Err(Error::InvalidInput("negative mixture weight".into()));
            }
            acc = acc.add(&s.matrix.scale(*p));
        }
        Self::new(window, acc)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn matrix(&self) -> &HermitianOperator {
        &self.matrix
    }

    fn torus_window(&self) -> Result<TorusWindow> {
        match self.window {
            Window::Torus(w) => Ok(w),
            Window::Fock(_) => Err(Error::InvalidInput("operation needs a state on a torus window".into())),
        }
    }

    /// Coefficients `c_k` of the angle density `q(θ) = Σ_k c_k e^{ikθ}`,
    /// for `k = -(d-1)..=d-1`, chosen so that `tr[ρ E(X)] = ∫_X q dθ/2π` for the
    /// Toeplitz effects of this crate.
    fn density_coefficients(&self) -> Vec<Complex64> {
        let d = self.window.dim();
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * d - 1];
        // tr[ρ E(X)] = Σ_{m,n} ρ_{mn} I_{n-m}(X)
        for m in 0..d {
            for n in 0..d {
                let k = n as i64 - m as i64;
                c[(k + d as i64 - 1) as usize] += self.matrix.get(m, n);
            }
        }
        c
    }
}

/// Histogram `tr[ρ Φ(X_i)]` over a partition of the circle into cells.
pub fn state_phase_distribution(rho: &DensityState, partition: &[ArcSet]) -> Result<Vec<f64>> {
    check_partition(partition)?;
    let probs: Vec<f64> =
        partition.iter().map(|x| angle_effect(x, rho.window()).trace_with(rho.matrix())).collect();
    if let Some(p) = probs.iter().find(|&&p| p < -1e-12) {
        return Err(Error::NumericalConsistency(format!("negative cell probability {p:e}")));
    }
    Ok(probs)
}

fn check_partition(partition: &[ArcSet]) -> Result<()> {
    let total: f64 = partition.iter().map(ArcSet::measure).sum();
    let union = partition.iter().fold(ArcSet::empty(), |acc, x| acc.union(x));
    if (union.measure() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidPartition(format!("cells cover measure {} of the circle", union.measure())));
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidPartition(format!("cells overlap (total measure {total})")));
    }
    Ok(())
}

/// Number distribution: the diagonal of `ρ`, labelled by the window.
pub fn state_number_distribution(rho: &DensityState) -> Result<ProbInt> {
    let w = rho.window();
    let atoms = (0..w.dim()).map(|i| (w.label(i), rho.matrix().get(i, i).re.max(0.0)));
    ProbInt::new(atoms)
}

/// Angle distribution `Q_σ` of a torus state, discretized on `grid` cells of
/// width `2π/grid` centred on `2πj/grid`. Cell masses are exact integrals of
/// the density.
pub fn angle_margin(sigma: &DensityState, grid: usize) -> Result<ProbCircle> {
    sigma.torus_window()?;
    if grid == 0 {
        return Err(Error::InvalidInput("grid must be positive".into()));
    }
    let d = sigma.window().dim() as i64;
    let coeffs = sigma.density_coefficients();
    let h = TWO_PI / grid as f64;
    let mut atoms = Vec::with_capacity(grid);
    let mut total = 0.0;
    for j in 0..grid {
        let centre = j as f64 * h;
        let (a, b) = (centre - 0.5 * h, centre + 0.5 * h);
        let mut mass = 0.0;
        for k in -(d - 1)..d {
            mass += (coeffs[(k + d - 1) as usize] * arc_fourier_coefficient(k, a, b)).re;
        }
        if mass < -STATE_TOL {
            return Err(Error::NumericalConsistency(format!(
                "angle density negative on cell {j} (mass {mass:e})"
            )));
        }
        total += mass;
        atoms.push((centre, mass.max(0.0)));
    }
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::NumericalConsistency(format!("angle cells sum to {total}")));
    }
    let atoms: Vec<(f64, f64)> = atoms.into_iter().map(|(t, m)| (t, m / total)).collect();
    ProbCircle::new(atoms)
}

/// Exact angle second moment `tr[σ Q²] = ∫ θ² q(θ) dθ/2π`, θ in `(-π, π]`.
pub fn angle_second_moment(sigma: &DensityState) -> Result<f64> {
    let w = sigma.torus_window()?;
    Ok(torus_q2(w).trace_with(sigma.matrix()))
}

/// Fourier-index distribution `P_σ`: the diagonal of `σ` as atoms on `Z`.
pub fn fourier_margin(sigma: &DensityState) -> Result<ProbInt> {
    sigma.torus_window()?;
    state_number_distribution(sigma)
}
