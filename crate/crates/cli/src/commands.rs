//! One function per subcommand.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use numphase::linalg::MatrixJson;
use numphase::mu_region::{
    default_tgrid, embed_joint_to_z, error_sum_check, fock_vector_on_torus, kernel_joint_phase_error_bounds,
    margin_errors_from_sigma, strict_subset_evidence, trace_boundary, KernelJoint, PhaseErrorBounds, ProbeFamily,
};
use numphase::observables::{phase_effect, DensityState, FockWindow, TorusWindow};
use numphase::spectral_bounds::{
    complementarity_decay, finite_section_ground, lenard_bound, GroundStateReport, GroundStateReportJson, Space,
};
use numphase::transport::{w2_circle, w2_integers, ProbCircle, ProbCircleJson, ProbInt, ProbIntJson};
use serde::{Deserialize, Serialize};

use crate::config::{
    check_fock_dim, check_grid, check_tol, check_torus_half_width, pick, Format, RunConfig, DEFAULT_DIM, DEFAULT_GRID,
    DEFAULT_TOL,
};
use crate::error::{CliError, CliResult};
use crate::parse;

/// Note attached to every output that mentions the oscillator bound for
/// number-phase joint measurements.
pub const E0_CONJECTURE: &str =
    "conjecture: whether E0 bounds d1^2 + d2^2 for number-phase joint measurements is open; not a verified bound";

/// Note attached to subset evidence.
pub const SUBSET_NOTE: &str =
    "numerical evidence only: a positive gap does not prove that the number-phase error region is a proper subset";

/// Machine-readable artifact plus a short human summary.
pub struct Output {
    pub body: String,
    pub summary: String,
    pub out: Option<PathBuf>,
    /// Nonzero exit requested after writing, e.g. a failed check.
    pub failure: Option<CliError>,
}

impl Output {
    fn new(body: String, summary: String, out: Option<PathBuf>) -> Self {
        Self { body, summary, out, failure: None }
    }
}

fn json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn space_of(flag: Option<Space>, cfg: &RunConfig, default: Space) -> CliResult<Space> {
    match (flag, &cfg.space) {
        (Some(s), _) => Ok(s),
        (None, Some(s)) => Ok(s.parse()?),
        (None, None) => Ok(default),
    }
}

fn check_section_dims(space: Space, dims: &[usize]) -> CliResult<()> {
    for &d in dims {
        match space {
            Space::Fock => check_fock_dim(d)?,
            Space::Torus => check_torus_half_width(d)?,
        };
    }
    Ok(())
}

fn arcs_of(flag: Option<String>, cfg: &RunConfig) -> CliResult<numphase::observables::ArcSet> {
    let spec = flag
        .or_else(|| cfg.arcs.clone())
        .ok_or_else(|| CliError::Validation("--arcs is required".into()))?;
    parse::arcs(&spec)
}

#[derive(Debug, Args)]
pub struct PhaseEffectArgs {
    /// Arcs "a:b a:b ..." in radians, or @FILE with {"arcs": [[a, b], ...]}.
    #[arg(long)]
    pub arcs: Option<String>,
    /// Fock dimension of the truncation.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Output file for the matrix JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn phase_effect_cmd(a: PhaseEffectArgs, cfg: &RunConfig) -> CliResult<Output> {
    let x = arcs_of(a.arcs, cfg)?;
    let dim = check_fock_dim(pick(a.dim, cfg.dim, DEFAULT_DIM))?;
    let e = phase_effect(&x, FockWindow::new(dim)?);
    let summary = format!(
        "phase effect: dim {dim}, measure {:.6}, trace {:.6}\n",
        x.measure(),
        e.trace()
    );
    Ok(Output::new(json(&MatrixJson::from(&e))?, summary, a.out.or_else(|| cfg.out.clone())))
}

#[derive(Debug, Args)]
pub struct GroundArgs {
    #[arg(long)]
    pub space: Option<Space>,
    /// Weight t of H(t) = (1-t) kinetic + t angular; omitted for the oscillator Q² + P².
    #[arg(long)]
    pub weight: Option<f64>,
    /// Section sizes: fock dimensions or torus half-widths.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Stop once consecutive sections agree within this tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn ground_cmd(a: GroundArgs, cfg: &RunConfig) -> CliResult<Output> {
    let space = space_of(a.space, cfg, Space::Torus)?;
    let dims = pick(a.dims, cfg.dims.clone(), space.default_schedule());
    check_section_dims(space, &dims)?;
    let tol = check_tol(pick(a.tol, cfg.tol, DEFAULT_TOL))?;
    let weight = a.weight.or(cfg.weight);
    let report = match weight {
        Some(t) => finite_section_ground(space, t, &dims, tol)?,
        None => {
            // Q² + P² = 2 H(1/2).
            let mut r = finite_section_ground(space, 0.5, &dims, tol / 2.0)?;
            r.alphas.iter_mut().for_each(|x| *x *= 2.0);
            r.value *= 2.0;
            r
        }
    };
    let mut summary = String::new();
    let what = weight.map_or("oscillator".to_string(), |t| format!("t = {t}"));
    let _ = writeln!(summary, "{space} ground value ({what}): {:.6}", report.value);
    let _ = writeln!(summary, "converged: {} (sections {:?})", report.converged, report.dims);
    let mags: Vec<String> = (0..5).map(|k| format!("{:.4}", report.coefficient(k).norm())).collect();
    let _ = writeln!(summary, "|c_0..c_4|: {}", mags.join(" "));
    if weight.is_none() && space == Space::Fock {
        let _ = writeln!(summary, "{E0_CONJECTURE}");
    }
    Ok(Output::new(json(&GroundStateReportJson::from(&report))?, summary, a.out.or_else(|| cfg.out.clone())))
}

#[derive(Debug, Args)]
pub struct LenardArgs {
    #[arg(long)]
    pub arcs: Option<String>,
    /// Number set Y as "0,1,...".
    #[arg(long)]
    pub set: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn lenard_cmd(a: LenardArgs, cfg: &RunConfig) -> CliResult<Output> {
    let x = arcs_of(a.arcs, cfg)?;
    let spec = a.set.or_else(|| cfg.set.clone()).ok_or_else(|| CliError::Validation("--set is required".into()))?;
    let y = parse::index_set(&spec)?;
    let dim = check_fock_dim(pick(a.dim, cfg.dim, DEFAULT_DIM))?;
    let r = lenard_bound(&x, &y, FockWindow::new(dim)?)?;
    let summary = format!(
        "a_plus {:.6}, bound {:.6}, truncated sup {:.6}\n",
        r.a_plus, r.bound, r.truncated_sup
    );
    Ok(Output::new(json(&r)?, summary, a.out.or_else(|| cfg.out.clone())))
}

#[derive(Debug, Args)]
pub struct ComplementarityArgs {
    #[arg(long)]
    pub arcs: Option<String>,
    /// Section dimensions k, increasing.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct DecayRow {
    k: usize,
    alpha_max: f64,
}

pub fn complementarity_cmd(a: ComplementarityArgs, cfg: &RunConfig) -> CliResult<Output> {
    let x = arcs_of(a.arcs, cfg)?;
    let dims = pick(a.dims, cfg.dims.clone(), Space::Fock.default_schedule());
    check_section_dims(Space::Fock, &dims)?;
    let rows = complementarity_decay(&x, &dims)?;
    let body = match pick(a.format, cfg.format, Format::Json) {
        Format::Json => json(&rows.iter().map(|&(k, alpha_max)| DecayRow { k, alpha_max }).collect::<Vec<_>>())?,
        Format::Csv => {
            let mut s = String::from("k,alpha_max\n");
            for (k, v) in &rows {
                let _ = writeln!(s, "{k},{v:e}");
            }
            s
        }
    };
    let decreasing = rows.windows(2).all(|p| p[1].1 < p[0].1);
    let (k, v) = rows.last().copied().expect("schedule is nonempty");
    let summary = format!("alpha_max at k = {k}: {v:.3e}; strictly decreasing: {decreasing}\n");
    Ok(Output::new(body, summary, a.out.or_else(|| cfg.out.clone())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Circle,
    Int,
}

#[derive(Debug, Args)]
pub struct WassersteinArgs {
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// uniform:N, point:x, or a JSON file {"atoms": [[x, w], ...]}.
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub nu: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Distance {
    kind: &'static str,
    distance: f64,
}

pub fn wasserstein_cmd(a: WassersteinArgs, cfg: &RunConfig) -> CliResult<Output> {
    let kind = match (a.kind, &cfg.kind) {
        (Some(k), _) => k,
        (None, Some(s)) => <Kind as clap::ValueEnum>::from_str(s, true)
            .map_err(|_| CliError::Validation(format!("unknown kind '{s}' (expected circle or int)")))?,
        (None, None) => Kind::Circle,
    };
    let need = |v: Option<String>, f: &Option<String>, name: &str| {
        v.or_else(|| f.clone()).ok_or_else(|| CliError::Validation(format!("--{name} is required")))
    };
    let mu = need(a.mu, &cfg.mu, "mu")?;
    let nu = need(a.nu, &cfg.nu, "nu")?;
    let d = match kind {
        Kind::Circle => Distance { kind: "circle", distance: w2_circle(&parse::circle_measure(&mu)?, &parse::circle_measure(&nu)?) },
        Kind::Int => Distance { kind: "int", distance: w2_integers(&parse::int_measure(&mu)?, &parse::int_measure(&nu)?) },
    };
    let summary = format!("W2 ({}) = {:.6}\n", d.kind, d.distance);
    Ok(Output::new(json(&d)?, summary, a.out.or_else(|| cfg.out.clone())))
}

#[derive(Debug, Args)]
pub struct MuBoundaryArgs {
    #[arg(long)]
    pub space: Option<Space>,
    /// Weights t in (0, 1), increasing.
    #[arg(long, value_delimiter = ',')]
    pub tgrid: Option<Vec<f64>>,
    /// Section sizes for the traced space (both spaces use their defaults with --evidence).
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Compare fock and torus weighted ground energies instead of tracing one curve.
    #[arg(long)]
    pub evidence: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct BoundaryRowJson {
    t: f64,
    d1: f64,
    d2: f64,
    energy: f64,
    converged: bool,
}

#[derive(Serialize)]
struct EvidenceJson<'a> {
    note: &'static str,
    rows: &'a [numphase::mu_region::SubsetEvidence],
}

pub fn mu_boundary_cmd(a: MuBoundaryArgs, cfg: &RunConfig) -> CliResult<Output> {
    let tgrid = pick(a.tgrid, cfg.tgrid.clone(), default_tgrid());
    let format = pick(a.format, cfg.format, Format::Csv);
    let out = a.out.or_else(|| cfg.out.clone());
    if a.evidence {
        let fock = Space::Fock.default_schedule();
        let torus = Space::Torus.default_schedule();
        let rows = strict_subset_evidence(&tgrid, &fock, &torus)?;
        let body = match format {
            Format::Json => json(&EvidenceJson { note: SUBSET_NOTE, rows: &rows })?,
            Format::Csv => {
                let mut s = String::from("t,fock_value,torus_value,gap\n");
                for r in &rows {
                    let _ = writeln!(s, "{},{},{},{}", r.t, r.fock_value, r.torus_value, r.gap);
                }
                s
            }
        };
        let min_gap = rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
        let summary = format!("{} weights, smallest gap {min_gap:.6}\n{SUBSET_NOTE}\n", rows.len());
        return Ok(Output::new(body, summary, out));
    }
    let space = space_of(a.space, cfg, Space::Torus)?;
    let dims = pick(a.dims, cfg.dims.clone(), space.default_schedule());
    check_section_dims(space, &dims)?;
    let curve = trace_boundary(space, &tgrid, &dims)?;
    let body = match format {
        Format::Csv => curve.to_csv(),
        Format::Json => json(
            &curve
                .points
                .iter()
                .map(|p| BoundaryRowJson { t: p.t, d1: p.point.d1, d2: p.point.d2, energy: p.energy, converged: p.converged })
                .collect::<Vec<_>>(),
        )?,
    };
    let unconverged = curve.points.iter().filter(|p| !p.converged).count();
    let mut summary = format!(
        "{space} boundary: {} points, {unconverged} unconverged, monotone: {}\n",
        curve.points.len(),
        curve.is_monotone()
    );
    if space == Space::Fock {
        let _ = writeln!(summary, "{E0_CONJECTURE}");
    }
    Ok(Output::new(body, summary, out))
}

#[derive(Debug, Args)]
pub struct ErrorSumArgs {
    /// Density matrix JSON on the torus window [-k, k] (dimension 2k+1).
    #[arg(long, conflicts_with = "report")]
    pub state: Option<PathBuf>,
    /// Ground-state report JSON from `ground`; fock vectors are placed on e_0..e_{K-1}.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ErrorSumJson {
    d1: f64,
    d2: f64,
    sum: f64,
    bound: f64,
    satisfied: bool,
    conjecture: &'static str,
}

pub fn error_sum_cmd(a: ErrorSumArgs, cfg: &RunConfig) -> CliResult<Output> {
    let sigma = match (a.state, a.report) {
        (Some(path), None) => {
            let m: MatrixJson = parse::read_json(&path)?;
            if m.dim.is_multiple_of(2) {
                return Err(CliError::Validation(format!("state dimension {} is not odd (expected 2k+1)", m.dim)));
            }
            let k = check_torus_half_width(m.dim / 2)?;
            DensityState::new(TorusWindow::symmetric(k).into(), m.to_hermitian()?)?
        }
        (None, Some(path)) => {
            let js: GroundStateReportJson = parse::read_json(&path)?;
            let report = GroundStateReport::try_from(js)?;
            match report.space {
                Space::Torus => DensityState::pure(report.window(), &report.vector)?,
                Space::Fock => fock_vector_on_torus(&report.vector)?,
            }
        }
        _ => return Err(CliError::Validation("give exactly one of --state or --report".into())),
    };
    let p = margin_errors_from_sigma(&sigma)?;
    let check = error_sum_check(&sigma)?;
    let body = ErrorSumJson { d1: p.d1, d2: p.d2, sum: check.sum, bound: check.bound, satisfied: check.satisfied, conjecture: E0_CONJECTURE };
    let summary = format!(
        "d1 {:.6}, d2 {:.6}, d1^2 + d2^2 = {:.6} >= {:.6}: {}\n{E0_CONJECTURE}\n",
        p.d1, p.d2, check.sum, check.bound, check.satisfied
    );
    let mut output = Output::new(json(&body)?, summary, a.out.or_else(|| cfg.out.clone()));
    if !check.satisfied {
        output.failure = Some(CliError::Numerical(format!(
            "error sum {} is below the torus oscillator bound {}",
            check.sum, check.bound
        )));
    }
    Ok(output)
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Kernel JSON {"dim": K, "phase": [measure, ...], "number": [measure, ...]}.
    #[arg(long, conflicts_with_all = ["phase", "nu"])]
    pub kernel: Option<PathBuf>,
    /// Fock dimension when the kernel is given by --phase/--nu.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Constant phase kernel: uniform:N, point:x, or a circle measure JSON file.
    #[arg(long)]
    pub phase: Option<String>,
    /// Number smearing: uniform:N, point:k, or an integer measure JSON file; sharp if omitted.
    #[arg(long)]
    pub nu: Option<String>,
    /// Cells for the canonical phase distribution of the probes.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Phase-localized probe centres.
    #[arg(long)]
    pub probe_angles: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Kernel file: `phase` has one entry per number state, or a single entry
/// used for all of them; `number` likewise, and sharp when absent.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelFile {
    dim: usize,
    phase: Vec<ProbCircleJson>,
    number: Option<Vec<ProbIntJson>>,
}

fn broadcast<T: Clone>(v: Vec<T>, dim: usize, what: &str) -> CliResult<Vec<T>> {
    match v.len() {
        1 => Ok(vec![v[0].clone(); dim]),
        n if n == dim => Ok(v),
        n => Err(CliError::Validation(format!("{what} kernel has {n} entries, expected 1 or {dim}"))),
    }
}

#[derive(Serialize)]
struct MarginJson {
    k: i64,
    error: f64,
    source_error: f64,
    distribution: ProbIntJson,
}

#[derive(Serialize)]
struct EmbedJson {
    dim: usize,
    sup_error: f64,
    sup_source_error: f64,
    phase_error: PhaseErrorBounds,
    margins: Vec<MarginJson>,
}

pub fn embed_cmd(a: EmbedArgs, cfg: &RunConfig) -> CliResult<Output> {
    let grid = check_grid(pick(a.grid, cfg.grid, DEFAULT_GRID))?;
    let angles = pick(a.probe_angles, cfg.probe_angles, ProbeFamily::default().angles);
    let f = match a.kernel {
        Some(path) => {
            let file: KernelFile = parse::read_json(&path)?;
            let dim = check_fock_dim(file.dim)?;
            let w = FockWindow::new(dim)?;
            let phase = broadcast(file.phase, dim, "phase")?
                .into_iter()
                .map(ProbCircle::try_from)
                .collect::<Result<Vec<_>, _>>()?;
            match file.number {
                None => KernelJoint::sharp_number(w, phase)?,
                Some(n) => {
                    let number = broadcast(n, dim, "number")?
                        .into_iter()
                        .map(ProbInt::try_from)
                        .collect::<Result<Vec<_>, _>>()?;
                    KernelJoint::new(w, phase, number)?
                }
            }
        }
        None => {
            let dim = check_fock_dim(pick(a.dim, cfg.dim, DEFAULT_DIM))?;
            let w = FockWindow::new(dim)?;
            let spec = a.phase.ok_or_else(|| CliError::Validation("give --kernel or --phase".into()))?;
            let p = parse::circle_measure(&spec)?;
            match a.nu {
                None => KernelJoint::constant(w, p)?,
                Some(nu) => KernelJoint::smeared_number(w, vec![p; dim], &parse::int_measure(&nu)?)?,
            }
        }
    };
    let emb = embed_joint_to_z(&f)?;
    let probes = ProbeFamily { angles, grid, ..ProbeFamily::default() };
    let bounds = kernel_joint_phase_error_bounds(&f, &probes)?;
    let mut summary = format!(
        "number error: sup over Z {:.6}, sup over N {:.6}\nphase error: probe lower bound {:.6}",
        emb.sup_error, emb.sup_source_error, bounds.lower
    );
    match bounds.exact_if_constant {
        Some(v) => {
            let _ = writeln!(summary, ", exact (constant kernel) {v:.6}");
        }
        None => summary.push_str(", exact value not available for this kernel\n"),
    }
    let body = EmbedJson {
        dim: f.window().dim(),
        sup_error: emb.sup_error,
        sup_source_error: emb.sup_source_error,
        phase_error: bounds,
        margins: emb
            .margins
            .iter()
            .map(|m| MarginJson { k: m.k, error: m.error, source_error: m.source_error, distribution: (&m.distribution).into() })
            .collect(),
    };
    Ok(Output::new(json(&body)?, summary, a.out.or_else(|| cfg.out.clone())))
}
