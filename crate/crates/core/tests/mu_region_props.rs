use std::f64::consts::PI;

use num_complex::Complex64;
use numphase::linalg::CMatrix;
use numphase::mu_region::{
    constant_kernel_phase_error, default_tgrid, density_from_factor, embed_joint_to_z, error_sum_check,
    kernel_joint_phase_error_bounds, margin_errors_from_sigma, margin_errors_from_sigma_grid, strict_subset_evidence,
    trace_boundary, KernelJoint, ProbeFamily, DEFAULT_GRID,
};
use numphase::observables::{DensityState, FockWindow, TorusWindow, Window};
use numphase::spectral_bounds::{oscillator_torus_ground, torus_oscillator_energy, Space};
use numphase::transport::{w2_circle, ProbCircle, ProbInt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn ground_state_saturates_the_error_sum() {
    let r = oscillator_torus_ground(&Space::Torus.default_schedule()).unwrap();
    let sigma = DensityState::pure(r.window(), &r.vector).unwrap();
    let p = margin_errors_from_sigma(&sigma).unwrap();
    assert!((p.square_sum() - 0.9996).abs() < 5e-4);
    assert!((p.square_sum() - torus_oscillator_energy()).abs() < 1e-9);
    let g = margin_errors_from_sigma_grid(&sigma, DEFAULT_GRID).unwrap();
    assert!((g.d1 - p.d1).abs() < 1e-2);
}

#[test]
fn e0_error_sum() {
    let e0 = DensityState::basis(TorusWindow::symmetric(5).into(), 0).unwrap();
    let c = error_sum_check(&e0).unwrap();
    assert!((c.sum - PI * PI / 3.0).abs() < 1e-12);
    assert!(c.satisfied);
}

#[test]
fn random_states_satisfy_error_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let window: Window = TorusWindow::symmetric(16).into();
    for _ in 0..100 {
        let g = CMatrix::from_fn(33, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        assert!(error_sum_check(&density_from_factor(window, &g).unwrap()).unwrap().satisfied);
    }
}

#[test]
fn torus_boundary_is_monotone_with_paper_midpoint() {
    let curve = trace_boundary(Space::Torus, &default_tgrid(), &Space::Torus.default_schedule()).unwrap();
    assert!(curve.is_monotone(), "defect {}", curve.monotonicity_defect());
    assert!(curve.points.iter().all(|p| p.converged));
    let mid = curve.points.iter().find(|p| p.t == 0.5).unwrap();
    assert!((mid.point.square_sum() - 0.9996).abs() < 5e-4);
}

#[test]
fn fock_boundary_midpoint() {
    let curve = trace_boundary(Space::Fock, &[0.25, 0.5, 0.75], &Space::Fock.default_schedule()).unwrap();
    assert!(curve.is_monotone());
    let mid = &curve.points[1];
    assert!((mid.point.square_sum() - 1.5818).abs() < 5e-4);
}

#[test]
fn small_weight_limit() {
    let curve = trace_boundary(Space::Torus, &[1e-4], &Space::Torus.default_schedule()).unwrap();
    let p = &curve.points[0].point;
    assert!(p.d2 < 1e-2);
    assert!((p.d1 - PI / 3f64.sqrt()).abs() < 1e-2);
    let ev = strict_subset_evidence(&[1e-4], &Space::Fock.default_schedule(), &Space::Torus.default_schedule()).unwrap();
    assert!(ev[0].fock_value < 1e-3 && ev[0].torus_value < 1e-3 && ev[0].gap.abs() < 1e-3);
}

#[test]
fn fock_energy_dominates_torus_energy() {
    let ev =
        strict_subset_evidence(&default_tgrid(), &Space::Fock.default_schedule(), &Space::Torus.default_schedule())
            .unwrap();
    assert!(ev.iter().all(|e| e.gap >= -1e-8));
    let mid = ev.iter().find(|e| e.t == 0.5).unwrap();
    assert!((mid.gap - 0.2911).abs() < 1e-3);
}

#[test]
fn embedding_reproduces_sup_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let w = FockWindow::new(10).unwrap();
    for _ in 0..20 {
        let number: Vec<ProbInt> = (0..10)
            .map(|_| {
                let ks: Vec<i64> = (0..3).map(|_| rng.gen_range(0..14)).collect();
                ProbInt::new(ks.iter().map(|&k| (k, 1.0 / 3.0))).unwrap()
            })
            .collect();
        let f = KernelJoint::new(w, vec![ProbCircle::point(0.0); 10], number).unwrap();
        let e = embed_joint_to_z(&f).unwrap();
        assert!((e.sup_error - e.sup_source_error).abs() <= 1e-12);
        for m in e.margins.iter().filter(|m| m.k < 0) {
            let mirror = e.margins.iter().find(|o| o.k == -m.k).unwrap();
            assert_eq!(m.distribution, mirror.distribution.reflect());
        }
    }
}

#[test]
fn constant_kernels_exact_branch() {
    let w = FockWindow::new(32).unwrap();
    let probes = ProbeFamily { angles: 8, number_states: true, grid: 1024 };
    let uniform = KernelJoint::constant(w, ProbCircle::uniform_grid(1024)).unwrap();
    let b = kernel_joint_phase_error_bounds(&uniform, &probes).unwrap();
    let exact = b.exact_if_constant.unwrap();
    assert!((exact - w2_circle(&ProbCircle::uniform_grid(1024), &ProbCircle::point(0.0))).abs() < 1e-2);
    assert!(b.lower <= exact);
    assert!(b.lower > 1.5);

    let point = KernelJoint::constant(w, ProbCircle::point(0.7)).unwrap();
    let b = kernel_joint_phase_error_bounds(&point, &probes).unwrap();
    assert!((b.exact_if_constant.unwrap() - PI).abs() < 1e-12);
    assert!(b.lower <= PI);
    assert!((constant_kernel_phase_error(&ProbCircle::point(0.7)) - PI).abs() < 1e-12);
}

#[test]
fn alternating_kernel_only_has_a_lower_bound() {
    let w = FockWindow::new(32).unwrap();
    let phase: Vec<ProbCircle> = (0..32).map(|n| ProbCircle::point(if n % 2 == 0 { 0.0 } else { PI })).collect();
    let f = KernelJoint::sharp_number(w, phase).unwrap();
    let b = kernel_joint_phase_error_bounds(&f, &ProbeFamily { angles: 8, number_states: true, grid: 1024 }).unwrap();
    assert!(b.exact_if_constant.is_none());
    // number states see a point mass against the uniform phase distribution
    assert!(b.lower >= PI / 3f64.sqrt() - 0.01);
    assert!(b.lower <= PI);
}
