use std::f64::consts::PI;

use numphase::angle::TWO_PI;
use numphase::linalg::{max_eigenvalue, HermitianOperator};
use numphase::observables::{
    moment_operator, number_projection, phase_effect, phase_shift_conjugate, smear_phase, ArcSet, FockWindow,
    IndexSet, Window,
};
use numphase::transport::ProbCircle;
use proptest::prelude::*;

fn arcs_strategy() -> impl Strategy<Value = ArcSet> {
    prop::collection::vec((0.0..TWO_PI, 0.01f64..2.5), 1..4)
        .prop_map(|v| ArcSet::new(v.into_iter().map(|(a, l)| (a, a + l))).unwrap())
}

fn w(dim: usize) -> FockWindow {
    FockWindow::new(dim).unwrap()
}

proptest! {
    #[test]
    fn covariance(x in arcs_strategy(), theta in 0.0..TWO_PI) {
        let lhs = phase_shift_conjugate(&phase_effect(&x, w(32)), theta);
        prop_assert!(lhs.max_abs_diff(&phase_effect(&x.translate(theta), w(32))) <= 1e-12);
    }

    #[test]
    fn complement_sums_to_identity(x in arcs_strategy()) {
        let s = phase_effect(&x, w(32)).add(&phase_effect(&x.complement(), w(32)));
        prop_assert!(s.max_abs_diff(&HermitianOperator::identity(32)) <= 1e-12);
    }

    #[test]
    fn additivity(a in 0.0f64..3.0, l1 in 0.01f64..1.5, l2 in 0.01f64..1.5) {
        let x1 = ArcSet::arc(a, a + l1).unwrap();
        let x2 = ArcSet::arc(a + l1 + 0.2, a + l1 + 0.2 + l2).unwrap();
        let lhs = phase_effect(&x1.union(&x2), w(24));
        prop_assert!(lhs.max_abs_diff(&phase_effect(&x1, w(24)).add(&phase_effect(&x2, w(24)))) <= 1e-12);
    }

    #[test]
    fn point_smearing_is_conjugation(x in arcs_strategy(), theta in 0.0..TWO_PI) {
        let lhs = smear_phase(&ProbCircle::point(theta), &x, w(16));
        prop_assert!(lhs.max_abs_diff(&phase_effect(&x.translate(-theta), w(16))) <= 1e-12);
        prop_assert!(lhs.max_abs_diff(&phase_shift_conjugate(&phase_effect(&x, w(16)), -theta)) <= 1e-12);
    }

    #[test]
    fn number_shift(ys in prop::collection::vec(0i64..20, 0..6), k in 0usize..10) {
        let win = w(30);
        let y = IndexSet::new(ys);
        let v = moment_operator(k, win).unwrap();
        let shifted = number_projection(&y.shift(k as i64), Window::Fock(win)).unwrap();
        let lhs = v.matmul(shifted.matrix()).matmul(&v.adjoint());
        let rhs = number_projection(&y, Window::Fock(win)).unwrap();
        prop_assert_eq!(&lhs, rhs.matrix());
    }

    #[test]
    fn projections_are_idempotent(ys in prop::collection::vec(0i64..12, 0..12)) {
        let p = number_projection(&IndexSet::new(ys), Window::Fock(w(12))).unwrap();
        prop_assert_eq!(&p.matrix().matmul(p.matrix()), p.matrix());
    }
}

#[test]
fn narrow_arc_norm_approaches_one() {
    let eps = 0.05;
    let theta0 = 1.0;
    let x = ArcSet::arc(theta0 - eps, theta0 + eps).unwrap();
    let mut prev = 0.0;
    for k in [8, 16, 32, 64, 128, 256, 512] {
        let n = max_eigenvalue(&phase_effect(&x, w(k)));
        assert!(n >= prev - 1e-12, "norm decreased at K = {k}");
        prev = n;
    }
    assert!(prev > 0.99, "norm at K = 512 is {prev}");
}

#[test]
fn half_circle_effect_is_positive_at_dim_32() {
    let e = phase_effect(&ArcSet::arc(0.0, PI).unwrap(), w(32));
    assert!(numphase::linalg::is_psd(&e, 1e-10));
}
