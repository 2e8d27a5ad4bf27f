use std::f64::consts::PI;

use num_complex::Complex64;
use numphase::linalg::{min_eigenvalue, HermitianOperator};
use numphase::observables::{
    phase_effect, second_phase_moment, torus_q2, ArcSet, FockWindow, IndexSet, TorusWindow,
};
use numphase::spectral_bounds::{
    complementarity_decay, finite_section_ground, fock_meet_spectrum, lenard_bound, max_scalar_below,
    max_scalar_below_bisection, max_scalar_below_inverse, oscillator_fock_ground, oscillator_torus_ground,
    shift_compress, torus_meet_spectrum, weighted_hamiltonian, Space,
};
use proptest::prelude::*;

#[test]
fn diagonal_of_second_moment() {
    let d = second_phase_moment(FockWindow::new(8).unwrap()).get(0, 0).re;
    assert!((d - PI * PI / 3.0).abs() < 1e-12);
    let q = torus_q2(TorusWindow::symmetric(3));
    assert!((q.get(3, 3).re - d).abs() < 1e-15);
}

#[test]
fn weighted_ground_values_are_half_the_oscillator_values() {
    let torus = finite_section_ground(Space::Torus, 0.5, &[4, 8, 16, 32, 64], 1e-7).unwrap();
    assert!((torus.value - 0.4998).abs() < 5e-4);
    let fock = finite_section_ground(Space::Fock, 0.5, &Space::Fock.default_schedule(), 1e-7).unwrap();
    assert!((fock.value - 0.7909).abs() < 5e-4);
    let full = oscillator_torus_ground(&Space::Torus.default_schedule()).unwrap();
    assert!((2.0 * torus.value - full.value).abs() < 1e-7);
}

#[test]
fn fock_ground_is_strictly_above_one() {
    let r = oscillator_fock_ground(&Space::Fock.default_schedule()).unwrap();
    assert!(r.value > 1.0 && r.converged);
}

#[test]
fn torus_vector_is_reflection_symmetric() {
    let r = oscillator_torus_ground(&[4, 8, 16, 32, 64]).unwrap();
    let k = *r.dims.last().unwrap() as i64;
    for s in 1..=k {
        assert!((r.coefficient(s) - r.coefficient(-s)).norm() < 1e-8);
    }
    let norm: f64 = r.vector.iter().map(|c| c.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-10);
}

#[test]
fn variational_upper_bound() {
    for space in [Space::Fock, Space::Torus] {
        for t in [0.2, 0.5, 0.8] {
            let r = finite_section_ground(space, t, &[6, 12, 24], f64::MIN_POSITIVE).unwrap();
            for (&size, &alpha) in r.dims.iter().zip(&r.alphas) {
                let (window, h) = weighted_hamiltonian(space, t, size).unwrap();
                for j in 0..5 {
                    let psi: Vec<Complex64> = (0..window.dim())
                        .map(|i| Complex64::new((0.3 * (i + j) as f64).cos(), (0.7 * (i * j) as f64).sin()))
                        .collect();
                    let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                    let psi: Vec<Complex64> = psi.iter().map(|c| c / norm).collect();
                    assert!(alpha <= h.expectation(&psi) + 1e-10);
                }
            }
        }
    }
}

#[test]
fn lenard_half_circle_pair() {
    let x = ArcSet::arc(0.0, PI).unwrap();
    let r = lenard_bound(&x, &IndexSet::new([0, 1]), FockWindow::new(64).unwrap()).unwrap();
    assert!((r.a_plus - 0.8183).abs() < 1e-4);
    assert!((r.bound - 1.9046).abs() < 1e-4);
    assert!(r.truncated_sup <= r.bound + 1e-9);
    let js = serde_json::to_value(&r).unwrap();
    assert!(js.get("a_plus").is_some() && js.get("bound").is_some() && js.get("truncated_sup").is_some());
}

#[test]
fn lenard_single_index_is_measure() {
    let x = ArcSet::new([(0.5, 1.7), (3.0, 3.4)]).unwrap();
    let r = lenard_bound(&x, &IndexSet::new([0]), FockWindow::new(16).unwrap()).unwrap();
    assert!((r.a_plus - x.measure()).abs() < 1e-14);
    assert!((r.bound - (1.0 + x.measure().sqrt())).abs() < 1e-14);
}

#[test]
fn decay_is_strictly_decreasing_on_half_circle() {
    let x = ArcSet::arc(0.0, PI).unwrap();
    let seq = complementarity_decay(&x, &[4, 8, 16, 32, 64, 128, 256]).unwrap();
    assert!(seq.iter().all(|&(_, a)| a > 0.0));
    assert!(seq.windows(2).all(|w| w[1].1 < w[0].1));
    assert!(seq.last().unwrap().1 < complementarity_decay(&x, &[8]).unwrap()[0].1);
}

#[test]
fn shift_compress_of_toeplitz_is_its_truncation() {
    let x = ArcSet::new([(0.2, 2.2), (4.0, 5.0)]).unwrap();
    let big = phase_effect(&x, FockWindow::new(20).unwrap());
    for r in [0, 1, 5, 19] {
        let small = phase_effect(&x, FockWindow::new(20 - r).unwrap());
        assert!(shift_compress(&big, r).unwrap().max_abs_diff(&small) < 1e-12);
        // compression preserves the Lemma-1 witness up to reindexing
        let a = max_scalar_below(&shift_compress(&big, r).unwrap(), 0).unwrap();
        assert!(a <= x.measure() + 1e-12);
    }
}

fn arcs_strategy() -> impl Strategy<Value = ArcSet> {
    prop::collection::vec((0.0..std::f64::consts::TAU, 0.05f64..1.5), 1..3)
        .prop_map(|v| ArcSet::new(v.into_iter().map(|(a, l)| (a, a + l))).unwrap())
        .prop_filter("proper subset", |x| x.measure() < 0.9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lenard_inequality(x in arcs_strategy(), ys in prop::collection::vec(0i64..40, 0..6)) {
        let y = IndexSet::new(ys);
        let r = lenard_bound(&x, &y, FockWindow::new(40).unwrap()).unwrap();
        prop_assert!(r.a_plus < 1.0);
        prop_assert!(r.truncated_sup <= r.bound + 1e-9);
        let f = fock_meet_spectrum(&x, &y, FockWindow::new(40).unwrap()).unwrap();
        let t = torus_meet_spectrum(&x, &y, TorusWindow::new(-5, 45).unwrap()).unwrap();
        for (a, b) in f.iter().zip(&t) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn bisection_agrees_with_inverse(x in arcs_strategy(), k in 1usize..10, idx in 0usize..10) {
        let e = phase_effect(&x, FockWindow::new(k).unwrap());
        let idx = idx % k;
        prop_assume!(min_eigenvalue(&e) > 1e-6);
        let a = max_scalar_below_inverse(&e, idx).unwrap();
        let b = max_scalar_below_bisection(&e, idx).unwrap();
        prop_assert!((a - b).abs() <= 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn witness_is_sharp(x in arcs_strategy(), k in 1usize..12) {
        let e = phase_effect(&x, FockWindow::new(k).unwrap());
        let a = max_scalar_below(&e, 0).unwrap();
        let mut m = e.matrix().clone();
        m[(0, 0)] -= Complex64::new(a * (1.0 + 1e-6) + 1e-9, 0.0);
        prop_assert!(min_eigenvalue(&HermitianOperator::new(m).unwrap()) < 0.0);
    }
}
