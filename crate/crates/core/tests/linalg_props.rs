use num_complex::Complex64;
use numphase::linalg::{
    eig_hermitian, eigenvalues, inverse_pd, is_psd, min_eigenvalue, operator_norm, CMatrix, HermitianOperator,
    PHASE_FIX_THRESHOLD,
};
use proptest::prelude::*;

fn hermitian(dim: usize, vals: &[(f64, f64)]) -> HermitianOperator {
    let m = CMatrix::from_fn(dim, |i, j| {
        let (a, b) = (i.min(j), i.max(j));
        let (re, im) = vals[a * dim + b];
        if i == j {
            Complex64::new(re, 0.0)
        } else if i < j {
            Complex64::new(re, im)
        } else {
            Complex64::new(re, -im)
        }
    });
    HermitianOperator::new(m).unwrap()
}

fn hermitian_strategy(max_dim: usize) -> impl Strategy<Value = HermitianOperator> {
    (1..=max_dim).prop_flat_map(|d| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d).prop_map(move |v| hermitian(d, &v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_invariants(a in hermitian_strategy(64)) {
        let eig = eig_hermitian(&a);
        let n = a.dim();
        let scale = operator_norm(&a).max(1.0);
        prop_assert!(eig.reconstruct().max_abs_diff(a.matrix()) <= 1e-10 * scale);
        let u = &eig.eigenvectors;
        let gram = u.adjoint().matmul(u);
        prop_assert!(gram.max_abs_diff(&CMatrix::identity(n)) <= 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        for j in 0..n {
            let v = eig.eigenvector(j);
            let first = v.iter().find(|c| c.norm() > PHASE_FIX_THRESHOLD).unwrap();
            prop_assert!(first.im == 0.0 && first.re > 0.0);
        }
    }

    #[test]
    fn shift_moves_spectrum(a in hermitian_strategy(24), c in -5.0f64..5.0) {
        let base = eigenvalues(&a);
        let shifted = eigenvalues(&a.shift(c));
        for (x, y) in base.iter().zip(&shifted) {
            prop_assert!((y - x - c).abs() <= 1e-10);
        }
    }

    #[test]
    fn norm_is_unitarily_invariant(a in hermitian_strategy(24), phases in prop::collection::vec(0.0f64..6.3, 24)) {
        let n = a.dim();
        let u = CMatrix::from_fn(n, |i, j| if i == j { Complex64::cis(phases[i]) } else { Complex64::new(0.0, 0.0) });
        prop_assert!((operator_norm(&a.conjugate_by(&u)) - operator_norm(&a)).abs() <= 1e-10);
    }

    #[test]
    fn double_inverse(a in hermitian_strategy(16)) {
        // shift into the well-conditioned positive cone
        let b = a.shift(operator_norm(&a) + 1.0);
        let inv = inverse_pd(&b).unwrap();
        prop_assert!(b.matrix().matmul(inv.matrix()).max_abs_diff(&CMatrix::identity(b.dim())) <= 1e-8);
        prop_assert!(inverse_pd(&inv).unwrap().max_abs_diff(&b) <= 1e-7);
    }

    #[test]
    fn gram_matrices_are_psd(a in hermitian_strategy(16)) {
        let g = HermitianOperator::new(a.matrix().matmul(a.matrix())).unwrap();
        prop_assert!(is_psd(&g, 1e-10));
        prop_assert!(min_eigenvalue(&g) >= -1e-10);
    }
}

#[test]
fn eigensolver_is_deterministic() {
    let v: Vec<(f64, f64)> = (0..900).map(|i| ((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
    let a = hermitian(30, &v);
    let (x, y) = (eig_hermitian(&a), eig_hermitian(&a));
    assert_eq!(x.eigenvalues, y.eigenvalues);
    assert_eq!(x.eigenvectors, y.eigenvectors);
}
