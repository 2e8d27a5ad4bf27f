//! Christoffel numbers of the arc measure `dθ/2π` restricted to an arc set.
//!
//! For the truncated Toeplitz matrix `T_k` of `1_X dθ/2π` the quantity
//! `1/⟨0|T_k⁻¹|0⟩` is the minimum of `∫_X |p|² dθ/2π` over polynomials
//! `p(z) = 1 + c_1 z + ... + c_{k-1} z^{k-1}`, i.e. the squared norm of the
//! monic orthogonal polynomial of degree `k-1`. It is computed here from the
//! isometric Arnoldi recursion on a quadrature discretization of the measure,
//! which never forms `T_k` and keeps full relative accuracy when the value is
//! far below machine epsilon.

use num_complex::Complex64;

use crate::observables::ArcSet;
use crate::quadrature::gauss_legendre_on;

/// `λ_k = 1/⟨0|T_k⁻¹|0⟩` for `k = 1..=kmax`, as natural logarithms.
pub fn log_christoffel_sequence(x: &ArcSet, kmax: usize) -> Vec<f64> {
    if kmax == 0 || x.is_empty() {
        return vec![f64::NEG_INFINITY; kmax];
    }
    let per_arc = 2 * kmax + 64;
    let mut z = Vec::new();
    let mut q = Vec::new();
    for &(a, b) in x.arcs() {
        let (nodes, weights) = gauss_legendre_on(per_arc, a, b);
        for (t, w) in nodes.into_iter().zip(weights) {
            z.push(Complex64::cis(t));
            q.push(Complex64::new((w / std::f64::consts::TAU).sqrt(), 0.0));
        }
    }
    let norm2: f64 = q.iter().map(|c| c.norm_sqr()).sum();
    let scale = 1.0 / norm2.sqrt();
    q.iter_mut().for_each(|c| *c *= scale);

    let mut out = Vec::with_capacity(kmax);
    out.push(norm2.ln());
    let mut basis: Vec<Vec<Complex64>> = vec![q];
    while out.len() < kmax {
        let last = basis.last().expect("basis is never empty");
        let mut v: Vec<Complex64> = last.iter().zip(&z).map(|(c, zz)| c * zz).collect();
        for _ in 0..2 {
            for b in &basis {
                let h: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
                v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= h * bi);
            }
        }
        let h = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let prev = *out.last().expect("sequence is never empty");
        out.push(prev + 2.0 * h.ln());
        v.iter_mut().for_each(|c| *c /= h);
        basis.push(v);
    }
    out
}

/// `λ_k` for `k = 1..=kmax`.
pub fn christoffel_sequence(x: &ArcSet, kmax: usize) -> Vec<f64> {
    log_christoffel_sequence(x, kmax).into_iter().map(f64::exp).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn first_value_is_measure() {
        let x = ArcSet::new([(0.3, 1.1), (2.0, 4.5)]).unwrap();
        let s = christoffel_sequence(&x, 1);
        assert!((s[0] - x.measure()).abs() < 1e-13);
    }

    #[test]
    fn half_circle_two_by_two() {
        // det/E_11 of [[1/2, -i/π], [i/π, 1/2]]
        let s = christoffel_sequence(&ArcSet::arc(0.0, PI).unwrap(), 2);
        let expected = (0.25 - 1.0 / (PI * PI)) / 0.5;
        assert!((s[1] - expected).abs() < 1e-13);
    }

    #[test]
    fn full_circle_is_constant() {
        let s = christoffel_sequence(&ArcSet::full(), 20);
        assert!(s.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn rotation_invariant() {
        let a = log_christoffel_sequence(&ArcSet::arc(0.0, 2.0).unwrap(), 40);
        let b = log_christoffel_sequence(&ArcSet::arc(3.0, 5.0).unwrap(), 40);
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() < 1e-9 * u.abs().max(1.0));
        }
    }
}
