//! Wasserstein-2 distances for atomic probability measures on the circle
//! (arc metric) and on the integers, plus the second moments that give the
//! exact errors of convolution approximators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angle::{arc_distance, wrap_2pi, TWO_PI};
use crate::error::{Error, Result};

/// Tolerance on total mass when a measure is loaded.
pub const MASS_TOL: f64 = 1e-9;

fn check_weight(w: f64) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(Error::InvalidMeasure(format!("weight {w} is not a nonnegative number")));
    }
    Ok(())
}

fn check_total(total: f64) -> Result<()> {
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// Atomic probability measure on the circle; atoms sorted by angle in
/// `[0, 2π)`, equal angles merged, zero weights dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbCircle {
    atoms: Vec<(f64, f64)>,
}

impl ProbCircle {
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut v = Vec::new();
        let mut total = 0.0;
        for (theta, w) in atoms {
            if !theta.is_finite() {
                return Err(Error::InvalidMeasure(format!("atom at non-finite angle {theta}")));
            }
            check_weight(w)?;
            total += w;
            if w > 0.0 {
                v.push((wrap_2pi(theta), w));
            }
        }
        check_total(total)?;
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (theta, w) in v {
            match atoms.last_mut() {
                Some(last) if last.0 == theta => last.1 += w,
                _ => atoms.push((theta, w)),
            }
        }
        Ok(Self { atoms })
    }

    pub fn point(theta: f64) -> Self {
        Self { atoms: vec![(wrap_2pi(theta), 1.0)] }
    }

    /// Equal weights on `2πj/n`, `j = 0..n`.
    pub fn uniform_grid(n: usize) -> Self {
        assert!(n > 0, "grid needs at least one atom");
        let w = 1.0 / n as f64;
        Self { atoms: (0..n).map(|j| (j as f64 * TWO_PI / n as f64, w)).collect() }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Pushforward under `θ ↦ θ + α`.
    pub fn rotate(&self, alpha: f64) -> Self {
        Self::new(self.atoms.iter().map(|&(t, w)| (t + alpha, w))).expect("rotation preserves mass")
    }

    /// Convex combination of measures.
    pub fn mixture(parts: &[(f64, &ProbCircle)]) -> Result<Self> {
        Self::new(parts.iter().flat_map(|(p, m)| m.atoms.iter().map(move |&(t, w)| (t, p * w))))
    }
}

/// Atomic probability measure on the integers.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbInt {
    atoms: BTreeMap<i64, f64>,
}

impl ProbInt {
    pub fn new(atoms: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut total = 0.0;
        for (k, w) in atoms {
            check_weight(w)?;
            total += w;
            if w > 0.0 {
                *map.entry(k).or_insert(0.0) += w;
            }
        }
        check_total(total)?;
        Ok(Self { atoms: map })
    }

    pub fn point(k: i64) -> Self {
        Self { atoms: BTreeMap::from([(k, 1.0)]) }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.atoms.iter().map(|(&k, &w)| (k, w))
    }

    pub fn weight(&self, k: i64) -> f64 {
        self.atoms.get(&k).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Pushforward under `k ↦ k + s`.
    pub fn shift(&self, s: i64) -> Self {
        Self { atoms: self.atoms.iter().map(|(&k, &w)| (k + s, w)).collect() }
    }

    /// Pushforward under `k ↦ -k`.
    pub fn reflect(&self) -> Self {
        Self { atoms: self.atoms.iter().map(|(&k, &w)| (-k, w)).collect() }
    }
}

/// JSON `{"atoms": [[θ, w], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbCircleJson {
    pub atoms: Vec<(f64, f64)>,
}

/// JSON `{"atoms": [[k, w], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbIntJson {
    pub atoms: Vec<(i64, f64)>,
}

impl TryFrom<ProbCircleJson> for ProbCircle {
    type Error = Error;
    fn try_from(js: ProbCircleJson) -> Result<Self> {
        ProbCircle::new(js.atoms)
    }
}

impl From<&ProbCircle> for ProbCircleJson {
    fn from(m: &ProbCircle) -> Self {
        Self { atoms: m.atoms.clone() }
    }
}

impl TryFrom<ProbIntJson> for ProbInt {
    type Error = Error;
    fn try_from(js: ProbIntJson) -> Result<Self> {
        ProbInt::new(js.atoms)
    }
}

impl From<&ProbInt> for ProbIntJson {
    fn from(m: &ProbInt) -> Self {
        Self { atoms: m.iter().collect() }
    }
}

/// Quantile representation: atom values with their cumulative masses,
/// `value[i]` on `(cum[i-1], cum[i]]`, last cumulative mass forced to 1.
struct Quantile {
    values: Vec<f64>,
    cum: Vec<f64>,
}

impl Quantile {
    fn from_atoms(atoms: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut values = Vec::new();
        let mut cum = Vec::new();
        let mut acc = 0.0;
        for (x, w) in atoms {
            acc += w;
            values.push(x);
            cum.push(acc);
        }
        // absorb the (≤ 1e-9) mass defect so both quantiles end at t = 1
        if let Some(last) = cum.last_mut() {
            *last = 1.0;
        }
        Self { values, cum }
    }
}

/// `∫_0^1 (F⁻¹(t) - G⁻¹(t + s))² dt`, with the circle quantiles extended
/// by `G⁻¹(t + 1) = G⁻¹(t) + 2π`.
fn shifted_quantile_cost(f: &Quantile, g: &Quantile, s: f64) -> f64 {
    let period = s.floor();
    let r = s - period;
    let mut lift = TWO_PI * period;
    // first atom of G whose interval contains r (left-continuous quantile)
    let mut j = g.cum.partition_point(|&c| c <= r);
    if j == g.cum.len() {
        j = 0;
        lift += TWO_PI;
    }
    let mut base = -r; // breakpoint of G atom j sits at g.cum[j] + base in t
    let mut i = 0;
    let mut t = 0.0;
    let mut cost = 0.0;
    while i < f.cum.len() {
        let f_end = f.cum[i];
        let g_end = g.cum[j] + base;
        let end = f_end.min(g_end);
        let diff = f.values[i] - (g.values[j] + lift);
        if end > t {
            cost += (end - t) * diff * diff;
            t = end;
        }
        if f_end <= g_end {
            i += 1;
        }
        if g_end <= f_end {
            j += 1;
            if j == g.cum.len() {
                j = 0;
                base += 1.0;
                lift += TWO_PI;
            }
        }
    }
    cost
}

/// Wasserstein-2 distance on the circle with the arc metric.
///
/// The transport cost equals the minimum over the cut parameter `s` of
/// [`shifted_quantile_cost`]. For atomic measures that function is convex
/// and piecewise linear in `s`, with kinks only at `s = B_j - A_i + p` where
/// `A_i`, `B_j` are cumulative masses of the two measures and `p` an integer.
/// A golden-section search brackets the minimum, then every breakpoint left
/// in the bracket is evaluated, so the result is exact up to round-off.
pub fn w2_circle(mu: &ProbCircle, nu: &ProbCircle) -> f64 {
    let f = Quantile::from_atoms(mu.atoms.iter().copied());
    let g = Quantile::from_atoms(nu.atoms.iter().copied());
    w2_circle_quantiles(&f, &g).max(0.0).sqrt()
}

fn w2_circle_quantiles(f: &Quantile, g: &Quantile) -> f64 {
    const SPAN: f64 = 2.0;
    const BRACKET: f64 = 1e-10;
    let cost = |s: f64| shifted_quantile_cost(f, g, s);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (-SPAN, SPAN);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    while hi - lo > BRACKET {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = cost(x2);
        }
    }
    let (lo, hi) = (lo - BRACKET, hi + BRACKET);
    let mut best = f1.min(f2).min(cost(lo)).min(cost(hi));
    // breakpoints s = b - a + p inside [lo, hi]
    for &a in &f.cum {
        for p in -3i32..=3 {
            let shift = a - p as f64;
            let from = g.cum.partition_point(|&b| b < lo + shift);
            for &b in g.cum[from..].iter().take_while(|&&b| b <= hi + shift) {
                best = best.min(cost(b - shift));
            }
        }
    }
    // s = p itself is a breakpoint of every pair of measures
    for p in -2i32..=2 {
        let s = p as f64;
        if (lo..=hi).contains(&s) {
            best = best.min(cost(s));
        }
    }
    best
}

/// Wasserstein-2 distance on the integers with `d(m, n) = |m - n|`, via the
/// monotone (quantile) coupling.
pub fn w2_integers(mu: &ProbInt, nu: &ProbInt) -> f64 {
    let f = Quantile::from_atoms(mu.iter().map(|(k, w)| (k as f64, w)));
    let g = Quantile::from_atoms(nu.iter().map(|(k, w)| (k as f64, w)));
    let (mut i, mut j) = (0, 0);
    let mut t = 0.0;
    let mut cost = 0.0;
    while i < f.cum.len() && j < g.cum.len() {
        let end = f.cum[i].min(g.cum[j]);
        let diff = f.values[i] - g.values[j];
        if end > t {
            cost += (end - t) * diff * diff;
            t = end;
        }
        if f.cum[i] <= end {
            i += 1;
        }
        if g.cum[j] <= end {
            j += 1;
        }
    }
    cost.max(0.0).sqrt()
}

/// `μ[2] = Σ w_j d(θ_j, 0)²`.
pub fn second_moment_circle(mu: &ProbCircle) -> f64 {
    mu.atoms.iter().map(|&(t, w)| w * arc_distance(t, 0.0).powi(2)).sum()
}

/// `ν[2] = Σ k² ν({k})`.
pub fn second_moment_int(nu: &ProbInt) -> f64 {
    nu.iter().map(|(k, w)| w * (k as f64).powi(2)).sum()
}

/// Error `√μ[2]` of the convolution approximator `μ * Φ`.
pub fn smearing_error_phase(mu: &ProbCircle) -> f64 {
    second_moment_circle(mu).sqrt()
}

/// Error `√ν[2]` of the convolution approximator `ν * N`.
pub fn smearing_error_number(nu: &ProbInt) -> f64 {
    second_moment_int(nu).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn point_masses() {
        for &(a, b) in &[(0.0, 1.0), (0.3, 6.0), (PI, 0.0), (5.5, 0.5)] {
            let d = w2_circle(&ProbCircle::point(a), &ProbCircle::point(b));
            assert!((d - arc_distance(a, b)).abs() < 1e-12, "{a} {b} {d}");
        }
        assert_eq!(w2_integers(&ProbInt::point(0), &ProbInt::point(3)), 3.0);
    }

    #[test]
    fn antipodal_pair_against_quarter_point() {
        let mu = ProbCircle::new([(0.0, 0.5), (PI, 0.5)]).unwrap();
        let d = w2_circle(&mu, &ProbCircle::point(PI / 2.0));
        assert!((d - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_grid_against_point() {
        let d = w2_circle(&ProbCircle::uniform_grid(1024), &ProbCircle::point(0.0));
        assert!((d - PI / 3f64.sqrt()).abs() < 1e-2);
        let m2 = second_moment_circle(&ProbCircle::uniform_grid(1024));
        assert!((m2 - PI * PI / 3.0).abs() < 1e-2);
        assert!((d * d - m2).abs() < 1e-10);
    }

    #[test]
    fn integer_examples() {
        let nu = ProbInt::new([(0, 0.25), (2, 0.5), (5, 0.25)]).unwrap();
        assert_eq!(w2_integers(&nu, &nu), 0.0);
        let mu = ProbInt::new([(0, 0.5), (2, 0.5)]).unwrap();
        assert!((w2_integers(&mu, &ProbInt::point(1)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn moments_and_smearing_errors() {
        assert!((second_moment_circle(&ProbCircle::point(PI)) - PI * PI).abs() < 1e-14);
        assert_eq!(second_moment_int(&ProbInt::point(-4)), 16.0);
        assert_eq!(smearing_error_phase(&ProbCircle::point(0.0)), 0.0);
        assert!((smearing_error_phase(&ProbCircle::point(PI)) - PI).abs() < 1e-15);
        assert!((smearing_error_phase(&ProbCircle::uniform_grid(1024)) - PI / 3f64.sqrt()).abs() < 1e-2);
        assert_eq!(smearing_error_number(&ProbInt::point(3)), 3.0);
    }

    #[test]
    fn measures_validate_and_merge() {
        assert!(ProbCircle::new([(0.0, 0.5)]).is_err());
        assert!(ProbCircle::new([(0.0, 1.5), (1.0, -0.5)]).is_err());
        let m = ProbCircle::new([(0.0, 0.25), (TWO_PI, 0.25), (1.0, 0.5), (2.0, 0.0)]).unwrap();
        assert_eq!(m.atoms(), &[(0.0, 0.5), (1.0, 0.5)]);
        let n = ProbInt::new([(1, 0.5), (1, 0.5)]).unwrap();
        assert_eq!(n, ProbInt::point(1));
    }

    #[test]
    fn json_roundtrip() {
        let m = ProbCircle::new([(0.5, 0.25), (3.0, 0.75)]).unwrap();
        let js = serde_json::to_string(&ProbCircleJson::from(&m)).unwrap();
        let back: ProbCircle = serde_json::from_str::<ProbCircleJson>(&js).unwrap().try_into().unwrap();
        assert_eq!(back, m);
        let bad: ProbIntJson = serde_json::from_str(r#"{"atoms": [[0, 0.5], [1, 0.4]]}"#).unwrap();
        assert!(ProbInt::try_from(bad).is_err());
    }
}
