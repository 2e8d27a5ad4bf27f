use serde::{Deserialize, Serialize};

use crate::angle::{wrap_2pi, TWO_PI};
use crate::error::{Error, Result};

/// Finite union of half-open arcs `[start, end)` of the circle.
///
/// The canonical form is sorted, pairwise disjoint and non-adjacent with
/// `0 <= start < end <= 2π`. Input arcs may start anywhere; arcs that run past
/// `2π` are split there.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSet {
    arcs: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn empty() -> Self {
        Self { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        Self { arcs: vec![(0.0, TWO_PI)] }
    }

    pub fn arc(start: f64, end: f64) -> Result<Self> {
        Self::new([(start, end)])
    }

    /// Canonicalizes a list of `(start, end)` arcs given in radians.
    ///
    /// Each arc must satisfy `start < end`; an arc of length `>= 2π` covers
    /// the whole circle.
    pub fn new(arcs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pieces = Vec::new();
        for (a, b) in arcs {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite arc endpoint in ({a}, {b})")));
            }
            if a >= b {
                return Err(Error::InvalidInput(format!("arc start {a} must be below its end {b}")));
            }
            if b - a >= TWO_PI {
                return Ok(Self::full());
            }
            let start = if (0.0..TWO_PI).contains(&a) { a } else { wrap_2pi(a) };
            let end = if start == a { b } else { start + (b - a) };
            if end > TWO_PI {
                pieces.push((start, TWO_PI));
                let rest = end - TWO_PI;
                if rest > 0.0 {
                    pieces.push((0.0, rest));
                }
            } else {
                pieces.push((start, end));
            }
        }
        Ok(Self::from_pieces(pieces))
    }

    fn from_pieces(mut pieces: Vec<(f64, f64)>) -> Self {
        pieces.retain(|(a, b)| b > a);
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut arcs: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match arcs.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => arcs.push((a, b)),
            }
        }
        Self { arcs }
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs == [(0.0, TWO_PI)]
    }

    /// Normalized measure `ℓ(X) ∈ [0, 1]`.
    pub fn measure(&self) -> f64 {
        if self.is_full() {
            return 1.0;
        }
        self.arcs.iter().map(|(a, b)| b - a).sum::<f64>() / TWO_PI
    }

    /// `T \ X`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(a, b) in &self.arcs {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < TWO_PI {
            out.push((cursor, TWO_PI));
        }
        Self { arcs: out }
    }

    /// `X ∔ θ`: every point moved by `θ` modulo `2π`.
    pub fn translate(&self, theta: f64) -> Self {
        if self.is_full() || self.is_empty() {
            return self.clone();
        }
        let shift = wrap_2pi(theta);
        let mut pieces = Vec::with_capacity(self.arcs.len() + 1);
        for &(a, b) in &self.arcs {
            let (s, e) = (a + shift, b + shift);
            if s >= TWO_PI {
                pieces.push((s - TWO_PI, e - TWO_PI));
            } else if e > TWO_PI {
                pieces.push((s, TWO_PI));
                pieces.push((0.0, e - TWO_PI));
            } else {
                pieces.push((s, e));
            }
        }
        Self::from_pieces(pieces.into_iter().map(|(a, b)| (a.max(0.0), b.min(TWO_PI))).collect())
    }

    /// Union of two arc sets.
    pub fn union(&self, other: &Self) -> Self {
        if self.is_full() || other.is_full() {
            return Self::full();
        }
        Self::from_pieces(self.arcs.iter().chain(&other.arcs).copied().collect())
    }

    pub fn contains(&self, theta: f64) -> bool {
        let t = wrap_2pi(theta);
        self.arcs.iter().any(|&(a, b)| a <= t && t < b)
    }
}

/// JSON form `{"arcs": [[a, b], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcSetJson {
    pub arcs: Vec<(f64, f64)>,
}

impl TryFrom<ArcSetJson> for ArcSet {
    type Error = Error;
    fn try_from(js: ArcSetJson) -> Result<Self> {
        ArcSet::new(js.arcs)
    }
}

impl From<&ArcSet> for ArcSetJson {
    fn from(x: &ArcSet) -> Self {
        Self { arcs: x.arcs.clone() }
    }
}

/// Finite sorted set of integer basis labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexSet {
    indices: Vec<i64>,
}

impl IndexSet {
    pub fn new(indices: impl IntoIterator<Item = i64>) -> Self {
        let mut v: Vec<i64> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self { indices: v }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn max(&self) -> Option<i64> {
        self.indices.last().copied()
    }

    /// `Y + k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { indices: self.indices.iter().map(|i| i + k).collect() }
    }

    /// `-Y`.
    pub fn reflect(&self) -> Self {
        Self::new(self.indices.iter().map(|i| -i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrapping_arcs_are_split() {
        let x = ArcSet::arc(1.5 * PI, 2.5 * PI).unwrap();
        assert_eq!(x.arcs().len(), 2);
        assert_eq!(x.arcs()[0].0, 0.0);
        assert!((x.arcs()[0].1 - 0.5 * PI).abs() < 1e-15);
        assert!((x.measure() - 0.5).abs() < 1e-15);

        let y = ArcSet::arc(-0.5 * PI, 0.5 * PI).unwrap();
        assert!((y.measure() - 0.5).abs() < 1e-15);
        assert!(y.contains(0.0) && y.contains(-0.1) && !y.contains(PI));
    }

    #[test]
    fn canonicalization_merges_and_is_idempotent() {
        let x = ArcSet::new([(0.0, 1.0), (0.5, 2.0), (2.0, 3.0), (4.0, 5.0)]).unwrap();
        assert_eq!(x.arcs(), &[(0.0, 3.0), (4.0, 5.0)]);
        let again = ArcSet::new(x.arcs().to_vec()).unwrap();
        assert_eq!(again, x);
    }

    #[test]
    fn malformed_arcs_are_rejected() {
        assert!(ArcSet::arc(2.0, 1.0).is_err());
        assert!(ArcSet::arc(1.0, 1.0).is_err());
        assert!(ArcSet::arc(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn full_circle_and_complement() {
        let full = ArcSet::arc(0.0, TWO_PI).unwrap();
        assert!(full.is_full());
        assert_eq!(full.measure(), 1.0);
        assert!(full.complement().is_empty());
        let x = ArcSet::new([(1.0, 2.0), (3.0, 4.0)]).unwrap();
        let c = x.complement();
        assert!((x.measure() + c.measure() - 1.0).abs() < 1e-15);
        assert!(x.union(&c).arcs() == [(0.0, TWO_PI)]);
    }

    #[test]
    fn translation_preserves_measure() {
        let x = ArcSet::new([(0.2, 1.0), (5.0, 6.0)]).unwrap();
        for k in 0..20 {
            let t = x.translate(k as f64 * 0.77);
            assert!((t.measure() - x.measure()).abs() < 1e-14);
        }
        let half = ArcSet::arc(0.0, PI).unwrap().translate(PI);
        assert_eq!(half.arcs(), &[(PI, TWO_PI)]);
    }

    #[test]
    fn index_sets_sort_and_dedupe() {
        let y = IndexSet::new([3, 1, 3, 0]);
        assert_eq!(y.indices(), &[0, 1, 3]);
        assert_eq!(y.shift(2).indices(), &[2, 3, 5]);
        assert_eq!(y.reflect().indices(), &[-3, -1, 0]);
    }
}
