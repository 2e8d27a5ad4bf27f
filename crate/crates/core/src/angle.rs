//! Angle conventions: values are stored in `[0, 2π)`; distances and second
//! moments use the representative in `(-π, π]`.

use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_2pi(x: f64) -> f64 {
    let r = x.rem_euclid(TWO_PI);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Reduces an angle into `(-π, π]`.
pub fn wrap_pm_pi(x: f64) -> f64 {
    let r = wrap_2pi(x);
    if r > PI {
        r - TWO_PI
    } else {
        r
    }
}

/// Arc distance `min_n |a - b - 2πn|`.
pub fn arc_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % TWO_PI;
    d.min(TWO_PI - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping() {
        assert_eq!(wrap_2pi(TWO_PI), 0.0);
        assert_eq!(wrap_2pi(-1e-300), 0.0);
        assert!((wrap_2pi(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert_eq!(wrap_pm_pi(PI), PI);
        assert!((wrap_pm_pi(1.5 * PI) + 0.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn distance_is_symmetric_and_bounded() {
        assert!((arc_distance(0.1, TWO_PI - 0.1) - 0.2).abs() < 1e-15);
        assert!((arc_distance(0.0, PI) - PI).abs() < 1e-15);
        for i in 0..50 {
            let a = i as f64 * 0.37;
            let b = i as f64 * 1.91;
            assert_eq!(arc_distance(a, b), arc_distance(b, a));
            assert!(arc_distance(a, b) <= PI);
        }
    }
}
