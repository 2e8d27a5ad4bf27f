//! Brute-force transport oracles shared by the integration tests.
#![allow(dead_code)]

use numphase::angle::arc_distance;

/// Heap's algorithm over all permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    out.push(a.clone());
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Exact W2 between two equal-weight atomic circle measures of the same size:
/// the optimal plan of a uniform assignment problem is a permutation.
pub fn w2_circle_assignment(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let best = permutations(n)
        .iter()
        .map(|p| (0..n).map(|i| arc_distance(xs[i], ys[p[i]]).powi(2)).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    (best / n as f64).sqrt()
}

/// Exact W2 between two atomic measures on the integers by enumerating the
/// vertices of the transport polytope `{γ ≥ 0 : γ1 = a, γᵀ1 = b}`.
///
/// A vertex is the unique solution of the marginal equations supported on a
/// set of at most `n + m - 1` cells whose bipartite graph is a forest.
pub fn w2_int_vertices(a: &[(i64, f64)], b: &[(i64, f64)]) -> f64 {
    let (n, m) = (a.len(), b.len());
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let rank = n + m - 1;
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << cells.len()) {
        if mask.count_ones() as usize != rank {
            continue;
        }
        let chosen: Vec<(usize, usize)> =
            cells.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, c)| *c).collect();
        if let Some(plan) = solve_tree(&chosen, a, b) {
            if plan.iter().all(|&x| x >= -1e-12) {
                let cost: f64 = chosen
                    .iter()
                    .zip(&plan)
                    .map(|(&(i, j), &g)| g * ((a[i].0 - b[j].0) as f64).powi(2))
                    .sum();
                best = best.min(cost);
            }
        }
    }
    best.max(0.0).sqrt()
}

/// Solves the marginal equations on a spanning-tree support by peeling leaves.
fn solve_tree(cells: &[(usize, usize)], a: &[(i64, f64)], b: &[(i64, f64)]) -> Option<Vec<f64>> {
    let (n, m) = (a.len(), b.len());
    let mut row_left: Vec<f64> = a.iter().map(|x| x.1).collect();
    let mut col_left: Vec<f64> = b.iter().map(|x| x.1).collect();
    let mut value = vec![f64::NAN; cells.len()];
    let mut open: Vec<bool> = vec![true; cells.len()];
    for _ in 0..cells.len() {
        let mut progressed = false;
        for r in 0..n + m {
            let incident: Vec<usize> = (0..cells.len())
                .filter(|&k| open[k] && if r < n { cells[k].0 == r } else { cells[k].1 == r - n })
                .collect();
            if incident.len() == 1 {
                let k = incident[0];
                let (i, j) = cells[k];
                let v = if r < n { row_left[i] } else { col_left[j] };
                value[k] = v;
                row_left[i] -= v;
                col_left[j] -= v;
                open[k] = false;
                progressed = true;
                break;
            }
        }
        if !progressed {
            return None;
        }
    }
    let residual = row_left.iter().chain(&col_left).map(|x| x.abs()).fold(0.0, f64::max);
    (residual < 1e-12).then_some(value)
}
