//! Graded one-dimensional node sets.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

/// Nodes on `[lo, hi]` equidistributing the density
/// `g(y) = 1 + peak · Σₐ exp(−½((y − a)/width)²)`.
///
/// Every anchor inside `(lo, hi)` becomes an exact node; the endpoints are
/// always nodes. Returns `n_intervals + 1` strictly increasing values, or
/// more when there are more anchors than intervals.
pub fn graded_nodes(lo: f64, hi: f64, anchors: &[f64], width: f64, peak: f64, n_intervals: usize) -> Vec<f64> {
    let weighted: Vec<(f64, f64)> = anchors.iter().map(|&a| (a, peak)).collect();
    weighted_graded_nodes(lo, hi, &weighted, width, n_intervals)
}

/// As [`graded_nodes`] with a separate peak per anchor, given as
/// `(position, peak)` pairs.
pub fn weighted_graded_nodes(lo: f64, hi: f64, anchors: &[(f64, f64)], width: f64, n_intervals: usize) -> Vec<f64> {
    debug_assert!(lo < hi && width > 0.0 && anchors.iter().all(|a| a.1 >= 0.0));
    let scale = width * libm::sqrt(PI / 2.0);
    let cumulative = |y: f64| -> f64 {
        let bumps: f64 = anchors
            .iter()
            .map(|&(a, peak)| {
                peak * (libm::erf((y - a) / width * FRAC_1_SQRT_2) - libm::erf((lo - a) / width * FRAC_1_SQRT_2))
            })
            .sum();
        (y - lo) + scale * bumps
    };

    let mut cuts: Vec<f64> = Vec::with_capacity(anchors.len() + 2);
    cuts.push(lo);
    let mut inner: Vec<f64> = anchors.iter().map(|a| a.0).filter(|&a| a > lo && a < hi).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    cuts.extend(inner);
    cuts.push(hi);

    let g: Vec<f64> = cuts.iter().map(|&c| cumulative(c)).collect();
    let total = g[g.len() - 1];
    let segments = cuts.len() - 1;
    let n = n_intervals.max(segments);

    // Largest-remainder allocation of intervals to segments, at least one each.
    let shares: Vec<f64> = (0..segments).map(|s| (g[s + 1] - g[s]) / total * n as f64).collect();
    let mut counts: Vec<usize> = shares.iter().map(|&x| (libm::floor(x) as usize).max(1)).collect();
    let mut assigned: usize = counts.iter().sum();
    while assigned < n {
        let best = (0..segments)
            .max_by(|&a, &b| {
                let ra = shares[a] - counts[a] as f64;
                let rb = shares[b] - counts[b] as f64;
                ra.total_cmp(&rb).then(b.cmp(&a))
            })
            .unwrap();
        counts[best] += 1;
        assigned += 1;
    }
    while assigned > n {
        let best = (0..segments)
            .filter(|&s| counts[s] > 1)
            .min_by(|&a, &b| {
                let ra = shares[a] - counts[a] as f64;
                let rb = shares[b] - counts[b] as f64;
                ra.total_cmp(&rb).then(a.cmp(&b))
            })
            .unwrap();
        counts[best] -= 1;
        assigned -= 1;
    }

    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(lo);
    for s in 0..segments {
        let (a, b) = (cuts[s], cuts[s + 1]);
        let (ga, gb) = (g[s], g[s + 1]);
        for j in 1..counts[s] {
            let target = ga + (gb - ga) * j as f64 / counts[s] as f64;
            // G is strictly increasing; bisection is enough.
            let (mut l, mut h) = (a, b);
            for _ in 0..200 {
                let m = 0.5 * (l + h);
                if cumulative(m) < target {
                    l = m;
                } else {
                    h = m;
                }
                if h - l <= 1e-15 * m.abs().max(1.0) {
                    break;
                }
            }
            nodes.push(0.5 * (l + h));
        }
        nodes.push(b);
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_anchors_and_endpoints() {
        let nodes = graded_nodes(-3.0, 5.0, &[0.0, 0.5, 0.8, 1.0], 0.2, 3.0, 128);
        assert_eq!(nodes.len(), 129);
        assert_eq!(nodes[0], -3.0);
        assert_eq!(nodes[128], 5.0);
        for a in [0.0, 0.5, 0.8, 1.0] {
            assert!(nodes.contains(&a), "missing {a}");
        }
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn refines_near_anchor() {
        let nodes = graded_nodes(-4.0, 4.0, &[0.0], 0.3, 3.0, 400);
        let h: alloc::vec::Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        let near = h[nodes.iter().position(|&x| x == 0.0).unwrap()];
        let far = h[0];
        assert!(far / near > 3.0 && far / near < 4.5, "ratio {}", far / near);
        let max_ratio = h.windows(2).map(|w| (w[0] / w[1]).max(w[1] / w[0])).fold(0.0, f64::max);
        assert!(max_ratio < 1.2);
    }

    #[test]
    fn uniform_without_peak() {
        let nodes = graded_nodes(0.0, 1.0, &[], 1.0, 0.0, 10);
        for (i, x) in nodes.iter().enumerate() {
            assert!((x - i as f64 / 10.0).abs() < 1e-13);
        }
    }
}
