use alloc::vec::Vec;

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch–Butland
/// slopes, as in PCHIP). Monotone data stays monotone between nodes and no
/// overshoot appears next to a kink.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// `xs` must be strictly increasing with at least two entries.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n, "need at least two matching nodes");
        debug_assert!(xs.windows(2).all(|w| w[0] < w[1]));

        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut d = alloc::vec![0.0; n];

        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
            return Self { xs, ys, slopes: d };
        }

        for k in 1..n - 1 {
            let (d0, d1) = (delta[k - 1], delta[k]);
            if d0 == 0.0 || d1 == 0.0 || d0.signum() != d1.signum() {
                d[k] = 0.0;
            } else {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                d[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
            }
        }
        d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        Self { xs, ys, slopes: d }
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    /// Slope of the first and last data segments.
    pub fn edge_secants(&self) -> (f64, f64) {
        let n = self.xs.len();
        (
            (self.ys[1] - self.ys[0]) / (self.xs[1] - self.xs[0]),
            (self.ys[n - 1] - self.ys[n - 2]) / (self.xs[n - 1] - self.xs[n - 2]),
        )
    }

    /// Evaluates the interpolant; arguments outside the node range are
    /// clamped to the end values.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.xs.partition_point(|&xi| xi <= x) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

// One-sided three-point end slope with the usual shape-preserving limits.
fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() || d == 0.0 {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn reproduces_nodes_and_lines() {
        let xs = vec![0.0, 0.5, 1.5, 2.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let f = MonotoneCubic::new(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(f.eval(*x), *y);
        }
        for i in 0..=40 {
            let x = i as f64 * 0.1;
            assert!((f.eval(x) - (3.0 * x - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn no_overshoot_at_kink() {
        let xs: Vec<f64> = (0..21).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x - 1.0_f64).max(0.0)).collect();
        let f = MonotoneCubic::new(xs, ys);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=2000 {
            let x = i as f64 * 1e-3;
            let v = f.eval(x);
            assert!(v >= -1e-15);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn accurate_on_smooth_function() {
        let xs: Vec<f64> = (0..=200).map(|i| -3.0 + i as f64 * 0.03).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| libm::exp(x)).collect();
        let f = MonotoneCubic::new(xs, ys);
        for i in 0..1000 {
            let x = -2.9 + i as f64 * 0.0057;
            assert!((f.eval(x) - libm::exp(x)).abs() < 1e-5 * libm::exp(x));
        }
    }
}
