use alloc::vec::Vec;
use core::f64::consts::PI;

/// Gauss–Hermite rule normalized for expectations over a standard normal:
/// `E f(Z) ≈ Σ wᵢ f(zᵢ)` with `Σ wᵢ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds the `order`-point rule. Roots of the physicists' Hermite
    /// polynomial are found by Newton iteration on the orthonormal
    /// recurrence, then rescaled to the standard normal.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss–Hermite order must be positive");
        let n = order;
        let mut x = alloc::vec![0.0; n];
        let mut w = alloc::vec![0.0; n];
        let pim4 = libm::pow(PI, -0.25);
        let nf = n as f64;
        let mut z = 0.0_f64;

        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => libm::sqrt(2.0 * nf + 1.0) - 1.855_75 * libm::pow(2.0 * nf + 1.0, -0.166_67),
                1 => z - 1.14 * libm::pow(nf, 0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * libm::sqrt(2.0 / (jf + 1.0)) * p2 - libm::sqrt(jf / (jf + 1.0)) * p3;
                }
                pp = libm::sqrt(2.0 * nf) * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        if n % 2 == 1 {
            x[n / 2] = 0.0;
        }

        let scale = libm::sqrt(PI);
        let mut nodes: Vec<f64> = x.iter().map(|&xi| xi * core::f64::consts::SQRT_2).collect();
        let mut weights: Vec<f64> = w.iter().map(|&wi| wi / scale).collect();
        nodes.reverse();
        weights.reverse();
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `E f(Z)` for `Z ~ N(0, 1)`.
    pub fn expect<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_standard_normal() {
        for order in [8, 16, 32, 64, 128] {
            let gh = GaussHermite::new(order);
            assert_eq!(gh.order(), order);
            assert!((gh.expect(|_| 1.0) - 1.0).abs() < 1e-13, "order {order}");
            assert!(gh.expect(|z| z).abs() < 1e-13);
            assert!((gh.expect(|z| z * z) - 1.0).abs() < 1e-12);
            assert!((gh.expect(|z| z.powi(4)) - 3.0).abs() < 1e-11);
            assert!((gh.expect(|z| z.powi(6)) - 15.0).abs() < 1e-10);
        }
    }

    #[test]
    fn lognormal_mean() {
        let gh = GaussHermite::new(32);
        let a: f64 = 0.7;
        let m = gh.expect(|z| libm::exp(a * z));
        assert!((m - libm::exp(0.5 * a * a)).abs() < 1e-13);
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let gh = GaussHermite::new(65);
        let z = gh.nodes();
        assert!(z.windows(2).all(|p| p[0] < p[1]));
        for i in 0..z.len() {
            assert!((z[i] + z[z.len() - 1 - i]).abs() < 1e-12);
        }
        assert_eq!(z[32], 0.0);
    }
}
