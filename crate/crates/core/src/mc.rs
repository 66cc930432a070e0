//! Monte Carlo on `dX = σ (X − b) dW`.
//!
//! Between sampling dates `b` is constant, so `X − β` is geometric Brownian
//! and the exact scheme needs one lognormal factor per interval. Paths are
//! grouped into fixed blocks whose moments are merged in block order; any
//! executor that evaluates the blocks (serially here, on a thread pool in
//! the companion crate) produces identical bits.

use alloc::vec::Vec;

use crate::error::{ensure, Result};
use crate::market::{check_time, MarketParams, StepDrift};
use crate::math::Moments;
use crate::rng::PathRng;

/// Paths per reduction block.
pub const BLOCK_SIZE: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    ExactPiecewise,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    pub n_paths: u64,
    pub seed: u64,
    pub scheme: Scheme,
    pub euler_steps_per_interval: u32,
    /// Pairs path `2i + 1` with the negated draws of path `2i`.
    pub antithetic: bool,
}

impl PathConfig {
    pub fn new(n_paths: u64, seed: u64) -> Self {
        Self { n_paths, seed, scheme: Scheme::ExactPiecewise, euler_steps_per_interval: 1, antithetic: false }
    }

    pub fn euler(mut self, steps: u32) -> Self {
        self.scheme = Scheme::Euler;
        self.euler_steps_per_interval = steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.n_paths >= 1, "n_paths", "must be at least 1")?;
        ensure(self.euler_steps_per_interval >= 1, "euler_steps_per_interval", "must be at least 1")?;
        ensure(!self.antithetic || self.n_paths.is_multiple_of(2), "n_paths", "must be even with antithetic pairing")
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: u64,
}

/// Terminal-value sampler for one `(t, x)` start point.
#[derive(Debug, Clone)]
pub struct PathSimulator {
    x: f64,
    sigma: f64,
    intervals: Vec<(f64, f64, f64)>,
    cfg: PathConfig,
}

impl PathSimulator {
    pub fn new(t: f64, x: f64, drift: &StepDrift, sigma: f64, horizon: f64, cfg: PathConfig) -> Result<Self> {
        cfg.validate()?;
        check_time(t, horizon)?;
        ensure(sigma.is_finite() && sigma >= 0.0, "sigma", "must be nonnegative")?;
        ensure(x.is_finite(), "x", "must be finite")?;
        ensure(drift.horizon() == horizon, "T", "drift and market horizons differ")?;
        Ok(Self { x, sigma, intervals: drift.intervals_after(t), cfg })
    }

    pub fn config(&self) -> &PathConfig {
        &self.cfg
    }

    /// X_T on path `path`.
    pub fn terminal(&self, path: u64) -> f64 {
        let (stream, sign) =
            if self.cfg.antithetic { (path / 2, if path.is_multiple_of(2) { 1.0 } else { -1.0 }) } else { (path, 1.0) };
        let rng = PathRng::new(self.cfg.seed, stream);
        let mut x = self.x;
        if self.sigma == 0.0 {
            return x;
        }
        for (idx, &(a, b, beta)) in self.intervals.iter().enumerate() {
            let dt = b - a;
            let idx = idx as u32;
            match self.cfg.scheme {
                Scheme::ExactPiecewise => {
                    let s = self.sigma * libm::sqrt(dt);
                    let z = sign * rng.normal_at(idx, 0);
                    x = beta + (x - beta) * libm::exp(s * z - 0.5 * s * s);
                }
                Scheme::Euler => {
                    // Substep increments are a Brownian bridge pinned to the
                    // same interval increment the exact scheme uses.
                    let n = self.cfg.euler_steps_per_interval;
                    let h = dt / n as f64;
                    let mut remaining_w = libm::sqrt(dt) * sign * rng.normal_at(idx, 0);
                    let mut remaining_t = dt;
                    for j in 0..n {
                        let dw = if j + 1 == n {
                            remaining_w
                        } else {
                            let z = sign * rng.normal_at(idx, j + 1);
                            remaining_w * h / remaining_t + libm::sqrt(h * (remaining_t - h) / remaining_t) * z
                        };
                        remaining_w -= dw;
                        remaining_t -= h;
                        x += (x - beta) * self.sigma * dw;
                    }
                }
            }
        }
        x
    }

    pub fn n_blocks(&self) -> u64 {
        self.cfg.n_paths.div_ceil(BLOCK_SIZE)
    }

    /// Moments of `f(X_T)` over block `block`. Antithetic pairs are averaged
    /// before they enter the moments.
    pub fn block_moments<F: Fn(f64) -> f64>(&self, block: u64, f: &F) -> Moments {
        let start = block * BLOCK_SIZE;
        let end = (start + BLOCK_SIZE).min(self.cfg.n_paths);
        let mut m = Moments::default();
        if self.cfg.antithetic {
            let mut p = start;
            while p < end {
                m.push(0.5 * (f(self.terminal(p)) + f(self.terminal(p + 1))));
                p += 2;
            }
        } else {
            for p in start..end {
                m.push(f(self.terminal(p)));
            }
        }
        m
    }

    /// Merges per-block moments given in block order.
    pub fn finish<I: IntoIterator<Item = Moments>>(&self, blocks: I) -> McEstimate {
        let mut total = Moments::default();
        for b in blocks {
            total.merge(&b);
        }
        McEstimate { mean: total.mean, std_error: total.std_error(), n_paths: self.cfg.n_paths }
    }

    /// Serial estimate of `E f(X_T)`.
    pub fn estimate<F: Fn(f64) -> f64>(&self, f: F) -> McEstimate {
        self.finish((0..self.n_blocks()).map(|b| self.block_moments(b, &f)))
    }
}

/// Terminal samples `X_T(t, x)`, one per path.
pub fn simulate_terminal(
    t: f64,
    x: f64,
    drift: &StepDrift,
    sigma: f64,
    horizon: f64,
    cfg: PathConfig,
) -> Result<Vec<f64>> {
    let sim = PathSimulator::new(t, x, drift, sigma, horizon, cfg)?;
    Ok((0..cfg.n_paths).map(|p| sim.terminal(p)).collect())
}

/// Estimate of `u(t, x) = E (X_T − K)₊`.
pub fn price_mc(t: f64, x: f64, drift: &StepDrift, params: &MarketParams, cfg: PathConfig) -> Result<McEstimate> {
    let sim = PathSimulator::new(t, x, drift, params.sigma, params.maturity, cfg)?;
    let k = params.strike;
    Ok(sim.estimate(|y| (y - k).max(0.0)))
}

/// Estimate of `E X_T − x`, which vanishes for the driftless SDE.
pub fn martingale_residual(
    t: f64,
    x: f64,
    drift: &StepDrift,
    sigma: f64,
    horizon: f64,
    cfg: PathConfig,
) -> Result<McEstimate> {
    let sim = PathSimulator::new(t, x, drift, sigma, horizon, cfg)?;
    Ok(sim.estimate(|y| y - x))
}
