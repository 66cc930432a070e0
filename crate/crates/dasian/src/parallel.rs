//! Monte Carlo on the current rayon pool. Blocks are evaluated in any order
//! and merged in block order, so the result does not depend on the number
//! of worker threads.

use dasian_core::market::{MarketParams, StepDrift};
use dasian_core::math::Moments;
use dasian_core::mc::{McEstimate, PathConfig, PathSimulator};
use dasian_core::Result;
use rayon::prelude::*;

pub fn estimate<F>(sim: &PathSimulator, f: F) -> McEstimate
where
    F: Fn(f64) -> f64 + Sync,
{
    let blocks: Vec<Moments> = (0..sim.n_blocks()).into_par_iter().map(|b| sim.block_moments(b, &f)).collect();
    sim.finish(blocks)
}

/// Parallel `E (X_T − K)₊`.
pub fn price_mc(t: f64, x: f64, drift: &StepDrift, params: &MarketParams, cfg: PathConfig) -> Result<McEstimate> {
    let sim = PathSimulator::new(t, x, drift, params.sigma, params.maturity, cfg)?;
    let k = params.strike;
    Ok(estimate(&sim, |y| (y - k).max(0.0)))
}

/// Parallel `E X_T − x`.
pub fn martingale_residual(
    t: f64,
    x: f64,
    drift: &StepDrift,
    sigma: f64,
    horizon: f64,
    cfg: PathConfig,
) -> Result<McEstimate> {
    let sim = PathSimulator::new(t, x, drift, sigma, horizon, cfg)?;
    Ok(estimate(&sim, |y| y - x))
}
