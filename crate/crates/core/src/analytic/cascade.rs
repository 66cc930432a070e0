use alloc::vec::Vec;

use super::gbm_call;
use crate::error::{Error, Result};
use crate::market::{MarketParams, StepDrift};
use crate::math::grid::graded_nodes;
use crate::math::{GaussHermite, MonotoneCubic};

/// Tabulation and quadrature settings for [`Cascade`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeConfig {
    pub nodes_per_stage: usize,
    pub quad_order: usize,
    /// Lower table edge, in diffusion standard deviations over `[0, T]`.
    pub x_lo: f64,
    /// Upper table edge, same units.
    pub x_hi: f64,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        Self { nodes_per_stage: 512, quad_order: 64, x_lo: 8.0, x_hi: 8.0 }
    }
}

impl CascadeConfig {
    pub fn validate(&self) -> Result<()> {
        crate::error::ensure(self.quad_order >= 8, "quad_order", "must be at least 8")?;
        crate::error::ensure(self.nodes_per_stage >= 64, "nodes_per_stage", "must be at least 64")?;
        crate::error::ensure(
            self.x_lo.is_finite() && self.x_lo > 0.0 && self.x_hi.is_finite() && self.x_hi > 0.0,
            "x_lo/x_hi",
            "must be positive",
        )
    }
}

// Node refinement around strike and drift levels; the bump width is
// `WIDTH_FACTOR` diffusion scales over the remaining horizon.
const TABLE_PEAK: f64 = 12.0;
const WIDTH_FACTOR: f64 = 1.0;

#[derive(Debug, Clone)]
struct Stage {
    /// Start of the constant-drift interval this stage integrates over.
    start: f64,
    end: f64,
    level: f64,
    /// u(start, ·); `None` for the final interval, which is closed form.
    table: Option<MonotoneCubic>,
}

/// Backward recursion over the sampling intervals. On each interval the
/// shifted process `X − β` is geometric Brownian, so
/// `u(s, y) = E u(e, β + (y − β)·e^{σ√Δ Z − σ²Δ/2})`; the last interval is
/// closed form and earlier ones are tabulated on a graded node set.
#[derive(Debug, Clone)]
pub struct Cascade {
    params: MarketParams,
    cfg: CascadeConfig,
    rule: GaussHermite,
    stages: Vec<Stage>,
    lo: f64,
    hi: f64,
}

impl Cascade {
    pub fn build(drift: &StepDrift, params: &MarketParams, cfg: CascadeConfig) -> Result<Self> {
        cfg.validate()?;
        if params.strike == 0.0 {
            return Err(Error::ZeroStrike);
        }
        let horizon = params.maturity;
        let k = params.strike;
        let sigma = params.sigma;

        let mut anchors: Vec<f64> = drift.levels().to_vec();
        anchors.push(k);
        let a_min = anchors.iter().copied().fold(f64::INFINITY, f64::min);
        let a_max = anchors.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let reference = anchors.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
        let spread = |m: f64| libm::expm1(m * sigma * libm::sqrt(horizon));
        let lo = a_min - reference * spread(cfg.x_lo);
        let hi = a_max + reference * spread(cfg.x_hi);

        let rule = GaussHermite::new(cfg.quad_order);
        let intervals = drift.intervals_after(0.0);
        let mut stages: Vec<Stage> =
            intervals.iter().map(|&(start, end, level)| Stage { start, end, level, table: None }).collect();

        // Fill tables from the back; the last stage stays closed form.
        for j in (0..stages.len().saturating_sub(1)).rev() {
            let start = stages[j + 1].start;
            let width = (WIDTH_FACTOR * reference * sigma * libm::sqrt(horizon - start)).max(1e-12);
            let nodes = graded_nodes(lo, hi, &anchors, width, TABLE_PEAK, cfg.nodes_per_stage - 1);
            let next = &stages[j + 1];
            let values: Vec<f64> =
                nodes.iter().map(|&y| stage_value(next, stages.get(j + 2), &rule, params, y, next.start)).collect();
            stages[j + 1].table = Some(MonotoneCubic::new(nodes, values));
        }

        Ok(Self { params: *params, cfg, rule, stages, lo, hi })
    }

    pub fn config(&self) -> &CascadeConfig {
        &self.cfg
    }

    /// Range covered by every stage table.
    pub fn table_range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// u(t, x).
    pub fn price(&self, t: f64, x: f64) -> Result<f64> {
        self.params.check_time(t)?;
        let k = self.params.strike;
        if t == self.params.maturity || self.stages.is_empty() {
            return Ok((x - k).max(0.0));
        }
        let j = self.stages.iter().position(|s| t >= s.start && t < s.end).unwrap_or(self.stages.len() - 1);
        if j + 1 < self.stages.len() && !(self.lo..=self.hi).contains(&x) {
            return Err(Error::Extrapolation { x, lo: self.lo, hi: self.hi });
        }
        Ok(stage_value(&self.stages[j], self.stages.get(j + 1), &self.rule, &self.params, x, t))
    }
}

// u(t, y) for t inside `stage`, given the table (or payoff) at its end.
fn stage_value(stage: &Stage, next: Option<&Stage>, rule: &GaussHermite, params: &MarketParams, y: f64, t: f64) -> f64 {
    let beta = stage.level;
    let dt = stage.end - t;
    let k = params.strike;
    match next {
        None => gbm_call(y - beta, k - beta, params.sigma, dt).unwrap_or(0.0),
        Some(next) => {
            let table = next.table.as_ref().expect("inner stages are tabulated");
            let s = params.sigma * libm::sqrt(dt);
            let shift = y - beta;
            if shift == 0.0 || s == 0.0 {
                return eval_table(table, y);
            }
            rule.expect(|z| eval_table(table, beta + shift * libm::exp(s * z - 0.5 * s * s)))
        }
    }
}

// Table lookup with the asymptotic extension: slope one above the table,
// the clipped edge secant (floored at zero) below it.
fn eval_table(table: &MonotoneCubic, y: f64) -> f64 {
    let (lo, hi) = (table.x_min(), table.x_max());
    if y > hi {
        table.eval(hi) + (y - hi)
    } else if y < lo {
        let (slope, _) = table.edge_secants();
        (table.eval(lo) + (y - lo) * slope.clamp(0.0, 1.0)).max(0.0)
    } else {
        table.eval(y)
    }
}

/// One-shot cascade evaluation: builds the tables and prices a single point.
pub fn cascade_price(t: f64, x: f64, drift: &StepDrift, params: &MarketParams, cfg: CascadeConfig) -> Result<f64> {
    Cascade::build(drift, params, cfg)?.price(t, x)
}

/// Nested Gauss–Hermite quadrature without tabulation, at cost
/// `order^(stages − 1)`. Serves as an independent check on [`Cascade`].
pub fn nested_quadrature_price(t: f64, x: f64, drift: &StepDrift, params: &MarketParams, order: usize) -> Result<f64> {
    params.check_time(t)?;
    let rule = GaussHermite::new(order);
    let intervals = drift.intervals_after(t);
    Ok(nested(&intervals, &rule, params, x))
}

fn nested(intervals: &[(f64, f64, f64)], rule: &GaussHermite, params: &MarketParams, y: f64) -> f64 {
    match intervals {
        [] => (y - params.strike).max(0.0),
        [(start, end, beta)] => gbm_call(y - beta, params.strike - beta, params.sigma, end - start).unwrap_or(0.0),
        [(start, end, beta), rest @ ..] => {
            let s = params.sigma * libm::sqrt(end - start);
            rule.expect(|z| nested(rest, rule, params, beta + (y - beta) * libm::exp(s * z - 0.5 * s * s)))
        }
    }
}
