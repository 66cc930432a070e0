//! θ-scheme finite differences for `u_t + ½σ²(x − b(t))² u_xx = 0`,
//! `u(T, x) = (x − K)₊`, marching backward from `T`.
//!
//! Space nodes are graded toward the strike, the drift levels and any
//! query points, all of which are exact nodes. The far-field condition is
//! `u_xx = 0` at both edges.

use alloc::vec::Vec;

use crate::error::{ensure, Error, Result};
use crate::market::{MarketParams, StepDrift};
use crate::math::grid::weighted_graded_nodes;
use crate::math::tridiag;

/// Log-scale truncation margin, in diffusion standard deviations.
pub const TRUNCATION_SDS: f64 = 6.0;

// Density peak of the space grading; the finest cells are `1 + PEAK` times
// smaller than the coarsest.
const GRADING_PEAK: f64 = 3.0;
// Density peak around requested query points.
const QUERY_PEAK: f64 = 10.0;
// Width of each refinement bump, in units of `scale · σ√T`.
const GRADING_WIDTH: f64 = 1.5;
// Shifts of the last step tried when a uniform grid must miss breakpoints.
const MISALIGN_FRACTIONS: [f64; 8] = [1.0, 0.5, 0.25, 0.75, 0.375, 0.625, 0.125, 0.875];
// Breakpoints closer than this fraction of a step count as hit.
const MISALIGN_GAP: f64 = 0.125;
const TIME_TOL: f64 = 1e-12;

/// How the time grid treats the drift breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeAlignment {
    /// Every breakpoint is a time level.
    Aligned,
    /// Uniform steps that keep every interior breakpoint strictly inside a
    /// step. Coincides with `Aligned` when there is nothing to miss.
    Misaligned,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub theta: f64,
    /// Number of space intervals.
    pub m: usize,
    /// Number of time steps.
    pub n: usize,
    /// Fully implicit half steps after `T` and after each breakpoint on the
    /// grid; each pair replaces one θ-step.
    pub rannacher_steps: usize,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    /// Points that become exact nodes with local refinement, e.g. query spots.
    pub extra_nodes: Vec<f64>,
    pub alignment: TimeAlignment,
    /// Earliest time solved for.
    pub t_start: f64,
}

impl SolverConfig {
    pub fn new(m: usize, n: usize) -> Self {
        Self {
            theta: 0.5,
            m,
            n,
            rannacher_steps: 4,
            x_min: None,
            x_max: None,
            extra_nodes: Vec::new(),
            alignment: TimeAlignment::Aligned,
            t_start: 0.0,
        }
    }

    pub fn with_nodes(mut self, xs: &[f64]) -> Self {
        self.extra_nodes.extend_from_slice(xs);
        self
    }

    pub fn with_alignment(mut self, alignment: TimeAlignment) -> Self {
        self.alignment = alignment;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure((0.5..=1.0).contains(&self.theta), "theta", "must lie in [1/2, 1]")?;
        ensure(self.m >= 16, "M", "must be at least 16")?;
        ensure(self.n >= 4, "N", "must be at least 4")?;
        ensure(self.extra_nodes.iter().all(|x| x.is_finite()), "extra_nodes", "must be finite")?;
        ensure(self.t_start.is_finite() && self.t_start >= 0.0, "t_start", "must be nonnegative")
    }
}

/// Strictly increasing space nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceGrid {
    nodes: Vec<f64>,
}

impl SpaceGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Index of an exact node equal to `x`.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        self.nodes.iter().position(|&y| y == x)
    }

    /// Largest ratio between adjacent cell widths.
    pub fn max_spacing_ratio(&self) -> f64 {
        self.nodes
            .windows(3)
            .map(|w| {
                let (a, b) = (w[1] - w[0], w[2] - w[1]);
                a.max(b) / a.min(b)
            })
            .fold(1.0, f64::max)
    }
}

/// Time levels in decreasing order, `T = s₀ > s₁ > … > s_N = t_start`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    levels: Vec<f64>,
}

impl TimeGrid {
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn steps(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn contains(&self, t: f64) -> bool {
        self.levels.contains(&t)
    }
}

/// Default truncation `[x_min, x_max]`.
pub fn default_bounds(drift: &StepDrift, params: &MarketParams) -> (f64, f64) {
    let k = params.strike;
    let top = drift.levels()[0];
    let scale = k.abs().max(top).max(f64::MIN_POSITIVE);
    let margin = scale * libm::expm1(TRUNCATION_SDS * params.sigma * libm::sqrt(params.maturity));
    (k.min(0.0) - margin, k.max(top).max(0.0) + margin)
}

pub fn build_grids(drift: &StepDrift, params: &MarketParams, cfg: &SolverConfig) -> Result<(SpaceGrid, TimeGrid)> {
    cfg.validate()?;
    ensure(drift.horizon() == params.maturity, "T", "drift and market horizons differ")?;
    ensure(cfg.t_start < params.maturity, "t_start", "must be before T")?;
    Ok((space_grid(drift, params, cfg)?, time_grid(drift, params.maturity, cfg)?))
}

fn space_grid(drift: &StepDrift, params: &MarketParams, cfg: &SolverConfig) -> Result<SpaceGrid> {
    let (lo_default, hi_default) = default_bounds(drift, params);
    let lo = cfg.x_min.unwrap_or(lo_default);
    let hi = cfg.x_max.unwrap_or(hi_default);
    let mut anchors: Vec<f64> = drift.levels().to_vec();
    anchors.push(params.strike);
    if anchors.iter().any(|&a| a <= lo || a >= hi) {
        return Err(Error::Grid("truncation interval must contain K, 0 and every drift level strictly inside"));
    }
    if cfg.extra_nodes.iter().any(|&a| a <= lo || a >= hi) {
        return Err(Error::Grid("extra nodes must lie inside the truncation interval"));
    }
    let mut weighted: Vec<(f64, f64)> = anchors.iter().map(|&a| (a, GRADING_PEAK)).collect();
    weighted.extend(cfg.extra_nodes.iter().map(|&a| (a, QUERY_PEAK)));
    let scale = params.strike.abs().max(drift.levels()[0]);
    let width = GRADING_WIDTH * scale * params.sigma * libm::sqrt(params.maturity);
    let nodes = weighted_graded_nodes(lo, hi, &weighted, width, cfg.m);
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Grid("nodes not strictly increasing"));
    }
    Ok(SpaceGrid { nodes })
}

fn time_grid(drift: &StepDrift, horizon: f64, cfg: &SolverConfig) -> Result<TimeGrid> {
    let t0 = cfg.t_start;
    let interior: Vec<f64> = drift.breakpoints().iter().copied().filter(|&t| t > t0 && t < horizon).collect();
    let levels = match cfg.alignment {
        TimeAlignment::Aligned => aligned_levels(t0, horizon, &interior, cfg.n),
        TimeAlignment::Misaligned => misaligned_levels(t0, horizon, &interior, cfg.n)?,
    };
    Ok(TimeGrid { levels })
}

fn aligned_levels(t0: f64, horizon: f64, interior: &[f64], n: usize) -> Vec<f64> {
    let mut cuts = Vec::with_capacity(interior.len() + 2);
    cuts.push(t0);
    cuts.extend_from_slice(interior);
    cuts.push(horizon);
    let pieces = cuts.len() - 1;
    let n = n.max(pieces);
    let span = horizon - t0;
    let shares: Vec<f64> = cuts.windows(2).map(|w| (w[1] - w[0]) / span * n as f64).collect();
    let mut counts: Vec<usize> = shares.iter().map(|&s| (libm::floor(s) as usize).max(1)).collect();
    let mut assigned: usize = counts.iter().sum();
    while assigned < n {
        let best = (0..pieces)
            .max_by(|&a, &b| (shares[a] - counts[a] as f64).total_cmp(&(shares[b] - counts[b] as f64)).then(b.cmp(&a)))
            .unwrap();
        counts[best] += 1;
        assigned += 1;
    }
    while assigned > n {
        let best = (0..pieces)
            .filter(|&p| counts[p] > 1)
            .min_by(|&a, &b| (shares[a] - counts[a] as f64).total_cmp(&(shares[b] - counts[b] as f64)))
            .unwrap();
        counts[best] -= 1;
        assigned -= 1;
    }

    let mut levels = Vec::with_capacity(n + 1);
    levels.push(horizon);
    for p in (0..pieces).rev() {
        let (a, b) = (cuts[p], cuts[p + 1]);
        let c = counts[p];
        for i in 1..c {
            levels.push(b - (b - a) * i as f64 / c as f64);
        }
        levels.push(a);
    }
    levels
}

fn misaligned_levels(t0: f64, horizon: f64, interior: &[f64], n: usize) -> Result<Vec<f64>> {
    let span = horizon - t0;
    // Finer dyadic offsets follow once the coarse ones are exhausted.
    let finer = [16u32, 32, 64, 128, 256].into_iter().flat_map(|d| (1..d).step_by(2).map(move |k| k as f64 / d as f64));
    let mut best: Option<(f64, Vec<f64>)> = None;
    for phi in MISALIGN_FRACTIONS.into_iter().chain(finer) {
        let h = span / (n as f64 - 1.0 + phi);
        let mut levels: Vec<f64> = (0..n).map(|i| horizon - i as f64 * h).collect();
        levels.push(t0);
        let gap =
            interior.iter().flat_map(|&t| levels.iter().map(move |&s| (s - t).abs() / h)).fold(f64::INFINITY, f64::min);
        if gap >= MISALIGN_GAP {
            return Ok(levels);
        }
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, levels));
        }
    }
    // Many breakpoints can make the full gap impossible; settle for the
    // widest one as long as no breakpoint sits on a level.
    match best {
        Some((gap, levels)) if gap * span > TIME_TOL * n as f64 => Ok(levels),
        _ => Err(Error::Grid("no uniform time grid misses every breakpoint")),
    }
}

/// Solution values on every time level.
#[derive(Debug, Clone)]
pub struct PdeSolution {
    space: SpaceGrid,
    time: TimeGrid,
    /// Row `n` holds `u(s_n, ·)`.
    values: Vec<f64>,
    drift: StepDrift,
    params: MarketParams,
}

impl PdeSolution {
    pub fn space(&self) -> &SpaceGrid {
        &self.space
    }

    pub fn time(&self) -> &TimeGrid {
        &self.time
    }

    pub fn drift(&self) -> &StepDrift {
        &self.drift
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    /// `u(s_n, ·)` on the space nodes.
    pub fn level(&self, n: usize) -> &[f64] {
        let m = self.space.nodes.len();
        &self.values[n * m..(n + 1) * m]
    }

    /// Bilinear interpolation, exact at grid points.
    pub fn get_u(&self, t: f64, x: f64) -> Result<f64> {
        let (n, w) = self.time_bracket(t).ok_or(Error::OutOfDomain { t, x })?;
        let xs = &self.space.nodes;
        if !(x >= xs[0] && x <= xs[xs.len() - 1]) {
            return Err(Error::OutOfDomain { t, x });
        }
        let at_level = |row: usize| -> f64 {
            let u = self.level(row);
            let j = xs.partition_point(|&y| y <= x);
            if j == 0 {
                return u[0];
            }
            if j >= xs.len() || xs[j - 1] == x {
                return u[j - 1];
            }
            let a = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
            u[j - 1] + a * (u[j] - u[j - 1])
        };
        let upper = at_level(n);
        if w == 0.0 {
            return Ok(upper);
        }
        Ok(upper + w * (at_level(n + 1) - upper))
    }

    /// `(u_x, u_xx, u_t)` from three-point differences on the nonuniform
    /// grid, linearly blended between the two nodes around `x`.
    pub fn estimate_derivatives(&self, t: f64, x: f64) -> Result<(f64, f64, f64)> {
        let xs = &self.space.nodes;
        let m = xs.len();
        if self.drift.breakpoints().iter().any(|&b| (b - t).abs() <= TIME_TOL * b.max(1.0)) && t < self.params.maturity
        {
            return Err(Error::DerivativeQuery { t, x, reason: "t is a drift breakpoint" });
        }
        let (n, w) = self.time_bracket(t).ok_or(Error::OutOfDomain { t, x })?;
        if !(x >= xs[2] && x <= xs[m - 3]) {
            return Err(Error::DerivativeQuery { t, x, reason: "x within two nodes of the domain edge" });
        }
        let j = xs.partition_point(|&y| y <= x).min(m - 3).max(2);
        let (j0, j1) = if xs[j - 1] == x { (j - 1, j - 1) } else { (j - 1, j) };

        let blend_level = |row: usize| -> (f64, f64, f64, f64) {
            let u = self.level(row);
            let (dx0, dxx0) = node_derivatives(xs, u, j0);
            let (dx1, dxx1) = node_derivatives(xs, u, j1);
            let a = if j0 == j1 { 0.0 } else { (x - xs[j0]) / (xs[j1] - xs[j0]) };
            let val = u[j0] + a * (u[j1] - u[j0]);
            (dx0 + a * (dx1 - dx0), dxx0 + a * (dxx1 - dxx0), val, a)
        };
        let (ux_a, uxx_a, _, _) = blend_level(n);
        let (ux, uxx) = if w == 0.0 {
            (ux_a, uxx_a)
        } else {
            let (ux_b, uxx_b, _, _) = blend_level(n + 1);
            (ux_a + w * (ux_b - ux_a), uxx_a + w * (uxx_b - uxx_a))
        };

        // Time levels usable for u_t: both ends inside the same constant-drift
        // interval as t.
        let levels = &self.time.levels;
        let same_piece = |a: usize, b: usize| -> bool {
            let (hi, lo) = (levels[a].max(levels[b]), levels[a].min(levels[b]));
            !self.drift.breakpoints().iter().any(|&bp| bp > lo + TIME_TOL && bp < hi - TIME_TOL)
        };
        let value_at = |row: usize| blend_level(row).2;
        let last = levels.len() - 1;
        let ut = if w == 0.0 && n > 0 && n < last && same_piece(n - 1, n + 1) {
            (value_at(n - 1) - value_at(n + 1)) / (levels[n - 1] - levels[n + 1])
        } else if w == 0.0 && n == last {
            (value_at(n - 1) - value_at(n)) / (levels[n - 1] - levels[n])
        } else if w == 0.0 && n == 0 {
            (value_at(0) - value_at(1)) / (levels[0] - levels[1])
        } else if w == 0.0 {
            // Central difference would cross a breakpoint; stay on the side
            // containing `(t, t + δ)`.
            (value_at(n - 1) - value_at(n)) / (levels[n - 1] - levels[n])
        } else {
            (value_at(n) - value_at(n + 1)) / (levels[n] - levels[n + 1])
        };
        Ok((ux, uxx, ut))
    }

    /// Row `n` and weight `w` with `t = (1 − w)·s_n + w·s_{n+1}`.
    fn time_bracket(&self, t: f64) -> Option<(usize, f64)> {
        let levels = &self.time.levels;
        let last = levels.len() - 1;
        if !(t <= levels[0] && t >= levels[last]) {
            return None;
        }
        if let Some(n) = levels.iter().position(|&s| s == t) {
            return Some((n, 0.0));
        }
        let n = levels.partition_point(|&s| s > t) - 1;
        Some((n, (levels[n] - t) / (levels[n] - levels[n + 1])))
    }
}

/// First and second derivative at interior node `j`, exact on quadratics.
fn node_derivatives(xs: &[f64], u: &[f64], j: usize) -> (f64, f64) {
    let (hm, hp) = (xs[j] - xs[j - 1], xs[j + 1] - xs[j]);
    let (dm, dp) = ((u[j] - u[j - 1]) / hm, (u[j + 1] - u[j]) / hp);
    let ux = (hp * dm + hm * dp) / (hm + hp);
    let uxx = 2.0 * (dp - dm) / (hm + hp);
    (ux, uxx)
}

/// Backward θ-scheme solve on `[cfg.t_start, T]`.
///
/// Each step `(s₁, s₀]` uses `a_j = ½σ²(x_j − b(s₁⁺))²`; on aligned grids
/// this is the level of the sampling interval containing the step. Nodes with
/// `a_j = 0` keep their value. The nodes next to each edge carry the
/// `u_xx = 0` condition and the edge values follow by linear extrapolation.
pub fn solve_backward(drift: &StepDrift, params: &MarketParams, cfg: &SolverConfig) -> Result<PdeSolution> {
    let (space, time) = build_grids(drift, params, cfg)?;
    let xs = &space.nodes;
    let m = xs.len();
    let levels = &time.levels;
    let k = params.strike;

    let mut values = Vec::with_capacity(levels.len() * m);
    values.extend(xs.iter().map(|&x| (x - k).max(0.0)));

    let mut stepper = Stepper::new(xs, 0.5 * params.sigma * params.sigma);
    let mut current = alloc::vec![0.0; m];
    let mut half = alloc::vec![0.0; m];
    let mut next = alloc::vec![0.0; m];
    current.copy_from_slice(&values[..m]);

    let mut implicit_left = 0usize;
    for step in 0..levels.len() - 1 {
        let (s0, s1) = (levels[step], levels[step + 1]);
        if step == 0 || drift.breakpoints().contains(&s0) {
            implicit_left = cfg.rannacher_steps;
        }
        if implicit_left > 0 {
            // Two fully implicit half steps.
            let mid = 0.5 * (s0 + s1);
            let (_, b_mid) = step_levels(drift, cfg.alignment, s0, mid);
            stepper.step(&current, &mut half, 1.0, 0.0, b_mid, 0.5 * (s0 - s1))?;
            let (_, b_end) = step_levels(drift, cfg.alignment, mid, s1);
            stepper.step(&half, &mut next, 1.0, 0.0, b_end, 0.5 * (s0 - s1))?;
            implicit_left = implicit_left.saturating_sub(2);
        } else {
            let (b_explicit, b_implicit) = step_levels(drift, cfg.alignment, s0, s1);
            stepper.step(&current, &mut next, cfg.theta, b_explicit, b_implicit, s0 - s1)?;
        }
        values.extend_from_slice(&next);
        core::mem::swap(&mut current, &mut next);
    }

    Ok(PdeSolution { space, time, values, drift: drift.clone(), params: *params })
}

/// One θ-step of the tridiagonal system on a fixed space grid.
struct Stepper<'a> {
    xs: &'a [f64],
    half_var: f64,
    wl: Vec<f64>,
    wr: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(xs: &'a [f64], half_var: f64) -> Self {
        let m = xs.len();
        // Second-difference weights at interior nodes.
        let mut wl = alloc::vec![0.0; m];
        let mut wr = alloc::vec![0.0; m];
        for j in 1..m - 1 {
            let (hm, hp) = (xs[j] - xs[j - 1], xs[j + 1] - xs[j]);
            wl[j] = 2.0 / (hm * (hm + hp));
            wr[j] = 2.0 / (hp * (hm + hp));
        }
        let zeros = alloc::vec![0.0; m];
        Self {
            xs,
            half_var,
            wl,
            wr,
            lower: zeros.clone(),
            diag: zeros.clone(),
            upper: zeros.clone(),
            rhs: zeros.clone(),
            scratch: zeros,
        }
    }

    fn step(
        &mut self,
        old: &[f64],
        out: &mut [f64],
        theta: f64,
        b_explicit: f64,
        b_implicit: f64,
        dt: f64,
    ) -> Result<()> {
        let xs = self.xs;
        let m = xs.len();
        let (wl, wr) = (&self.wl, &self.wr);
        // Rows 1 and m-2 are the u_xx = 0 edge rows: their values carry over.
        for j in 0..m {
            let (de, di) = (xs[j] - b_explicit, xs[j] - b_implicit);
            let ce = if theta < 1.0 { self.half_var * de * de * dt } else { 0.0 };
            let ci = self.half_var * di * di * dt;
            if j <= 1 || j >= m - 2 || (ce == 0.0 && ci == 0.0) {
                self.lower[j] = 0.0;
                self.upper[j] = 0.0;
                self.diag[j] = 1.0;
                self.rhs[j] = old[j];
                continue;
            }
            let explicit = (1.0 - theta) * ce * (wl[j] * old[j - 1] - (wl[j] + wr[j]) * old[j] + wr[j] * old[j + 1]);
            let (l, r) = (ci * wl[j], ci * wr[j]);
            self.lower[j] = -theta * l;
            self.upper[j] = -theta * r;
            self.diag[j] = 1.0 + theta * (l + r);
            self.rhs[j] = old[j] + explicit;
        }
        let r = 1..m - 1;
        tridiag::solve(
            &self.lower[r.clone()],
            &self.diag[r.clone()],
            &self.upper[r.clone()],
            &self.rhs[r.clone()],
            &mut self.scratch[r.clone()],
            &mut out[r],
        )?;
        out[0] = extrapolate(xs[0], xs[1], xs[2], out[1], out[2]);
        out[m - 1] = extrapolate(xs[m - 1], xs[m - 2], xs[m - 3], out[m - 2], out[m - 3]);
        Ok(())
    }
}

/// Drift levels for the explicit and implicit halves of the step from `s0`
/// back to `s1`. Aligned steps sit inside one sampling interval and use its
/// level throughout; misaligned grids know nothing of the breakpoints and
/// read `b` pointwise at each end.
fn step_levels(drift: &StepDrift, alignment: TimeAlignment, s0: f64, s1: f64) -> (f64, f64) {
    match alignment {
        TimeAlignment::Aligned => {
            let b = drift.right_level(s1);
            (b, b)
        }
        TimeAlignment::Misaligned => (drift.level_at(s0), drift.level_at(s1)),
    }
}

/// Value at `x` of the line through `(x1, u1)` and `(x2, u2)`.
fn extrapolate(x: f64, x1: f64, x2: f64, u1: f64, u2: f64) -> f64 {
    u1 + (u1 - u2) * (x - x1) / (x1 - x2)
}

/// `u(t, x)` from a fresh solve that places `x` on the grid.
pub fn price_pde(t: f64, x: f64, drift: &StepDrift, params: &MarketParams, cfg: &SolverConfig) -> Result<f64> {
    let mut cfg = cfg.clone();
    cfg.extra_nodes.push(x);
    if cfg.t_start > t {
        cfg.t_start = t;
    }
    solve_backward(drift, params, &cfg)?.get_u(t, x)
}
