//! Market description, sampling measures and the step drift `b(t)`.

use alloc::vec::Vec;

use crate::error::{ensure, Error, Result};
use crate::math::quad::simpson;

/// Atom times closer than this are merged.
pub const ATOM_MERGE_TOL: f64 = 1e-12;

/// Simpson panels used per smooth piece when integrating a density.
pub const DENSITY_PANELS: usize = 1 << 10;

/// Volatility, interest rate, maturity and strike of one pricing problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub sigma: f64,
    pub rate: f64,
    pub maturity: f64,
    pub strike: f64,
}

impl MarketParams {
    pub fn new(sigma: f64, rate: f64, maturity: f64, strike: f64) -> Result<Self> {
        ensure(sigma.is_finite() && sigma > 0.0, "sigma", "must be positive")?;
        ensure(rate.is_finite(), "r", "must be finite")?;
        ensure(maturity.is_finite() && maturity > 0.0, "T", "must be positive")?;
        ensure(strike.is_finite(), "K", "must be finite")?;
        Ok(Self { sigma, rate, maturity, strike })
    }

    pub(crate) fn check_time(&self, t: f64) -> Result<()> {
        check_time(t, self.maturity)
    }
}

pub(crate) fn check_time(t: f64, horizon: f64) -> Result<()> {
    if (0.0..=horizon).contains(&t) {
        Ok(())
    } else {
        Err(Error::TimeOutOfRange { t, horizon })
    }
}

/// Piecewise-constant density on `[breaks[0], breaks[p]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        ensure(breaks.len() >= 2, "density", "needs at least one piece")?;
        ensure(values.len() + 1 == breaks.len(), "density", "one value per piece")?;
        ensure(breaks.windows(2).all(|w| w[0] < w[1]), "density", "breaks must increase")?;
        ensure(values.iter().all(|v| v.is_finite() && *v >= 0.0), "density", "values must be nonnegative")?;
        Ok(Self { breaks, values })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// Value on the open piece containing `s` (zero outside the support).
    pub fn value(&self, s: f64) -> f64 {
        let n = self.breaks.len();
        if s < self.breaks[0] || s > self.breaks[n - 1] {
            return 0.0;
        }
        let i = self.breaks.partition_point(|&b| b <= s).clamp(1, n - 1) - 1;
        self.values[i]
    }

    /// ∫ over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let lo = self.breaks[i].max(a);
                let hi = self.breaks[i + 1].min(b);
                if hi > lo {
                    v * (hi - lo)
                } else {
                    0.0
                }
            })
            .sum()
    }

    fn total(&self) -> f64 {
        self.integral(self.breaks[0], self.breaks[self.breaks.len() - 1])
    }
}

/// A finite measure on `[0, T]`: point masses plus an optional
/// piecewise-constant density.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Measure {
    atoms: Vec<(f64, f64)>,
    density: Option<PiecewiseConstant>,
}

impl Measure {
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&PiecewiseConstant> {
        self.density.as_ref()
    }

    /// μ([a, b]).
    pub fn closed(&self, a: f64, b: f64) -> f64 {
        self.atom_mass(|t| a <= t && t <= b) + self.density_mass(a, b)
    }

    /// μ((a, b]).
    pub fn left_open(&self, a: f64, b: f64) -> f64 {
        self.atom_mass(|t| a < t && t <= b) + self.density_mass(a, b)
    }

    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>() + self.density.as_ref().map_or(0.0, |d| d.total())
    }

    fn atom_mass<P: Fn(f64) -> bool>(&self, pred: P) -> f64 {
        self.atoms.iter().filter(|(t, _)| pred(*t)).map(|(_, m)| m).sum()
    }

    fn density_mass(&self, a: f64, b: f64) -> f64 {
        self.density.as_ref().map_or(0.0, |d| d.integral(a, b))
    }
}

fn merge_atoms(atoms: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for &(t, m) in atoms {
        match out.last_mut() {
            Some(last) if t - last.0 < ATOM_MERGE_TOL => last.1 += m,
            _ => out.push((t, m)),
        }
    }
    out
}

/// Sampling measure μ. Atoms must be sorted by time with positive masses in
/// `(0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightingMeasure(Measure);

impl WeightingMeasure {
    pub fn new(atoms: Vec<(f64, f64)>, density: Option<PiecewiseConstant>, horizon: f64) -> Result<Self> {
        for (i, &(t, a)) in atoms.iter().enumerate() {
            ensure(t.is_finite() && t > 0.0 && t <= horizon, "atom time", "must lie in (0, T]")?;
            ensure(a.is_finite() && a > 0.0, "atom mass", "must be positive")?;
            if i > 0 {
                ensure(t > atoms[i - 1].0, "atom time", "atoms must be sorted by increasing time")?;
            }
        }
        if let Some(d) = &density {
            let b = d.breaks();
            ensure(b[0] >= 0.0 && b[b.len() - 1] <= horizon, "density", "support must lie in [0, T]")?;
        }
        let m = Measure { atoms: merge_atoms(&atoms), density };
        let total = m.total();
        ensure(total.is_finite() && total > 0.0, "weighting measure", "total mass must be positive")?;
        Ok(Self(m))
    }

    /// Purely atomic measure.
    pub fn atomic(atoms: Vec<(f64, f64)>, horizon: f64) -> Result<Self> {
        Self::new(atoms, None, horizon)
    }

    /// `(1/n) Σ δ(kT/n)`, the equally weighted discrete average.
    pub fn uniform(n: usize, horizon: f64) -> Result<Self> {
        ensure(n >= 1, "n", "must be at least one")?;
        let w = 1.0 / n as f64;
        Self::atomic((1..=n).map(|k| (k as f64 * horizon / n as f64, w)).collect(), horizon)
    }

    pub fn measure(&self) -> &Measure {
        &self.0
    }

    /// Same measure with every mass multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        ensure(factor.is_finite() && factor > 0.0, "factor", "must be positive")?;
        let atoms = self.0.atoms.iter().map(|&(t, m)| (t, m * factor)).collect();
        let density = self.0.density.as_ref().map(|d| PiecewiseConstant {
            breaks: d.breaks.clone(),
            values: d.values.iter().map(|v| v * factor).collect(),
        });
        Ok(Self(Measure { atoms, density }))
    }
}

/// Dividend measure ν; may be identically zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DividendMeasure(Measure);

impl DividendMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(mut atoms: Vec<(f64, f64)>, density: Option<PiecewiseConstant>, horizon: f64) -> Result<Self> {
        for &(t, m) in &atoms {
            ensure(t.is_finite() && (0.0..=horizon).contains(&t), "dividend time", "must lie in [0, T]")?;
            ensure(m.is_finite() && m >= 0.0, "dividend mass", "must be nonnegative")?;
        }
        if let Some(d) = &density {
            let b = d.breaks();
            ensure(b[0] >= 0.0 && b[b.len() - 1] <= horizon, "dividend density", "support must lie in [0, T]")?;
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self(Measure { atoms: merge_atoms(&atoms), density }))
    }

    pub fn measure(&self) -> &Measure {
        &self.0
    }
}

/// Nonincreasing step function `b(t) = βᵢ` on `(tᵢ₋₁, tᵢ]`, with
/// `t₀ = −∞`, `β_{k+1} = 0` on `(t_k, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDrift {
    breakpoints: Vec<f64>,
    levels: Vec<f64>,
    horizon: f64,
}

impl StepDrift {
    /// `levels` has one more entry than `breakpoints` and ends with 0.
    pub fn new(breakpoints: Vec<f64>, levels: Vec<f64>, horizon: f64) -> Result<Self> {
        ensure(horizon.is_finite() && horizon > 0.0, "T", "must be positive")?;
        ensure(levels.len() == breakpoints.len() + 1, "levels", "need one more level than breakpoints")?;
        ensure(levels[levels.len() - 1] == 0.0, "levels", "final level must be zero")?;
        ensure(breakpoints.iter().all(|&t| t > 0.0 && t <= horizon), "breakpoints", "must lie in (0, T]")?;
        ensure(breakpoints.windows(2).all(|w| w[0] < w[1]), "breakpoints", "must increase strictly")?;
        ensure(levels.iter().all(|&b| b.is_finite() && b >= 0.0), "levels", "must be nonnegative")?;
        ensure(levels.windows(2).all(|w| w[0] > w[1]), "levels", "must decrease strictly")?;
        Ok(Self { breakpoints, levels, horizon })
    }

    /// `b ≡ 0`.
    pub fn zero(horizon: f64) -> Self {
        Self { breakpoints: Vec::new(), levels: alloc::vec![0.0], horizon }
    }

    /// `b ≡ β` on `[0, T]`.
    pub fn constant(beta: f64, horizon: f64) -> Result<Self> {
        if beta == 0.0 {
            return Ok(Self::zero(horizon));
        }
        Self::new(alloc::vec![horizon], alloc::vec![beta, 0.0], horizon)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// β₁, …, β_k, β_{k+1} = 0.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn is_zero(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// b(t) under the half-open convention.
    pub fn eval(&self, t: f64) -> Result<f64> {
        check_time(t, self.horizon)?;
        Ok(self.level_at(t))
    }

    pub(crate) fn level_at(&self, t: f64) -> f64 {
        self.levels[self.breakpoints.partition_point(|&ti| ti < t)]
    }

    /// Right limit b(s⁺): the level on the interval that starts at `s`.
    pub fn right_level(&self, s: f64) -> f64 {
        self.levels[self.breakpoints.partition_point(|&ti| ti <= s)]
    }

    /// Constant levels on the intervals partitioning `(t, T]`, as
    /// `(start, end, level)` triples in forward time order.
    pub fn intervals_after(&self, t: f64) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        let mut start = t;
        for (i, &ti) in self.breakpoints.iter().enumerate() {
            if ti > start {
                out.push((start, ti, self.levels[i]));
                start = ti;
            }
        }
        if self.horizon > start {
            out.push((start, self.horizon, self.levels[self.levels.len() - 1]));
        }
        out
    }

    /// b(T).
    pub fn terminal_level(&self) -> f64 {
        self.levels[self.breakpoints.partition_point(|&ti| ti < self.horizon)]
    }

    /// `T' = inf{t ∈ [0, T] : b(t) = K}` when `K = b(T)`, otherwise `None`.
    pub fn degenerate_split(&self, strike: f64) -> Option<f64> {
        let level = self.terminal_level();
        if (strike - level).abs() > 1e-12 * level.abs().max(1.0) {
            return None;
        }
        let idx = self.breakpoints.partition_point(|&ti| ti < self.horizon);
        Some(if idx == 0 { 0.0 } else { self.breakpoints[idx - 1] })
    }

    /// Same breakpoints, levels multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        ensure(factor.is_finite() && factor > 0.0, "factor", "must be positive")?;
        Ok(Self {
            breakpoints: self.breakpoints.clone(),
            levels: self.levels.iter().map(|b| b * factor).collect(),
            horizon: self.horizon,
        })
    }
}

/// Trading strategy q(t) for general μ and ν.
///
/// `∫_t^T dμ` is read over the closed interval `[t, T]`; density parts are
/// integrated with composite Simpson on each piece where the integrand is
/// smooth.
pub fn compute_q(params: &MarketParams, nu: &DividendMeasure, mu: &WeightingMeasure, t: f64) -> Result<f64> {
    params.check_time(t)?;
    let horizon = params.maturity;
    let r = params.rate;
    let nu = nu.measure();
    let mu = mu.measure();

    let atom_part: f64 = mu
        .atoms()
        .iter()
        .filter(|(s, _)| *s >= t && *s <= horizon)
        .map(|&(s, a)| a * libm::exp(-r * (horizon - s) + nu.closed(s, horizon)))
        .sum();

    let density_part = match mu.density() {
        None => 0.0,
        Some(rho) => {
            let mut cuts: Vec<f64> = alloc::vec![t, horizon];
            cuts.extend(rho.breaks().iter().copied().filter(|&b| b > t && b < horizon));
            cuts.extend(nu.atoms().iter().map(|a| a.0).filter(|&s| s > t && s < horizon));
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            let nu_dens = |s: f64| nu.density().map_or(0.0, |d| d.integral(s, horizon));
            cuts.windows(2)
                .map(|w| {
                    let (a, b) = (w[0], w[1]);
                    let level = rho.value(0.5 * (a + b));
                    if level == 0.0 {
                        return 0.0;
                    }
                    // ν-atoms seen from inside (a, b) are exactly those in [b, T].
                    let nu_atoms: f64 = nu.atoms().iter().filter(|x| x.0 >= b).map(|x| x.1).sum();
                    level * simpson(|s| libm::exp(-r * (horizon - s) + nu_atoms + nu_dens(s)), a, b, DENSITY_PANELS)
                })
                .sum()
        }
    };

    Ok(libm::exp(-nu.left_open(t, horizon)) * (atom_part + density_part))
}

/// The step drift `b` for a purely atomic μ.
pub fn compute_b(params: &MarketParams, nu: &DividendMeasure, mu: &WeightingMeasure) -> Result<StepDrift> {
    let mu = mu.measure();
    if mu.density().is_some() {
        return Err(Error::ContinuousSampling);
    }
    if mu.atoms().is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let horizon = params.maturity;
    let nu = nu.measure();
    let discount = libm::exp(-nu.closed(0.0, horizon));
    let terms: Vec<f64> =
        mu.atoms().iter().map(|&(s, a)| a * libm::exp(-params.rate * (horizon - s) + nu.closed(s, horizon))).collect();

    let k = terms.len();
    let mut levels = alloc::vec![0.0; k + 1];
    let mut acc = 0.0;
    for i in (0..k).rev() {
        acc += terms[i];
        levels[i] = discount * acc;
    }
    let breakpoints = mu.atoms().iter().map(|a| a.0).collect();
    StepDrift::new(breakpoints, levels, horizon)
}

/// b(t) for a prepared drift.
pub fn eval_b(drift: &StepDrift, t: f64) -> Result<f64> {
    drift.eval(t)
}
