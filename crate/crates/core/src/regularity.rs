//! Numerical checks of the regularity statements for the reduced problem
//! `v(t, x) = E(x e^{σW_{T−t} − σ²(T−t)/2} − K)₊`: the exponential bound in
//! the strip between 0 and K, derivative decay toward the degeneracy at 0,
//! the vanishing region and the Gaussian tail inequality.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::analytic::reduced_derivatives;
use crate::error::{ensure, Error, Result};
use crate::market::MarketParams;
use crate::math::quad::adaptive_simpson;
use crate::pde::PdeSolution;

/// Smallest `ln|K/x|` on the bound lattice.
pub const MIN_LOG_GAP: f64 = 0.05;
/// Largest `ln|K/x|` on the bound lattice, in units of `σ√T`.
pub const MAX_LOG_GAP_SDS: f64 = 12.0;

/// Exponent of the exponential bound on `v` in the strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    /// `−ln²|K/x| / (σ²T)`.
    Printed,
    /// `−ln²|K/x| / (2σ²T)`, what the reflection argument delivers.
    Derivation,
}

/// A price with its Monte Carlo standard error (zero for deterministic
/// engines).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineValue {
    pub value: f64,
    pub std_error: f64,
}

impl EngineValue {
    pub fn exact(value: f64) -> Self {
        Self { value, std_error: 0.0 }
    }
}

/// Whether `(t, x)` lies in `[0, T) × (0, K)` (or `(K, 0)` for `K < 0`).
pub fn in_strip(t: f64, x: f64, params: &MarketParams) -> bool {
    let k = params.strike;
    let inside = if k > 0.0 { x > 0.0 && x < k } else { x < 0.0 && x > k };
    t >= 0.0 && t < params.maturity && inside
}

/// `√(2/π) · σ|K|√T / L · exp(−L² / (c σ² T))`, `L = ln|K/x|`, `c` = 1 or 2.
pub fn lemma_bound(t: f64, x: f64, params: &MarketParams, variant: BoundVariant) -> Result<f64> {
    if params.strike == 0.0 {
        return Err(Error::ZeroStrike);
    }
    if !in_strip(t, x, params) {
        return Err(Error::OutsideRegion {
            t,
            x,
            reason: "bound holds for t in [0, T) and x strictly between 0 and K",
        });
    }
    let k = params.strike;
    let gap = libm::log(k / x);
    if gap <= 0.0 {
        return Err(Error::OutsideRegion { t, x, reason: "ln|K/x| must be positive" });
    }
    let s2t = params.sigma * params.sigma * params.maturity;
    let c = match variant {
        BoundVariant::Printed => 1.0,
        BoundVariant::Derivation => 2.0,
    };
    Ok(libm::sqrt(2.0 / PI) * params.sigma * k.abs() * libm::sqrt(params.maturity) / gap
        * libm::exp(-gap * gap / (c * s2t)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub t: f64,
    pub x: f64,
    pub value: EngineValue,
    pub printed: f64,
    pub derivation: f64,
    pub printed_violation: bool,
    pub derivation_violation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub points: Vec<BoundPoint>,
    /// Standard errors of slack allowed before a point counts as a violation.
    pub noise_sds: f64,
}

impl BoundReport {
    pub fn violations(&self, variant: BoundVariant) -> usize {
        self.points
            .iter()
            .filter(|p| match variant {
                BoundVariant::Printed => p.printed_violation,
                BoundVariant::Derivation => p.derivation_violation,
            })
            .count()
    }

    /// Smallest `bound − value` over the lattice; negative on a violation.
    pub fn min_margin(&self, variant: BoundVariant) -> f64 {
        self.points
            .iter()
            .map(|p| match variant {
                BoundVariant::Printed => p.printed - p.value.value,
                BoundVariant::Derivation => p.derivation - p.value.value,
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Points where the engine returned a negative price beyond its noise.
    pub fn negative_values(&self) -> usize {
        self.points.iter().filter(|p| p.value.value < -self.noise_sds * p.value.std_error).count()
    }
}

/// `n_t × n_x` lattice in the strip: `t` uniform on `[0, T)`, `ln|K/x|`
/// geometric on `[MIN_LOG_GAP, MAX_LOG_GAP_SDS·σ√T]`.
pub fn bound_lattice(params: &MarketParams, n_t: usize, n_x: usize) -> Result<Vec<(f64, f64)>> {
    ensure(n_t >= 1 && n_x >= 2, "lattice", "need n_t >= 1 and n_x >= 2")?;
    if params.strike == 0.0 {
        return Err(Error::ZeroStrike);
    }
    let hi_gap = (MAX_LOG_GAP_SDS * params.sigma * libm::sqrt(params.maturity)).max(2.0 * MIN_LOG_GAP);
    let ratio = libm::log(hi_gap / MIN_LOG_GAP);
    let mut out = Vec::with_capacity(n_t * n_x);
    for i in 0..n_t {
        let t = params.maturity * i as f64 / n_t as f64;
        for j in 0..n_x {
            let gap = MIN_LOG_GAP * libm::exp(ratio * j as f64 / (n_x - 1) as f64);
            out.push((t, params.strike * libm::exp(-gap)));
        }
    }
    Ok(out)
}

/// Evaluates `engine` on the bound lattice and compares with both bound
/// variants. A point violates a bound when `value − noise_sds·se > bound`.
pub fn check_bound<F>(engine: F, params: &MarketParams, n_t: usize, n_x: usize, noise_sds: f64) -> Result<BoundReport>
where
    F: Fn(f64, f64) -> Result<EngineValue>,
{
    ensure(noise_sds >= 0.0, "noise_sds", "must be nonnegative")?;
    let lattice = bound_lattice(params, n_t, n_x)?;
    let mut points = Vec::with_capacity(lattice.len());
    for (t, x) in lattice {
        let value = engine(t, x)?;
        let printed = lemma_bound(t, x, params, BoundVariant::Printed)?;
        let derivation = lemma_bound(t, x, params, BoundVariant::Derivation)?;
        let low = value.value - noise_sds * value.std_error;
        points.push(BoundPoint {
            t,
            x,
            value,
            printed,
            derivation,
            printed_violation: low > printed,
            derivation_violation: low > derivation,
        });
    }
    Ok(BoundReport { points, noise_sds })
}

/// One row of a decay profile at fixed `t₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub x0: f64,
    /// Rescaling radius, `x₀/2`.
    pub r: f64,
    pub x_vx: f64,
    pub x2_vxx: f64,
    pub vt: f64,
}

impl DecayRow {
    pub fn total(&self) -> f64 {
        self.x_vx + self.x2_vxx + self.vt
    }

    fn column(&self, c: usize) -> f64 {
        match c {
            0 => self.x_vx,
            1 => self.x2_vxx,
            2 => self.vt,
            _ => self.total(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayProfile {
    pub t0: f64,
    pub rows: Vec<DecayRow>,
}

impl DecayProfile {
    /// Whether each column and the total are nonincreasing from row `from`
    /// on. Columns that underflow to zero count as nonincreasing.
    pub fn monotone_from(&self, from: usize) -> bool {
        (0..4).all(|c| self.rows[from.min(self.rows.len())..].windows(2).all(|w| w[1].column(c) <= w[0].column(c)))
    }
}

/// Source of `(v_x, v_xx, v_t)` for decay profiles.
#[derive(Debug, Clone, Copy)]
pub enum DecayEngine<'a> {
    /// Closed-form Black–Scholes derivatives.
    Analytic,
    /// Difference quotients of the closed form with steps `x₀/100` in space
    /// and `min(10⁻³T, (T − t₀)/2)` in time.
    AnalyticDifferences,
    /// Three-point differences on a solved grid.
    Pde(&'a PdeSolution),
}

pub fn decay_profile(engine: DecayEngine<'_>, t0: f64, params: &MarketParams, x0s: &[f64]) -> Result<DecayProfile> {
    let k = params.strike;
    ensure(k > 0.0, "K", "decay profiles need K > 0")?;
    ensure(!x0s.is_empty(), "x0", "need at least one point")?;
    if !(t0 >= 0.0 && t0 < params.maturity) {
        return Err(Error::TimeOutOfRange { t: t0, horizon: params.maturity });
    }
    for (i, &x0) in x0s.iter().enumerate() {
        if !(x0 > 0.0 && x0 < 2.0 * k / 3.0) {
            return Err(Error::OutsideRegion { t: t0, x: x0, reason: "x0 must lie in (0, 2K/3)" });
        }
        if i > 0 && x0 >= x0s[i - 1] {
            return Err(Error::OutsideRegion { t: t0, x: x0, reason: "x0 sequence must decrease" });
        }
    }
    let mut rows = Vec::with_capacity(x0s.len());
    for &x0 in x0s {
        let (vx, vxx, vt) = match engine {
            DecayEngine::Analytic => reduced_derivatives(t0, x0, params)?,
            DecayEngine::AnalyticDifferences => difference_derivatives(t0, x0, params)?,
            DecayEngine::Pde(sol) => sol.estimate_derivatives(t0, x0)?,
        };
        rows.push(DecayRow { x0, r: x0 / 2.0, x_vx: x0 * vx.abs(), x2_vxx: x0 * x0 * vxx.abs(), vt: vt.abs() });
    }
    Ok(DecayProfile { t0, rows })
}

fn difference_derivatives(t: f64, x: f64, params: &MarketParams) -> Result<(f64, f64, f64)> {
    use crate::analytic::v_reduced;
    let h = x / 100.0;
    let (vm, v0, vp) = (v_reduced(t, x - h, params)?, v_reduced(t, x, params)?, v_reduced(t, x + h, params)?);
    let ht = (1e-3 * params.maturity).min(0.5 * (params.maturity - t));
    let vt = if t >= ht {
        (v_reduced(t + ht, x, params)? - v_reduced(t - ht, x, params)?) / (2.0 * ht)
    } else {
        (v_reduced(t + ht, x, params)? - v0) / ht
    };
    Ok(((vp - vm) / (2.0 * h), (vp - 2.0 * v0 + vm) / (h * h), vt))
}

/// Smallest `N > 0` with `S ≤ N·e^{−(ln x₀)²/N}` at every `(x₀, S)`.
///
/// `ln N − L²/N` increases in `N`, so each point gives a threshold found by
/// bisection in `ln N`; points with `S = 0` impose nothing.
pub fn fit_envelope(points: &[(f64, f64)]) -> Result<f64> {
    ensure(!points.is_empty(), "points", "need at least one point")?;
    let mut n_fit: f64 = f64::MIN_POSITIVE;
    for &(x0, s) in points {
        ensure(x0 > 0.0 && s >= 0.0 && s.is_finite(), "points", "need x0 > 0 and finite S >= 0")?;
        if s == 0.0 {
            continue;
        }
        let l2 = libm::log(x0) * libm::log(x0);
        let target = libm::log(s);
        let g = |ln_n: f64| ln_n - l2 * libm::exp(-ln_n) - target;
        let (mut lo, mut hi) = (-700.0_f64, 700.0_f64);
        if g(lo) >= 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        n_fit = n_fit.max(libm::exp(hi));
    }
    Ok(n_fit)
}

pub fn envelope(n: f64, x0: f64) -> f64 {
    let l = libm::log(x0);
    n * libm::exp(-l * l / n)
}

/// Outcome of [`vanishing_region_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct VanishingReport {
    pub points: Vec<(f64, f64, EngineValue)>,
    pub tolerance: f64,
    pub violations: usize,
}

/// Deterministic sample of `n` points `(t, x)` with `t ∈ [0, T)` and
/// `x ∈ [x_lo, 0]`, on a rank-1 lattice.
pub fn vanishing_samples(params: &MarketParams, n: usize, x_lo: f64) -> Vec<(f64, f64)> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    (0..n)
        .map(|i| {
            let u = i as f64 / n as f64;
            let w = libm::fmod(0.5 + GOLDEN * i as f64, 1.0);
            (params.maturity * u, x_lo * w)
        })
        .collect()
}

/// Counts points where `|v| > tolerance`. The reduced price vanishes
/// identically for `x ≤ 0 < K`.
pub fn vanishing_region_check<F>(
    engine: F,
    params: &MarketParams,
    samples: &[(f64, f64)],
    tolerance: f64,
) -> Result<VanishingReport>
where
    F: Fn(f64, f64) -> Result<EngineValue>,
{
    ensure(params.strike > 0.0, "K", "vanishing region needs K > 0")?;
    ensure(tolerance >= 0.0, "tolerance", "must be nonnegative")?;
    let mut points = Vec::with_capacity(samples.len());
    let mut violations = 0;
    for &(t, x) in samples {
        if x > 0.0 {
            return Err(Error::OutsideRegion { t, x, reason: "vanishing region is x <= 0" });
        }
        let v = engine(t, x)?;
        if v.value.abs() > tolerance {
            violations += 1;
        }
        points.push((t, x, v));
    }
    Ok(VanishingReport { points, tolerance, violations })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailRow {
    pub alpha: f64,
    /// `∫_α^∞ e^{−x²/2} dx` by quadrature.
    pub lhs: f64,
    /// `e^{−α²/2}/α`.
    pub rhs: f64,
}

impl TailRow {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub rows: Vec<TailRow>,
}

impl TailReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.lhs > r.rhs).count()
    }

    /// Smallest relative slack `1 − lhs/rhs`.
    pub fn min_margin(&self) -> f64 {
        self.rows.iter().map(|r| 1.0 - r.ratio()).fold(f64::INFINITY, f64::min)
    }
}

/// `∫_α^∞ e^{−x²/2} dx = e^{−α²/2} ∫_0^∞ e^{−αy − y²/2} dy`, by adaptive
/// Simpson on the range where the integrand exceeds `e^{−46}`.
pub fn gaussian_tail_integral(alpha: f64) -> Result<f64> {
    ensure(alpha.is_finite() && alpha > 0.0, "alpha", "must be positive")?;
    let upper = -alpha + libm::sqrt(alpha * alpha + 92.0);
    let f = |y: f64| libm::exp(-alpha * y - 0.5 * y * y);
    Ok(libm::exp(-0.5 * alpha * alpha) * adaptive_simpson(&f, 0.0, upper, 1e-14, 40))
}

pub fn gaussian_tail_check(alphas: &[f64]) -> Result<TailReport> {
    let rows = alphas
        .iter()
        .map(|&alpha| {
            let lhs = gaussian_tail_integral(alpha)?;
            Ok(TailRow { alpha, lhs, rhs: libm::exp(-0.5 * alpha * alpha) / alpha })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TailReport { rows })
}

/// `n` log-spaced values on `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![lo];
    }
    let ratio = libm::log(hi / lo);
    let mut xs: Vec<f64> = (0..n).map(|i| lo * libm::exp(ratio * i as f64 / (n - 1) as f64)).collect();
    xs[n - 1] = hi;
    xs
}

#[cfg(test)]
mod tests;
