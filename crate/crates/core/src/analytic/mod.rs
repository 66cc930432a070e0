//! Closed-form evaluation of the constant-drift problem and the tabulated
//! cascade across sampling intervals.
//!
//! With `b ≡ β` the solution process is `X = β + (x − β)·e^{σW − σ²τ/2}`,
//! so every constant-drift stage reduces to a lognormal expectation. The
//! shift `x ↦ x + β` maps it to the `β = 0` problem with strike `K − β`.

mod cascade;

pub use cascade::{cascade_price, nested_quadrature_price, Cascade, CascadeConfig};

use crate::error::{Error, Result};
use crate::market::MarketParams;
use crate::math::{normal_cdf, normal_pdf};

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "tau", reason: "time to maturity must be nonnegative" })
    }
}

// Black–Scholes call with zero rate; requires x > 0, K > 0, s = σ√τ > 0.
fn bs_call(x: f64, k: f64, s: f64) -> f64 {
    let d1 = (libm::log(x / k) + 0.5 * s * s) / s;
    let d2 = d1 - s;
    x * normal_cdf(d1) - k * normal_cdf(d2)
}

fn bs_put(x: f64, k: f64, s: f64) -> f64 {
    let d1 = (libm::log(x / k) + 0.5 * s * s) / s;
    let d2 = d1 - s;
    k * normal_cdf(-d2) - x * normal_cdf(-d1)
}

/// `E (x·e^{σW_τ − σ²τ/2} − K)₊` for any signs of `x` and `K`.
pub fn gbm_call(x: f64, strike: f64, sigma: f64, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let s = sigma * libm::sqrt(tau);
    if s == 0.0 {
        return Ok((x - strike).max(0.0));
    }
    Ok(match (x > 0.0, strike > 0.0) {
        (true, true) => bs_call(x, strike, s),
        // x·e^G ≤ 0 < K: never exercised.
        (false, true) => 0.0,
        // x·e^G ≥ 0 ≥ K: always exercised, and E x·e^G = x.
        (true, false) => x - strike,
        (false, false) => {
            if x == 0.0 {
                -strike
            } else if strike == 0.0 {
                0.0
            } else {
                // (|K| − |x|·e^G)₊
                bs_put(-x, -strike, s)
            }
        }
    })
}

/// `E (K − x·e^{σW_τ − σ²τ/2})₊ = gbm_call − x + K`.
pub fn gbm_put(x: f64, strike: f64, sigma: f64, tau: f64) -> Result<f64> {
    Ok((gbm_call(x, strike, sigma, tau)? - x + strike).max(0.0))
}

fn check_reduced(t: f64, params: &MarketParams) -> Result<()> {
    params.check_time(t)?;
    if params.strike == 0.0 {
        return Err(Error::ZeroStrike);
    }
    Ok(())
}

/// The nonnegative part `v` of the reduced (`b ≡ 0`) solution: the call
/// expectation for `K > 0`, the put expectation for `K < 0`.
pub fn v_reduced(t: f64, x: f64, params: &MarketParams) -> Result<f64> {
    check_reduced(t, params)?;
    let tau = params.maturity - t;
    if params.strike > 0.0 {
        gbm_call(x, params.strike, params.sigma, tau)
    } else {
        // E(K − x·e^G)₊ = E((−x)·e^G − (−K))₊
        gbm_call(-x, -params.strike, params.sigma, tau)
    }
}

/// Reduced solution `u(t, x) = E (x·e^{σW − σ²τ/2} − K)₊`.
pub fn u_reduced(t: f64, x: f64, params: &MarketParams) -> Result<f64> {
    let v = v_reduced(t, x, params)?;
    Ok(if params.strike > 0.0 { v } else { x - params.strike + v })
}

/// Closed-form `(v_x, v_xx, v_t)` of the reduced problem.
///
/// For `K > 0` these are the zero-rate Black–Scholes delta, gamma and
/// theta; `K < 0` follows from the `x ↦ −x, K ↦ −K` symmetry. Zero outside
/// the half-line where `v` lives.
pub fn reduced_derivatives(t: f64, x: f64, params: &MarketParams) -> Result<(f64, f64, f64)> {
    check_reduced(t, params)?;
    let tau = params.maturity - t;
    let sign = params.strike.signum();
    let (xs, ks) = (sign * x, sign * params.strike);
    if xs <= 0.0 || tau == 0.0 {
        return Ok((0.0, 0.0, 0.0));
    }
    let s = params.sigma * libm::sqrt(tau);
    let d1 = (libm::log(xs / ks) + 0.5 * s * s) / s;
    // For K < 0, v(x) = call(−x, −K): v_x flips sign, v_xx does not.
    let delta = sign * normal_cdf(d1);
    let gamma = normal_pdf(d1) / (xs * s);
    let theta = -0.5 * params.sigma * params.sigma * x * x * gamma;
    Ok((delta, gamma, theta))
}
