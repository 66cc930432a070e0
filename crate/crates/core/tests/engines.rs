//! Cross-module checks through the public API.

use dasian_core::analytic::{cascade_price, gbm_call, nested_quadrature_price, CascadeConfig};
use dasian_core::market::{compute_b, DividendMeasure, MarketParams, StepDrift, WeightingMeasure};
use dasian_core::mc::{price_mc, PathConfig};
use dasian_core::pde::{price_pde, SolverConfig, TimeAlignment};
use dasian_core::regularity::{check_bound, BoundVariant, EngineValue};

fn params(strike: f64) -> MarketParams {
    MarketParams::new(0.25, 0.0, 1.0, strike).unwrap()
}

fn monthly_drift() -> StepDrift {
    let mu = WeightingMeasure::uniform(12, 1.0).unwrap();
    compute_b(&params(1.0), &DividendMeasure::zero(), &mu).unwrap()
}

#[test]
fn uniform_monthly_average_has_linear_levels() {
    let drift = monthly_drift();
    assert_eq!(drift.breakpoints().len(), 12);
    for (i, b) in drift.levels().iter().enumerate() {
        assert!((b - (12 - i) as f64 / 12.0).abs() < 1e-15, "level {i}: {b}");
    }
}

#[test]
fn constant_drift_reduces_to_shifted_call() {
    // One atom at T: X − 1 is geometric Brownian motion.
    let drift = StepDrift::constant(1.0, 1.0).unwrap();
    let p = params(1.6);
    let exact = gbm_call(1.5 - 1.0, 1.6 - 1.0, 0.25, 1.0).unwrap();
    let cascade = cascade_price(0.0, 1.5, &drift, &p, CascadeConfig::default()).unwrap();
    assert!((cascade - exact).abs() < 1e-7 * exact, "{cascade} vs {exact}");
    let mc = price_mc(0.0, 1.5, &drift, &p, PathConfig::new(200_000, 4)).unwrap();
    assert!((mc.mean - exact).abs() < 4.0 * mc.std_error);
    let pde = price_pde(0.0, 1.5, &drift, &p, &SolverConfig::new(256, 128)).unwrap();
    assert!((pde - exact).abs() < 0.01 * exact, "{pde} vs {exact}");
}

#[test]
fn shifted_call_close_to_the_level_converges_in_space() {
    // X − 1 starts at 0.1, so the solution varies on a scale of σ·0.1.
    let drift = StepDrift::constant(1.0, 1.0).unwrap();
    let p = params(1.12);
    let exact = gbm_call(0.1, 0.12, 0.25, 1.0).unwrap();
    let err = |m| (price_pde(0.0, 1.1, &drift, &p, &SolverConfig::new(m, 128)).unwrap() - exact).abs();
    let (coarse, fine) = (err(256), err(512));
    assert!(coarse / fine > 3.0, "{coarse} / {fine}");
    assert!(fine < 0.005 * exact);
}

#[test]
fn monthly_average_engines_agree() {
    let drift = monthly_drift();
    let p = params(0.5);
    let x = 1.0;
    let cascade = cascade_price(0.0, x, &drift, &p, CascadeConfig::default()).unwrap();
    let mc = price_mc(0.0, x, &drift, &p, PathConfig::new(200_000, 9)).unwrap();
    assert!((mc.mean - cascade).abs() < 4.0 * mc.std_error, "{} ± {} vs {cascade}", mc.mean, mc.std_error);
    let aligned = price_pde(0.0, x, &drift, &p, &SolverConfig::new(256, 256)).unwrap();
    assert!((aligned - cascade).abs() < 0.01 * cascade, "{aligned} vs {cascade}");
    let misaligned =
        price_pde(0.0, x, &drift, &p, &SolverConfig::new(256, 256).with_alignment(TimeAlignment::Misaligned)).unwrap();
    assert!((misaligned - cascade).abs() < 0.01 * cascade, "{misaligned} vs {cascade}");
}

#[test]
fn cascade_matches_nested_quadrature_on_three_atoms() {
    let drift = StepDrift::new(vec![0.3, 0.7, 1.0], vec![1.5, 0.9, 0.4, 0.0], 1.0).unwrap();
    let p = params(0.9);
    for x in [0.6, 1.0, 1.6] {
        let fast = cascade_price(0.0, x, &drift, &p, CascadeConfig::default()).unwrap();
        let slow = nested_quadrature_price(0.0, x, &drift, &p, 48).unwrap();
        assert!((fast - slow).abs() < 1e-6, "x={x}: {fast} vs {slow}");
    }
}

#[test]
fn dividends_lower_the_drift() {
    let p = params(1.0);
    let mu = WeightingMeasure::atomic(vec![(0.5, 0.5), (1.0, 0.5)], 1.0).unwrap();
    let plain = compute_b(&p, &DividendMeasure::zero(), &mu).unwrap();
    let nu = DividendMeasure::new(vec![(0.25, 0.05)], None, 1.0).unwrap();
    let div = compute_b(&p, &nu, &mu).unwrap();
    assert!(div.levels()[0] < plain.levels()[0]);
    assert_eq!(div.breakpoints(), plain.breakpoints());
}

#[test]
fn mc_respects_the_bound_with_noise_allowance() {
    let p = params(1.0);
    let zero = StepDrift::zero(1.0);
    let mc = |t: f64, x: f64| {
        let est = price_mc(t, x, &zero, &p, PathConfig::new(20_000, 2))?;
        Ok(EngineValue { value: est.mean, std_error: est.std_error })
    };
    let rep = check_bound(mc, &p, 5, 5, 3.0).unwrap();
    assert_eq!(rep.points.len(), 25);
    assert_eq!(rep.violations(BoundVariant::Derivation), 0);
}
