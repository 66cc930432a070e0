use super::*;
use crate::analytic::v_reduced;
use crate::market::StepDrift;
use crate::mc::{price_mc, PathConfig};
use crate::pde::{solve_backward, SolverConfig};
use alloc::vec;
use core::f64::consts::E;

fn reduced(sigma: f64, maturity: f64, k: f64) -> MarketParams {
    MarketParams::new(sigma, 0.0, maturity, k).unwrap()
}

fn closed_form(params: MarketParams) -> impl Fn(f64, f64) -> Result<EngineValue> {
    move |t, x| Ok(EngineValue::exact(v_reduced(t, x, &params)?))
}

#[test]
fn bound_collapses_when_log_gap_is_one() {
    let p = reduced(1.0, 1.0, E);
    let c = libm::sqrt(2.0 / PI) * E;
    let d = lemma_bound(0.0, 1.0, &p, BoundVariant::Derivation).unwrap();
    let q = lemma_bound(0.0, 1.0, &p, BoundVariant::Printed).unwrap();
    assert!((d - c * libm::exp(-0.5)).abs() < 1e-14);
    assert!((q - c * libm::exp(-1.0)).abs() < 1e-14);
}

#[test]
fn derivation_bound_dominates_printed_and_price() {
    let p = reduced(0.2, 1.0, 1.0);
    let d = lemma_bound(0.0, 0.01, &p, BoundVariant::Derivation).unwrap();
    assert!(d > v_reduced(0.0, 0.01, &p).unwrap());
    for (t, x) in bound_lattice(&p, 7, 13).unwrap() {
        let d = lemma_bound(t, x, &p, BoundVariant::Derivation).unwrap();
        let q = lemma_bound(t, x, &p, BoundVariant::Printed).unwrap();
        assert!(d >= q && q > 0.0 && d.is_finite());
    }
}

#[test]
fn bound_rejects_points_outside_strip() {
    let p = reduced(0.2, 1.0, 1.0);
    for (t, x) in [(0.0, 1.0), (0.0, 1.5), (0.0, 0.0), (0.0, -0.5), (1.0, 0.5), (-0.1, 0.5)] {
        assert!(lemma_bound(t, x, &p, BoundVariant::Derivation).is_err(), "({t}, {x})");
    }
    let neg = reduced(0.2, 1.0, -1.0);
    assert!(lemma_bound(0.0, -0.5, &neg, BoundVariant::Derivation).is_ok());
    assert!(lemma_bound(0.0, 0.5, &neg, BoundVariant::Derivation).is_err());
    assert_eq!(lemma_bound(0.0, 0.5, &reduced(0.2, 1.0, 0.0), BoundVariant::Printed), Err(Error::ZeroStrike));
}

#[test]
fn lattice_stays_in_strip_with_guarded_gap() {
    let p = reduced(0.2, 1.0, 1.0);
    let lattice = bound_lattice(&p, 20, 20).unwrap();
    assert_eq!(lattice.len(), 400);
    for &(t, x) in &lattice {
        assert!(in_strip(t, x, &p));
        assert!(libm::log(1.0 / x) >= MIN_LOG_GAP * (1.0 - 1e-12));
    }
}

#[test]
fn closed_form_has_no_derivation_violations() {
    let p = reduced(0.2, 1.0, 1.0);
    let report = check_bound(closed_form(p), &p, 10, 20, 0.0).unwrap();
    assert_eq!(report.points.len(), 200);
    assert_eq!(report.violations(BoundVariant::Derivation), 0);
    assert_eq!(report.negative_values(), 0);
    assert!(report.points.iter().all(|pt| pt.derivation.is_finite() && pt.printed.is_finite()));
    assert!(report.min_margin(BoundVariant::Derivation) > 0.0);
}

#[test]
fn negative_strike_bound_holds() {
    let p = reduced(0.3, 1.0, -1.0);
    let report = check_bound(closed_form(p), &p, 5, 10, 0.0).unwrap();
    assert!(report.points.iter().all(|pt| pt.x < 0.0 && pt.x > -1.0));
    assert_eq!(report.violations(BoundVariant::Derivation), 0);
}

#[test]
fn monte_carlo_violations_stay_within_noise() {
    let p = reduced(0.2, 1.0, 1.0);
    let drift = StepDrift::zero(1.0);
    let engine = |t: f64, x: f64| {
        let est = price_mc(t, x, &drift, &p, PathConfig::new(20_000, 3))?;
        Ok(EngineValue { value: est.mean, std_error: est.std_error })
    };
    let report = check_bound(engine, &p, 3, 6, 3.0).unwrap();
    assert_eq!(report.violations(BoundVariant::Derivation), 0);
}

#[test]
fn price_at_strike_never_exceeds_strike() {
    let p = reduced(0.5, 1.0, 1.0);
    for i in 0..100 {
        let v = v_reduced(i as f64 / 100.0, 1.0, &p).unwrap();
        assert!((0.0..=1.0).contains(&v));
    }
}

fn dyadic(k: f64, js: core::ops::RangeInclusive<i32>) -> Vec<f64> {
    js.map(|j| k * libm::ldexp(1.0, -j)).collect()
}

#[test]
fn analytic_decay_is_monotone() {
    let p = reduced(0.2, 1.0, 1.0);
    let x0s = dyadic(1.0, 2..=10);
    for engine in [DecayEngine::Analytic, DecayEngine::AnalyticDifferences] {
        for t0 in [0.0, 0.2, 0.4, 0.6, 0.8] {
            let prof = decay_profile(engine, t0, &p, &x0s).unwrap();
            assert!(prof.monotone_from(2), "t0 = {t0}");
            assert!(prof.rows.iter().all(|r| r.r == r.x0 / 2.0));
        }
    }
}

#[test]
fn difference_engine_tracks_closed_form() {
    let p = reduced(0.2, 1.0, 1.0);
    let x0s = dyadic(1.0, 2..=4);
    let a = decay_profile(DecayEngine::Analytic, 0.0, &p, &x0s).unwrap();
    let b = decay_profile(DecayEngine::AnalyticDifferences, 0.0, &p, &x0s).unwrap();
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        // Steps of x0/100 against a log-slope of order ln(K/x0)/σ².
        let slope = libm::log(1.0 / ra.x0) / 0.04;
        let rel = 0.5 * (slope / 100.0) * (slope / 100.0);
        assert!(((rb.total() - ra.total()) / ra.total()).abs() < rel.max(1e-3), "x0 = {}", ra.x0);
    }
}

#[test]
fn decay_profile_rejects_bad_points() {
    let p = reduced(0.2, 1.0, 1.0);
    assert!(decay_profile(DecayEngine::Analytic, 0.0, &p, &[2.0 / 3.0]).is_err());
    assert!(decay_profile(DecayEngine::Analytic, 0.0, &p, &[0.1, 0.2]).is_err());
    assert!(decay_profile(DecayEngine::Analytic, 1.0, &p, &[0.1]).is_err());
    assert!(decay_profile(DecayEngine::Analytic, 0.0, &reduced(0.2, 1.0, -1.0), &[0.1]).is_err());
}

#[test]
fn envelope_fitted_on_coarse_half_covers_fine_half() {
    let p = reduced(0.2, 1.0, 1.0);
    let x0s = dyadic(1.0, 4..=10);
    for t0 in [0.0, 0.2, 0.4, 0.6, 0.8] {
        let prof = decay_profile(DecayEngine::Analytic, t0, &p, &x0s).unwrap();
        let coarse: Vec<(f64, f64)> = prof.rows[..3].iter().map(|r| (r.x0, r.total())).collect();
        let n = fit_envelope(&coarse).unwrap();
        for r in &prof.rows[3..] {
            assert!(r.total() <= envelope(n, r.x0), "t0 = {t0}, x0 = {}", r.x0);
        }
    }
}

#[test]
fn envelope_fit_is_tight() {
    let pts = [(0.1, 1e-3), (0.05, 1e-6)];
    let n = fit_envelope(&pts).unwrap();
    assert!(pts.iter().all(|&(x, s)| s <= envelope(n, x) * (1.0 + 1e-9)));
    assert!(pts.iter().any(|&(x, s)| (envelope(n, x) / s - 1.0).abs() < 1e-9));
}

#[test]
fn vanishing_region_closed_form_and_mc() {
    let p = reduced(0.2, 1.0, 1.0);
    let samples = vanishing_samples(&p, 100, -2.0);
    assert!(samples.iter().all(|&(t, x)| (0.0..1.0).contains(&t) && (-2.0..=0.0).contains(&x)));
    let report = vanishing_region_check(closed_form(p), &p, &samples, 0.0).unwrap();
    assert_eq!(report.violations, 0);

    let drift = StepDrift::zero(1.0);
    let est = price_mc(0.0, -1.0, &drift, &p, PathConfig::new(10_000, 1)).unwrap();
    assert_eq!((est.mean, est.std_error), (0.0, 0.0));
    assert!(vanishing_region_check(closed_form(p), &reduced(0.2, 1.0, -1.0), &samples, 0.0).is_err());
}

#[test]
fn vanishing_region_pde() {
    let p = reduced(0.2, 1.0, 1.0);
    let sol = solve_backward(&StepDrift::zero(1.0), &p, &SolverConfig::new(256, 128).with_nodes(&[-0.5])).unwrap();
    assert!(sol.get_u(0.0, -0.5).unwrap().abs() <= 1e-8);
    let samples = vanishing_samples(&p, 100, -1.0);
    let report = vanishing_region_check(|t, x| Ok(EngineValue::exact(sol.get_u(t, x)?)), &p, &samples, 1e-8).unwrap();
    assert_eq!(report.violations, 0);
}

#[test]
fn gaussian_tail_quadrature() {
    let one = gaussian_tail_integral(1.0).unwrap();
    let oracle = libm::sqrt(PI / 2.0) * libm::erfc(1.0 / core::f64::consts::SQRT_2);
    assert!((one - oracle).abs() < 1e-12);
    assert!((one - 0.3976).abs() < 1e-4);
    let report = gaussian_tail_check(&log_spaced(1e-3, 10.0, 50)).unwrap();
    assert_eq!(report.violations(), 0);
    let last = report.rows[49];
    assert!((last.alpha - 10.0).abs() < 1e-12);
    assert!(last.ratio() >= 0.98 && last.ratio() < 1.0);
    assert!(report.rows[0].rhs > 700.0 * report.rows[0].lhs);
    assert!((report.min_margin() - (1.0 - last.ratio())).abs() < 1e-15);
    assert!(gaussian_tail_check(&[1.0, 0.0]).is_err());
}

#[test]
fn log_spacing_hits_endpoints() {
    let v = log_spaced(1e-3, 10.0, 50);
    assert_eq!(v.len(), 50);
    assert_eq!(v[0], 1e-3);
    assert_eq!(v[49], 10.0);
    assert_eq!(log_spaced(2.0, 3.0, 1), vec![2.0]);
}

#[test]
fn pde_decay_profile_tracks_closed_form_where_resolved() {
    let p = reduced(0.5, 1.0, 1.0);
    let x0s = dyadic(1.0, 2..=8);
    let sol = solve_backward(&StepDrift::zero(1.0), &p, &SolverConfig::new(1024, 1024).with_nodes(&x0s)).unwrap();
    let a = decay_profile(DecayEngine::Analytic, 0.0, &p, &x0s).unwrap();
    let b = decay_profile(DecayEngine::Pde(&sol), 0.0, &p, &x0s).unwrap();
    // Relative agreement holds while the values stay within a few decades of
    // the grid's accuracy; deeper in the tail the scheme only keeps the decay.
    for (ra, rb) in a.rows.iter().zip(&b.rows).take(2) {
        for (x, y) in [(ra.x_vx, rb.x_vx), (ra.x2_vxx, rb.x2_vxx), (ra.vt, rb.vt)] {
            assert!(((y - x) / x).abs() < 0.05, "x0 = {}: {y} vs {x}", ra.x0);
        }
    }
    assert!(b.monotone_from(0));
}
