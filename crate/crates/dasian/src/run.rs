//! The `price`, `converge` and `verify` runs.

use std::path::Path;
use std::time::Instant;

use dasian_core::analytic::{cascade_price, gbm_call, v_reduced};
use dasian_core::market::{MarketParams, StepDrift};
use dasian_core::mc::{PathConfig, PathSimulator};
use dasian_core::pde::{price_pde, solve_backward, TimeAlignment};
use dasian_core::regularity::{
    check_bound, decay_profile, envelope, fit_envelope, gaussian_tail_check, log_spaced, vanishing_region_check,
    vanishing_samples, BoundReport, BoundVariant, DecayEngine, DecayProfile, EngineValue, TailReport, VanishingReport,
};
use rayon::prelude::*;

use crate::config::{EngineKind, RunConfig};
use crate::parallel;
use crate::report::{flag, num, write_text, Table};
use crate::AppError;

/// Relative PDE tolerance against a deterministic reference.
pub const PDE_REL_TOL: f64 = 0.01;
/// Relative cascade tolerance against the closed form.
pub const CASCADE_REL_TOL: f64 = 1e-6;
/// Standard errors allowed between a Monte Carlo price and anything else.
pub const MC_SDS: f64 = 3.0;
/// Absolute floor under every pairwise tolerance.
pub const ABS_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum EngineOutcome {
    Price { value: f64, std_error: Option<f64> },
    Skipped(String),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineResult {
    pub engine: EngineKind,
    pub outcome: EngineOutcome,
    pub seconds: f64,
}

impl EngineResult {
    fn price(&self) -> Option<(f64, Option<f64>)> {
        match self.outcome {
            EngineOutcome::Price { value, std_error } => Some((value, std_error)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCheck {
    pub a: EngineKind,
    pub b: EngineKind,
    pub diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceReport {
    pub x0: f64,
    pub results: Vec<EngineResult>,
    pub pairs: Vec<PairCheck>,
    pub warnings: Vec<String>,
}

impl PriceReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.pass) && !self.results.iter().any(|r| matches!(r.outcome, EngineOutcome::Failed(_)))
    }

    pub fn price_table(&self) -> Table {
        let mut t = Table::new(&["engine", "t", "x", "price", "std_error", "status", "note"]);
        for r in &self.results {
            let (price, se, status, note) = match &r.outcome {
                EngineOutcome::Price { value, std_error } => {
                    (num(*value), std_error.map_or(String::new(), num), "ok", String::new())
                }
                EngineOutcome::Skipped(why) => (String::new(), String::new(), "skipped", why.clone()),
                EngineOutcome::Failed(why) => (String::new(), String::new(), "failed", why.clone()),
            };
            t.push(vec![r.engine.name().into(), num(0.0), num(self.x0), price, se, status.into(), note]);
        }
        t
    }

    pub fn pairs_table(&self) -> Table {
        let mut t = Table::new(&["engine_a", "engine_b", "abs_diff", "tolerance", "status"]);
        for p in &self.pairs {
            t.push(vec![p.a.name().into(), p.b.name().into(), num(p.diff), num(p.tolerance), flag(p.pass).into()]);
        }
        t
    }

    pub fn summary(&self) -> String {
        let mut s = format!("price at t = 0, x = {}\n", num(self.x0));
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        for r in &self.results {
            let line = match &r.outcome {
                EngineOutcome::Price { value, std_error: Some(se) } => format!("{} ± {}", num(*value), num(*se)),
                EngineOutcome::Price { value, std_error: None } => num(*value),
                EngineOutcome::Skipped(why) => format!("skipped: {why}"),
                EngineOutcome::Failed(why) => format!("failed: {why}"),
            };
            s.push_str(&format!("  {:<9} {}  ({:.3} s)\n", r.engine.name(), line, r.seconds));
        }
        for p in &self.pairs {
            s.push_str(&format!(
                "  {} vs {}: |diff| = {} tol = {} {}\n",
                p.a.name(),
                p.b.name(),
                num(p.diff),
                num(p.tolerance),
                if p.pass { "green" } else { "red" }
            ));
        }
        s.push_str(&format!("result: {}\n", flag(self.passed())));
        s
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        self.price_table().write(dir, "price.csv")?;
        self.pairs_table().write(dir, "price_pairs.csv")?;
        write_text(dir, "summary.txt", &self.summary())?;
        Ok(())
    }
}

/// Closed form for drifts constant on all of `[0, T]`, where `X − β` is
/// geometric Brownian. `None` when the drift has interior breakpoints.
pub fn analytic_price(t: f64, x: f64, drift: &StepDrift, params: &MarketParams) -> Option<dasian_core::Result<f64>> {
    let tau = params.maturity - t;
    match drift.breakpoints() {
        [] => Some(gbm_call(x, params.strike, params.sigma, tau)),
        [tb] if *tb == params.maturity => {
            let beta = drift.levels()[0];
            Some(gbm_call(x - beta, params.strike - beta, params.sigma, tau))
        }
        _ => None,
    }
}

fn run_engine(engine: EngineKind, cfg: &RunConfig, drift: &StepDrift, params: &MarketParams) -> EngineResult {
    let start = Instant::now();
    let x = cfg.market.x0;
    let outcome = match engine {
        EngineKind::Analytic => match analytic_price(0.0, x, drift, params) {
            None => EngineOutcome::Skipped("closed form needs a drift constant on [0, T]".into()),
            Some(Ok(v)) => EngineOutcome::Price { value: v, std_error: None },
            Some(Err(e)) => EngineOutcome::Failed(e.to_string()),
        },
        EngineKind::Cascade => match cascade_price(0.0, x, drift, params, cfg.cascade_config()) {
            Ok(v) => EngineOutcome::Price { value: v, std_error: None },
            Err(e) => EngineOutcome::Failed(e.to_string()),
        },
        EngineKind::Mc => match parallel::price_mc(0.0, x, drift, params, cfg.path_config(cfg.mc.paths)) {
            Ok(est) => EngineOutcome::Price { value: est.mean, std_error: Some(est.std_error) },
            Err(e) => EngineOutcome::Failed(e.to_string()),
        },
        EngineKind::Pde => match price_pde(0.0, x, drift, params, &cfg.solver_config(cfg.pde.m, cfg.pde.n)) {
            Ok(v) => EngineOutcome::Price { value: v, std_error: None },
            Err(e) => EngineOutcome::Failed(e.to_string()),
        },
    };
    EngineResult { engine, outcome, seconds: start.elapsed().as_secs_f64() }
}

/// Tolerance for `|a − b|`: Monte Carlo noise if either side is random,
/// otherwise a relative tolerance set by the less accurate engine.
pub fn pair_tolerance(a: (EngineKind, f64, Option<f64>), b: (EngineKind, f64, Option<f64>)) -> f64 {
    let se = a.2.unwrap_or(0.0).hypot(b.2.unwrap_or(0.0));
    if se > 0.0 || a.0 == EngineKind::Mc || b.0 == EngineKind::Mc {
        return MC_SDS * se + ABS_FLOOR;
    }
    let scale = a.1.abs().max(b.1.abs());
    let rel = if a.0 == EngineKind::Pde || b.0 == EngineKind::Pde { PDE_REL_TOL } else { CASCADE_REL_TOL };
    rel * scale + ABS_FLOOR
}

pub fn run_price(cfg: &RunConfig) -> Result<PriceReport, AppError> {
    let params = cfg.params()?;
    let drift = cfg.drift()?;
    let mut warnings = Vec::new();
    if let Some(split) = drift.degenerate_split(params.strike) {
        warnings.push(format!(
            "K = b(T) = {}: degenerate case, u(t, x) = (x - K)+ on [T', T] with T' = {}",
            num(params.strike),
            num(split)
        ));
    }
    let results: Vec<EngineResult> = cfg.engines.par_iter().map(|&e| run_engine(e, cfg, &drift, &params)).collect();
    let mut pairs = Vec::new();
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            if let (Some(a), Some(b)) = (results[i].price(), results[j].price()) {
                let tol = pair_tolerance((results[i].engine, a.0, a.1), (results[j].engine, b.0, b.1));
                let diff = (a.0 - b.0).abs();
                pairs.push(PairCheck {
                    a: results[i].engine,
                    b: results[j].engine,
                    diff,
                    tolerance: tol,
                    pass: diff <= tol,
                });
            }
        }
    }
    Ok(PriceReport { x0: cfg.market.x0, results, pairs, warnings })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub m: usize,
    pub price: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub alignment: TimeAlignment,
    pub reference: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["N", "M", "price", "reference", "abs_error"]);
        for r in &self.rows {
            t.push(vec![r.n.to_string(), r.m.to_string(), num(r.price), num(self.reference), num(r.error)]);
        }
        t
    }
}

/// Cascade value at `(0, x₀)`, the reference for convergence tables.
pub fn convergence_reference(cfg: &RunConfig) -> Result<f64, AppError> {
    let params = cfg.params()?;
    Ok(cascade_price(0.0, cfg.market.x0, &cfg.drift()?, &params, cfg.cascade_config())?)
}

pub fn run_convergence(
    cfg: &RunConfig,
    alignment: TimeAlignment,
    reference: f64,
) -> Result<ConvergenceTable, AppError> {
    let params = cfg.params()?;
    let drift = cfg.drift()?;
    let rows = cfg
        .converge
        .levels
        .par_iter()
        .map(|&n| {
            let m = cfg.converge.m.unwrap_or(n);
            let solver = cfg.solver_config(m, n).with_alignment(alignment);
            let price = price_pde(0.0, cfg.market.x0, &drift, &params, &solver)?;
            Ok(ConvergenceRow { n, m, price, error: (price - reference).abs() })
        })
        .collect::<Result<Vec<_>, AppError>>()?;
    Ok(ConvergenceTable { alignment, reference, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub aligned: ConvergenceTable,
    pub misaligned: ConvergenceTable,
    pub seconds: f64,
}

impl ConvergenceReport {
    /// Levels where the aligned error is no larger / strictly smaller.
    pub fn comparison(&self) -> (usize, usize) {
        let pairs = self.aligned.rows.iter().zip(&self.misaligned.rows);
        let not_worse = pairs.clone().filter(|(a, m)| a.error <= m.error).count();
        let better = pairs.filter(|(a, m)| a.error < m.error).count();
        (not_worse, better)
    }

    /// Aligned never worse, strictly better at all but at most one level,
    /// and the finest aligned level within the PDE tolerance.
    pub fn passed(&self) -> bool {
        let n = self.aligned.rows.len();
        let (not_worse, better) = self.comparison();
        let finest =
            self.aligned.rows.last().is_some_and(|r| r.error <= PDE_REL_TOL * self.aligned.reference.abs() + ABS_FLOOR);
        let identical =
            self.aligned == ConvergenceTable { alignment: TimeAlignment::Aligned, ..self.misaligned.clone() };
        finest && (identical || (not_worse == n && better + 1 >= n))
    }

    pub fn summary(&self) -> String {
        let (not_worse, better) = self.comparison();
        let mut s = format!("convergence against cascade reference {}\n", num(self.aligned.reference));
        s.push_str("     N      M  aligned_error      misaligned_error\n");
        for (a, m) in self.aligned.rows.iter().zip(&self.misaligned.rows) {
            s.push_str(&format!("{:>6} {:>6}  {}  {}\n", a.n, a.m, num(a.error), num(m.error)));
        }
        s.push_str(&format!(
            "aligned no worse at {not_worse}/{n} levels, strictly better at {better}/{n}\nelapsed {:.3} s\nresult: {}\n",
            self.seconds,
            flag(self.passed()),
            n = self.aligned.rows.len()
        ));
        s
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        self.aligned.table().write(dir, "convergence_aligned.csv")?;
        self.misaligned.table().write(dir, "convergence_misaligned.csv")?;
        write_text(dir, "summary.txt", &self.summary())?;
        Ok(())
    }
}

pub fn run_convergence_study(cfg: &RunConfig) -> Result<ConvergenceReport, AppError> {
    if !cfg.has(EngineKind::Pde) {
        return Err(AppError::Refused("converge needs the pde engine enabled".into()));
    }
    let start = Instant::now();
    let reference = convergence_reference(cfg)?;
    let aligned = run_convergence(cfg, TimeAlignment::Aligned, reference)?;
    let misaligned = run_convergence(cfg, TimeAlignment::Misaligned, reference)?;
    Ok(ConvergenceReport { aligned, misaligned, seconds: start.elapsed().as_secs_f64() })
}

/// Dyadic decay points `K·2^{−j}`.
pub const DECAY_J: std::ops::RangeInclusive<i32> = 2..=10;
/// First `j` from which profiles must decrease.
pub const DECAY_MONOTONE_FROM: i32 = 4;
/// `j` values used to fit the envelope; larger `j` are verified against it.
pub const DECAY_FIT: [i32; 2] = [4, 5];
/// Smallest acceptable `lhs/rhs` at the largest tail sample.
pub const TAIL_TIGHTNESS: f64 = 0.98;
/// Below this many paths the summary flags the MC tolerance as widened.
pub const WIDE_MC_PATHS: u64 = 100_000;
/// PDE tolerance in the vanishing region.
pub const PDE_VANISHING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub name: &'static str,
    /// `None` when skipped.
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeFit {
    pub t0: f64,
    pub n: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub bounds: Vec<(&'static str, BoundReport)>,
    pub decay: Vec<(&'static str, DecayProfile)>,
    pub envelopes: Vec<EnvelopeFit>,
    pub vanishing: Vec<(&'static str, VanishingReport)>,
    pub tail: TailReport,
    pub suites: Vec<Suite>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed != Some(false))
    }

    pub fn bound_table(&self) -> Table {
        let mut t = Table::new(&[
            "engine",
            "t",
            "x",
            "v",
            "std_error",
            "tolerance",
            "bound_printed",
            "bound_derivation",
            "printed_violation",
            "derivation_violation",
        ]);
        for (engine, report) in &self.bounds {
            for p in &report.points {
                t.push(vec![
                    engine.to_string(),
                    num(p.t),
                    num(p.x),
                    num(p.value.value),
                    num(p.value.std_error),
                    num(report.noise_sds * p.value.std_error),
                    num(p.printed),
                    num(p.derivation),
                    p.printed_violation.to_string(),
                    p.derivation_violation.to_string(),
                ]);
            }
        }
        t
    }

    pub fn decay_table(&self) -> Table {
        let mut t =
            Table::new(&["engine", "t0", "j", "x0", "r", "x0_abs_vx", "x0sq_abs_vxx", "abs_vt", "total", "envelope"]);
        for (engine, prof) in &self.decay {
            let n = self.envelopes.iter().find(|e| e.t0 == prof.t0 && *engine == "analytic").map(|e| e.n);
            for (i, r) in prof.rows.iter().enumerate() {
                t.push(vec![
                    engine.to_string(),
                    num(prof.t0),
                    (DECAY_J.start() + i as i32).to_string(),
                    num(r.x0),
                    num(r.r),
                    num(r.x_vx),
                    num(r.x2_vxx),
                    num(r.vt),
                    num(r.total()),
                    n.map_or(String::new(), |n| num(envelope(n, r.x0))),
                ]);
            }
        }
        t
    }

    pub fn vanishing_table(&self) -> Table {
        let mut t = Table::new(&["engine", "t", "x", "value", "std_error", "tolerance", "violation"]);
        for (engine, rep) in &self.vanishing {
            for (tt, x, v) in &rep.points {
                t.push(vec![
                    engine.to_string(),
                    num(*tt),
                    num(*x),
                    num(v.value),
                    num(v.std_error),
                    num(rep.tolerance),
                    (v.value.abs() > rep.tolerance).to_string(),
                ]);
            }
        }
        t
    }

    pub fn tail_table(&self) -> Table {
        let mut t = Table::new(&["alpha", "lhs", "rhs", "ratio", "holds"]);
        for r in &self.tail.rows {
            t.push(vec![num(r.alpha), num(r.lhs), num(r.rhs), num(r.ratio()), (r.lhs <= r.rhs).to_string()]);
        }
        t
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for suite in &self.suites {
            let status = match suite.passed {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "skipped",
            };
            s.push_str(&format!("{:<10} {:<7} {}\n", suite.name, status, suite.detail));
        }
        s.push_str(&format!("result: {}\n", flag(self.passed())));
        s
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        self.bound_table().write(dir, "bound_report.csv")?;
        self.decay_table().write(dir, "decay_profile.csv")?;
        self.vanishing_table().write(dir, "vanishing_region.csv")?;
        self.tail_table().write(dir, "gaussian_tail.csv")?;
        write_text(dir, "summary.txt", &self.summary())?;
        Ok(())
    }
}

/// Monte Carlo estimate of the reduced `v`: `E (X_T − K)₊` for `K > 0`,
/// `E (K − X_T)₊` for `K < 0`.
pub fn mc_reduced_v(t: f64, x: f64, params: &MarketParams, cfg: PathConfig) -> dasian_core::Result<EngineValue> {
    let sim = PathSimulator::new(t, x, &StepDrift::zero(params.maturity), params.sigma, params.maturity, cfg)?;
    let k = params.strike;
    let est = if k > 0.0 {
        parallel::estimate(&sim, |y| (y - k).max(0.0))
    } else {
        parallel::estimate(&sim, |y| (k - y).max(0.0))
    };
    Ok(EngineValue { value: est.mean, std_error: est.std_error })
}

fn decay_x0s(k: f64) -> Vec<f64> {
    DECAY_J.map(|j| k * 2f64.powi(-j)).collect()
}

/// Runs the regularity suites on the reduced problem (`b ≡ 0`) with the
/// market's σ, T and K.
pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport, AppError> {
    if cfg.market.strike == 0.0 {
        return Err(AppError::Refused(
            "verify needs K != 0: the reduced problem and the bound strip are defined only for nonzero strike".into(),
        ));
    }
    let params = cfg.params()?;
    let k = params.strike;
    let zero = StepDrift::zero(params.maturity);
    let v = &cfg.verify;
    let mut suites = Vec::new();

    // Bound.
    let closed = |t: f64, x: f64| Ok(EngineValue::exact(v_reduced(t, x, &params)?));
    let mut bounds = vec![("analytic", check_bound(closed, &params, v.n_t, v.n_x, 0.0)?)];
    let at_strike_ok = (0..100).all(|i| {
        let t = params.maturity * i as f64 / 100.0;
        v_reduced(t, k, &params).is_ok_and(|val| val >= 0.0 && val <= k.abs())
    });
    let rep = &bounds[0].1;
    suites.push(Suite {
        name: "bound",
        passed: Some(rep.violations(BoundVariant::Derivation) == 0 && rep.negative_values() == 0 && at_strike_ok),
        detail: format!(
            "closed form on {} points: derivation-variant violations {}, printed-variant violations {} (reported only), min derivation margin {}, v(t, K) <= |K|: {}",
            rep.points.len(),
            rep.violations(BoundVariant::Derivation),
            rep.violations(BoundVariant::Printed),
            num(rep.min_margin(BoundVariant::Derivation)),
            at_strike_ok
        ),
    });
    if cfg.has(EngineKind::Mc) {
        let pc = cfg.path_config(v.mc_paths);
        let mc = |t: f64, x: f64| mc_reduced_v(t, x, &params, pc);
        let rep = check_bound(mc, &params, v.n_t, v.n_x, v.noise_sds)?;
        suites.push(Suite {
            name: "bound_mc",
            passed: Some(rep.violations(BoundVariant::Derivation) == 0),
            detail: format!(
                "mc with {} paths per point, tolerance {} standard errors{}: derivation-variant violations {}, printed-variant violations {}",
                v.mc_paths,
                v.noise_sds,
                if v.mc_paths < WIDE_MC_PATHS { " (statistical tolerance widened: few paths)" } else { "" },
                rep.violations(BoundVariant::Derivation),
                rep.violations(BoundVariant::Printed)
            ),
        });
        bounds.push(("mc", rep));
    }

    // Derivative decay.
    let mut decay = Vec::new();
    let mut envelopes = Vec::new();
    if k > 0.0 {
        let x0s = decay_x0s(k);
        let skip = (DECAY_MONOTONE_FROM - DECAY_J.start()) as usize;
        let mut monotone = true;
        for i in 0..5 {
            let t0 = params.maturity * i as f64 / 5.0;
            let prof = decay_profile(DecayEngine::Analytic, t0, &params, &x0s)?;
            monotone &= prof.monotone_from(skip);
            let fit_rows: Vec<(f64, f64)> = DECAY_FIT
                .iter()
                .map(|&j| {
                    let r = &prof.rows[(j - DECAY_J.start()) as usize];
                    (r.x0, r.total())
                })
                .collect();
            let n = fit_envelope(&fit_rows)?;
            let last_fit = (DECAY_FIT[1] - DECAY_J.start()) as usize;
            let holds = prof.rows[last_fit + 1..].iter().all(|r| r.total() <= envelope(n, r.x0));
            envelopes.push(EnvelopeFit { t0, n, holds });
            decay.push(("analytic", prof));
        }
        if cfg.has(EngineKind::Pde) {
            let solver = cfg.solver_config(cfg.pde.m, cfg.pde.n).with_nodes(&x0s);
            let sol = solve_backward(&zero, &params, &solver)?;
            decay.push(("pde", decay_profile(DecayEngine::Pde(&sol), 0.0, &params, &x0s)?));
        }
        let env_ok = envelopes.iter().all(|e| e.holds);
        suites.push(Suite {
            name: "decay",
            passed: Some(monotone && env_ok),
            detail: format!(
                "x0 = K 2^-j, j = {}..{}, t0 in 5-point sweep: monotone from j = {}: {}; envelope N e^(-ln^2 x0 / N) fitted on j = {:?} holds beyond: {} (N at t0 = 0: {})",
                DECAY_J.start(),
                DECAY_J.end(),
                DECAY_MONOTONE_FROM,
                monotone,
                DECAY_FIT,
                env_ok,
                num(envelopes[0].n)
            ),
        });
    } else {
        suites.push(Suite { name: "decay", passed: None, detail: "needs K > 0".into() });
    }

    // Vanishing region.
    let mut vanishing = Vec::new();
    if k > 0.0 {
        let samples = vanishing_samples(&params, v.vanishing_samples, -k);
        vanishing.push(("analytic", vanishing_region_check(closed, &params, &samples, 0.0)?));
        if cfg.has(EngineKind::Mc) {
            let pc = cfg.path_config(v.mc_paths);
            let mc = |t: f64, x: f64| mc_reduced_v(t, x, &params, pc);
            vanishing.push(("mc", vanishing_region_check(mc, &params, &samples, 0.0)?));
        }
        if cfg.has(EngineKind::Pde) {
            let sol = solve_backward(&zero, &params, &cfg.solver_config(cfg.pde.m, cfg.pde.n))?;
            let pde = |t: f64, x: f64| Ok(EngineValue::exact(sol.get_u(t, x)?));
            vanishing.push(("pde", vanishing_region_check(pde, &params, &samples, PDE_VANISHING_TOL)?));
        }
        let bad: usize = vanishing.iter().map(|(_, r)| r.violations).sum();
        let engines: Vec<&str> = vanishing.iter().map(|(e, _)| *e).collect();
        suites.push(Suite {
            name: "vanishing",
            passed: Some(bad == 0),
            detail: format!(
                "{} points with x <= 0 per engine ({}): {} violations",
                samples.len(),
                engines.join(", "),
                bad
            ),
        });
    } else {
        suites.push(Suite { name: "vanishing", passed: None, detail: "needs K > 0".into() });
    }

    // Gaussian tail.
    let tail = gaussian_tail_check(&log_spaced(1e-3, 10.0, v.tail_samples))?;
    let tight = tail.rows.last().map_or(0.0, |r| r.ratio());
    suites.push(Suite {
        name: "tail",
        passed: Some(tail.violations() == 0 && tight >= TAIL_TIGHTNESS),
        detail: format!(
            "{} alphas in [1e-3, 10]: violations {}, lhs/rhs at alpha = 10: {}",
            tail.rows.len(),
            tail.violations(),
            num(tight)
        ),
    });

    Ok(VerifyReport { bounds, decay, envelopes, vanishing, tail, suites })
}
