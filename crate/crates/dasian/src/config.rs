//! Sectioned key-value run configuration.
//!
//! ```text
//! [market]
//! sigma = 0.2
//! r = 0
//! T = 1
//! K = 0.8
//! x0 = 1
//!
//! [sampling]
//! atom = 0.5, 0.5
//! atom = 1.0, 0.5
//!
//! [engines]
//! enabled = analytic, cascade, mc, pde
//! ```
//!
//! `#` starts a comment. Repeated `atom` and `dividend` lines are kept in
//! file order; every other key may appear once.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use dasian_core::analytic::CascadeConfig;
use dasian_core::market::{compute_b, DividendMeasure, MarketParams, StepDrift, WeightingMeasure};
use dasian_core::mc::{PathConfig, Scheme};
use dasian_core::pde::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EngineKind {
    Analytic,
    Cascade,
    Mc,
    Pde,
}

impl EngineKind {
    pub const ALL: [EngineKind; 4] = [EngineKind::Analytic, EngineKind::Cascade, EngineKind::Mc, EngineKind::Pde];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Analytic => "analytic",
            EngineKind::Cascade => "cascade",
            EngineKind::Mc => "mc",
            EngineKind::Pde => "pde",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketSection {
    pub sigma: f64,
    pub rate: f64,
    pub maturity: f64,
    pub strike: f64,
    /// Spot at which prices are reported.
    pub x0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSection {
    pub paths: u64,
    pub seed: u64,
    pub antithetic: bool,
    /// 0 selects the exact piecewise scheme, otherwise Euler substeps per
    /// sampling interval.
    pub euler_steps: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeSection {
    pub m: usize,
    pub n: usize,
    pub theta: f64,
    pub rannacher: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeSection {
    pub nodes: usize,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeSection {
    pub levels: Vec<usize>,
    /// Fixed space resolution; `None` doubles M together with N.
    pub m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySection {
    pub n_t: usize,
    pub n_x: usize,
    pub mc_paths: u64,
    pub noise_sds: f64,
    pub tail_samples: usize,
    pub vanishing_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub market: MarketSection,
    pub atoms: Vec<(f64, f64)>,
    pub dividends: Vec<(f64, f64)>,
    pub engines: Vec<EngineKind>,
    pub mc: McSection,
    pub pde: PdeSection,
    pub cascade: CascadeSection,
    pub converge: ConvergeSection,
    pub verify: VerifySection,
    pub out: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line; 0 when the problem is a missing entry.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

const SECTIONS: [(&str, &[&str]); 9] = [
    ("market", &["sigma", "r", "T", "K", "x0"]),
    ("sampling", &["atom", "dividend"]),
    ("engines", &["enabled"]),
    ("mc", &["paths", "seed", "antithetic", "euler_steps"]),
    ("pde", &["M", "N", "theta", "rannacher"]),
    ("cascade", &["nodes", "order"]),
    ("converge", &["levels", "M"]),
    ("verify", &["n_t", "n_x", "mc_paths", "noise_sds", "tail_samples", "vanishing_samples"]),
    ("report", &["out"]),
];

const REPEATABLE: [&str; 2] = ["atom", "dividend"];

struct Entry {
    line: usize,
    value: String,
}

struct Raw {
    single: HashMap<(String, String), Entry>,
    repeated: HashMap<String, Vec<Entry>>,
}

fn lex(text: &str, errors: &mut Vec<ConfigError>) -> Raw {
    let mut raw = Raw { single: HashMap::new(), repeated: HashMap::new() };
    let mut section: Option<&str> = None;
    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let content = full.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            match SECTIONS.iter().find(|(s, _)| *s == name) {
                Some((s, _)) => section = Some(s),
                None => {
                    errors.push(ConfigError { line, message: format!("unknown section [{name}]") });
                    section = None;
                }
            }
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            errors.push(ConfigError { line, message: format!("expected `key = value`, found `{content}`") });
            continue;
        };
        let (key, value) = (key.trim(), value.trim().to_string());
        let Some(sec) = section else {
            errors.push(ConfigError { line, message: format!("key `{key}` outside a known section") });
            continue;
        };
        let keys = SECTIONS.iter().find(|(s, _)| *s == sec).unwrap().1;
        if !keys.contains(&key) {
            errors.push(ConfigError { line, message: format!("unknown key `{key}` in [{sec}]") });
            continue;
        }
        if REPEATABLE.contains(&key) {
            raw.repeated.entry(key.to_string()).or_default().push(Entry { line, value });
            continue;
        }
        let slot = (sec.to_string(), key.to_string());
        if let Some(prev) = raw.single.get(&slot) {
            errors.push(ConfigError {
                line,
                message: format!("duplicate key `{key}` in [{sec}] (first on line {})", prev.line),
            });
            continue;
        }
        raw.single.insert(slot, Entry { line, value });
    }
    raw
}

struct Reader<'a> {
    raw: &'a Raw,
    errors: &'a mut Vec<ConfigError>,
}

impl Reader<'_> {
    fn entry(&self, sec: &str, key: &str) -> Option<&Entry> {
        self.raw.single.get(&(sec.to_string(), key.to_string()))
    }

    fn line(&self, sec: &str, key: &str) -> usize {
        self.entry(sec, key).map_or(0, |e| e.line)
    }

    fn fail(&mut self, line: usize, message: String) {
        self.errors.push(ConfigError { line, message });
    }

    fn parsed<T: std::str::FromStr>(&mut self, sec: &str, key: &str, what: &str) -> Option<T> {
        let entry = self.entry(sec, key)?;
        let (line, value) = (entry.line, entry.value.clone());
        match value.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(line, format!("`{key}` must be {what}, found `{value}`"));
                None
            }
        }
    }

    fn required_f64(&mut self, sec: &str, key: &str) -> f64 {
        if self.entry(sec, key).is_none() {
            self.fail(0, format!("missing required `{key}` in [{sec}]"));
            return f64::NAN;
        }
        self.parsed(sec, key, "a number").unwrap_or(f64::NAN)
    }

    fn f64_or(&mut self, sec: &str, key: &str, default: f64) -> f64 {
        self.parsed(sec, key, "a number").unwrap_or(default)
    }

    fn int_or<T: std::str::FromStr>(&mut self, sec: &str, key: &str, default: T) -> T {
        self.parsed(sec, key, "a nonnegative integer").unwrap_or(default)
    }

    fn check(&mut self, ok: bool, sec: &str, key: &str, message: &str) {
        if !ok {
            let line = self.line(sec, key);
            self.fail(line, message.to_string());
        }
    }
}

fn parse_pair(value: &str) -> Option<(f64, f64)> {
    let (a, b) = value.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            market: MarketSection { sigma: 0.2, rate: 0.0, maturity: 1.0, strike: 1.0, x0: 1.0 },
            atoms: Vec::new(),
            dividends: Vec::new(),
            engines: vec![EngineKind::Analytic],
            mc: McSection { paths: 1_000_000, seed: 1, antithetic: false, euler_steps: 0 },
            pde: PdeSection { m: 512, n: 512, theta: 0.5, rannacher: 4 },
            cascade: CascadeSection { nodes: 512, order: 64 },
            converge: ConvergeSection { levels: vec![64, 128, 256, 512], m: Some(4096) },
            verify: VerifySection {
                n_t: 20,
                n_x: 20,
                mc_paths: 100_000,
                noise_sds: 3.0,
                tail_samples: 50,
                vanishing_samples: 100,
            },
            out: None,
        }
    }
}

/// Parses and validates a configuration, collecting every problem found.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let raw = lex(text, &mut errors);
    let d = RunConfig::default();
    let mut r = Reader { raw: &raw, errors: &mut errors };

    let market = MarketSection {
        sigma: r.required_f64("market", "sigma"),
        rate: r.f64_or("market", "r", d.market.rate),
        maturity: r.required_f64("market", "T"),
        strike: r.required_f64("market", "K"),
        x0: f64::NAN,
    };
    let x0 = r.f64_or("market", "x0", market.strike);
    let market = MarketSection { x0, ..market };
    r.check(
        market.sigma > 0.0 && market.sigma.is_finite() || market.sigma.is_nan(),
        "market",
        "sigma",
        "sigma must be positive",
    );
    r.check(
        market.maturity > 0.0 && market.maturity.is_finite() || market.maturity.is_nan(),
        "market",
        "T",
        "T must be positive",
    );
    r.check(market.rate.is_finite(), "market", "r", "r must be finite");
    r.check(market.strike.is_finite() || market.strike.is_nan(), "market", "K", "K must be finite");
    r.check(market.x0.is_finite() || market.x0.is_nan(), "market", "x0", "x0 must be finite");

    let mut atoms = Vec::new();
    let mut prev_t = f64::NEG_INFINITY;
    for e in raw.repeated.get("atom").map(Vec::as_slice).unwrap_or(&[]) {
        match parse_pair(&e.value) {
            None => r.fail(e.line, format!("atom must be `t, alpha`, found `{}`", e.value)),
            Some((t, a)) => {
                if t <= prev_t {
                    r.fail(e.line, format!("atoms out of order: t = {t} does not follow t = {prev_t}"));
                }
                if !(t > 0.0 && (market.maturity.is_nan() || t <= market.maturity)) {
                    r.fail(e.line, format!("atom time {t} must lie in (0, T]"));
                }
                if !(a > 0.0 && a.is_finite()) {
                    r.fail(e.line, format!("atom weight {a} must be positive"));
                }
                prev_t = t;
                atoms.push((t, a));
            }
        }
    }
    let mut dividends = Vec::new();
    for e in raw.repeated.get("dividend").map(Vec::as_slice).unwrap_or(&[]) {
        match parse_pair(&e.value) {
            None => r.fail(e.line, format!("dividend must be `t, mass`, found `{}`", e.value)),
            Some((t, m)) => {
                if !(t >= 0.0 && (market.maturity.is_nan() || t <= market.maturity)) {
                    r.fail(e.line, format!("dividend time {t} must lie in [0, T]"));
                }
                if !(m >= 0.0 && m.is_finite()) {
                    r.fail(e.line, format!("dividend mass {m} must be nonnegative"));
                }
                dividends.push((t, m));
            }
        }
    }
    if atoms.is_empty() && !dividends.is_empty() {
        let line = raw.repeated["dividend"][0].line;
        r.fail(line, "dividends need at least one sampling atom".to_string());
    }

    let mut engines = Vec::new();
    match r.entry("engines", "enabled") {
        None => r.fail(0, "missing required `enabled` in [engines]".to_string()),
        Some(e) => {
            let (line, value) = (e.line, e.value.clone());
            for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match EngineKind::parse(name) {
                    Some(k) if !engines.contains(&k) => engines.push(k),
                    Some(_) => r.fail(line, format!("engine `{name}` listed twice")),
                    None => r.fail(line, format!("unknown engine `{name}` (expected analytic, cascade, mc, pde)")),
                }
            }
            if engines.is_empty() {
                r.fail(line, "at least one engine must be enabled".to_string());
            }
        }
    }

    let antithetic = match r.entry("mc", "antithetic").map(|e| (e.line, e.value.clone())) {
        None => d.mc.antithetic,
        Some((_, v)) if v == "true" => true,
        Some((_, v)) if v == "false" => false,
        Some((line, v)) => {
            r.fail(line, format!("`antithetic` must be true or false, found `{v}`"));
            false
        }
    };
    let mc = McSection {
        paths: r.int_or("mc", "paths", d.mc.paths),
        seed: r.int_or("mc", "seed", d.mc.seed),
        antithetic,
        euler_steps: r.int_or("mc", "euler_steps", d.mc.euler_steps),
    };
    r.check(mc.paths >= 1, "mc", "paths", "paths must be at least 1");
    r.check(!mc.antithetic || mc.paths.is_multiple_of(2), "mc", "paths", "paths must be even with antithetic pairing");

    let pde = PdeSection {
        m: r.int_or("pde", "M", d.pde.m),
        n: r.int_or("pde", "N", d.pde.n),
        theta: r.f64_or("pde", "theta", d.pde.theta),
        rannacher: r.int_or("pde", "rannacher", d.pde.rannacher),
    };
    r.check(pde.m >= 16, "pde", "M", "M must be at least 16");
    r.check(pde.n >= 4, "pde", "N", "N must be at least 4");
    r.check((0.5..=1.0).contains(&pde.theta), "pde", "theta", "theta must lie in [0.5, 1]");

    let cascade = CascadeSection {
        nodes: r.int_or("cascade", "nodes", d.cascade.nodes),
        order: r.int_or("cascade", "order", d.cascade.order),
    };
    r.check(cascade.nodes >= 64, "cascade", "nodes", "nodes must be at least 64");
    r.check(cascade.order >= 8, "cascade", "order", "order must be at least 8");

    let levels = match r.entry("converge", "levels").map(|e| (e.line, e.value.clone())) {
        None => d.converge.levels.clone(),
        Some((line, v)) => {
            let parsed: Result<Vec<usize>, _> = v.split(',').map(|s| s.trim().parse::<usize>()).collect();
            match parsed {
                Ok(ls) if !ls.is_empty() && ls.iter().all(|&n| n >= 4) && ls.windows(2).all(|w| w[0] < w[1]) => ls,
                _ => {
                    r.fail(line, format!("`levels` must be increasing integers >= 4, found `{v}`"));
                    Vec::new()
                }
            }
        }
    };
    let conv_m = match r.entry("converge", "M").map(|e| e.value.clone()) {
        None => d.converge.m,
        Some(v) if v == "N" => None,
        Some(_) => r.parsed::<usize>("converge", "M", "an integer or `N`"),
    };
    r.check(conv_m.is_none_or(|m| m >= 16), "converge", "M", "M must be at least 16");
    let converge = ConvergeSection { levels, m: conv_m };

    let verify = VerifySection {
        n_t: r.int_or("verify", "n_t", d.verify.n_t),
        n_x: r.int_or("verify", "n_x", d.verify.n_x),
        mc_paths: r.int_or("verify", "mc_paths", d.verify.mc_paths),
        noise_sds: r.f64_or("verify", "noise_sds", d.verify.noise_sds),
        tail_samples: r.int_or("verify", "tail_samples", d.verify.tail_samples),
        vanishing_samples: r.int_or("verify", "vanishing_samples", d.verify.vanishing_samples),
    };
    r.check(verify.n_t >= 1, "verify", "n_t", "n_t must be at least 1");
    r.check(verify.n_x >= 2, "verify", "n_x", "n_x must be at least 2");
    r.check(verify.mc_paths >= 2, "verify", "mc_paths", "mc_paths must be at least 2");
    r.check(verify.noise_sds >= 0.0, "verify", "noise_sds", "noise_sds must be nonnegative");
    r.check(verify.tail_samples >= 2, "verify", "tail_samples", "tail_samples must be at least 2");
    r.check(verify.vanishing_samples >= 1, "verify", "vanishing_samples", "vanishing_samples must be at least 1");

    let out = r.entry("report", "out").map(|e| e.value.clone());

    if errors.is_empty() {
        let cfg = RunConfig { market, atoms, dividends, engines, mc, pde, cascade, converge, verify, out };
        // Remaining constraints come from the model itself (e.g. drift levels
        // that fail to decrease).
        if let Err(e) = cfg.drift() {
            return Err(ConfigErrors(vec![ConfigError { line: 0, message: format!("sampling: {e}") }]));
        }
        Ok(cfg)
    } else {
        errors.sort_by_key(|e| e.line);
        Err(ConfigErrors(errors))
    }
}

fn fmt_list<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Canonical text form; `parse_config(&serialize(c)) == Ok(c)`.
pub fn serialize(cfg: &RunConfig) -> String {
    let mut s = String::new();
    let m = &cfg.market;
    // `{:?}` prints the shortest representation that parses back exactly.
    let _ = writeln!(
        s,
        "[market]\nsigma = {:?}\nr = {:?}\nT = {:?}\nK = {:?}\nx0 = {:?}\n",
        m.sigma, m.rate, m.maturity, m.strike, m.x0
    );
    s.push_str("[sampling]\n");
    for (t, a) in &cfg.atoms {
        let _ = writeln!(s, "atom = {t:?}, {a:?}");
    }
    for (t, a) in &cfg.dividends {
        let _ = writeln!(s, "dividend = {t:?}, {a:?}");
    }
    let names: Vec<&str> = cfg.engines.iter().map(|e| e.name()).collect();
    let _ = writeln!(s, "\n[engines]\nenabled = {}\n", names.join(", "));
    let _ = writeln!(
        s,
        "[mc]\npaths = {}\nseed = {}\nantithetic = {}\neuler_steps = {}\n",
        cfg.mc.paths, cfg.mc.seed, cfg.mc.antithetic, cfg.mc.euler_steps
    );
    let _ = writeln!(
        s,
        "[pde]\nM = {}\nN = {}\ntheta = {:?}\nrannacher = {}\n",
        cfg.pde.m, cfg.pde.n, cfg.pde.theta, cfg.pde.rannacher
    );
    let _ = writeln!(s, "[cascade]\nnodes = {}\norder = {}\n", cfg.cascade.nodes, cfg.cascade.order);
    let conv_m = cfg.converge.m.map_or("N".to_string(), |m| m.to_string());
    let _ = writeln!(s, "[converge]\nlevels = {}\nM = {}\n", fmt_list(&cfg.converge.levels), conv_m);
    let v = &cfg.verify;
    let _ = writeln!(
        s,
        "[verify]\nn_t = {}\nn_x = {}\nmc_paths = {}\nnoise_sds = {:?}\ntail_samples = {}\nvanishing_samples = {}",
        v.n_t, v.n_x, v.mc_paths, v.noise_sds, v.tail_samples, v.vanishing_samples
    );
    if let Some(out) = &cfg.out {
        let _ = writeln!(s, "\n[report]\nout = {out}");
    }
    s
}

impl RunConfig {
    pub fn params(&self) -> dasian_core::Result<MarketParams> {
        let m = &self.market;
        MarketParams::new(m.sigma, m.rate, m.maturity, m.strike)
    }

    /// `b` built from the sampling section; `b ≡ 0` without atoms.
    pub fn drift(&self) -> dasian_core::Result<StepDrift> {
        let params = self.params()?;
        if self.atoms.is_empty() {
            return Ok(StepDrift::zero(params.maturity));
        }
        let mu = WeightingMeasure::atomic(self.atoms.clone(), params.maturity)?;
        let nu = if self.dividends.is_empty() {
            DividendMeasure::zero()
        } else {
            DividendMeasure::new(self.dividends.clone(), None, params.maturity)?
        };
        compute_b(&params, &nu, &mu)
    }

    pub fn has(&self, engine: EngineKind) -> bool {
        self.engines.contains(&engine)
    }

    pub fn path_config(&self, n_paths: u64) -> PathConfig {
        let mut p = PathConfig::new(n_paths, self.mc.seed);
        p.antithetic = self.mc.antithetic && n_paths.is_multiple_of(2);
        if self.mc.euler_steps > 0 {
            p.scheme = Scheme::Euler;
            p.euler_steps_per_interval = self.mc.euler_steps;
        }
        p
    }

    pub fn solver_config(&self, m: usize, n: usize) -> SolverConfig {
        let mut s = SolverConfig::new(m, n);
        s.theta = self.pde.theta;
        s.rannacher_steps = self.pde.rannacher;
        s
    }

    pub fn cascade_config(&self) -> CascadeConfig {
        CascadeConfig {
            nodes_per_stage: self.cascade.nodes,
            quad_order: self.cascade.order,
            ..CascadeConfig::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str =
        "[market]\nsigma = 0.2\nT = 1\nK = 1\n\n[sampling]\natom = 1, 1\n\n[engines]\nenabled = analytic\n";

    #[test]
    fn minimal_config_parses() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.market.sigma, 0.2);
        assert_eq!(cfg.market.rate, 0.0);
        assert_eq!(cfg.market.x0, 1.0);
        assert_eq!(cfg.atoms, vec![(1.0, 1.0)]);
        assert_eq!(cfg.engines, vec![EngineKind::Analytic]);
        let drift = cfg.drift().unwrap();
        assert_eq!(drift.levels(), &[1.0, 0.0]);
    }

    #[test]
    fn atoms_out_of_order_name_the_line() {
        let text = "[market]\nsigma = 0.2\nT = 1\nK = 1\n[sampling]\natom = 0.5, 0.5\natom = 0.25, 0.5\n[engines]\nenabled = mc\n";
        let err = parse_config(text).unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!(err.0[0].line, 7);
        assert!(err.0[0].message.contains("out of order"));
    }

    #[test]
    fn negative_sigma_is_rejected() {
        let text = MINIMAL.replace("sigma = 0.2", "sigma = -0.1");
        let err = parse_config(&text).unwrap_err();
        assert_eq!(err.0[0].line, 2);
        assert!(err.0[0].message.contains("sigma must be positive"));
        assert!(err.to_string().starts_with("line 2: sigma must be positive"));
    }

    #[test]
    fn collects_several_errors() {
        let text = "[market]\nsigma = x\nT = 1\nfoo = 2\n[nope]\n[engines]\nenabled = analytic, warp\n";
        let err = parse_config(text).unwrap_err();
        let lines: Vec<usize> = err.0.iter().map(|e| e.line).collect();
        assert!(lines.contains(&0), "missing K reported");
        assert!(lines.contains(&2) && lines.contains(&4) && lines.contains(&5) && lines.contains(&7), "{err}");
    }

    #[test]
    fn duplicate_and_missing_entries() {
        let text = MINIMAL.replace("T = 1\n", "T = 1\nT = 2\n");
        assert!(parse_config(&text).unwrap_err().0[0].message.contains("duplicate"));
        let text = MINIMAL.replace("[engines]\nenabled = analytic\n", "");
        assert!(parse_config(&text).unwrap_err().0[0].message.contains("enabled"));
        let text = MINIMAL.replace("enabled = analytic", "enabled = ");
        assert!(parse_config(&text).is_err());
    }

    #[test]
    fn comments_and_defaults() {
        let text = format!("# run\n{MINIMAL}[mc]\nseed = 9 # override\n[converge]\nM = N\n");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.mc.seed, 9);
        assert_eq!(cfg.converge.m, None);
        assert_eq!(cfg.pde.m, 512);
    }

    #[test]
    fn serialize_round_trips() {
        let mut cfg = parse_config(MINIMAL).unwrap();
        cfg.atoms = vec![(0.5, 0.5), (1.0, 0.5)];
        cfg.dividends = vec![(0.25, 0.01)];
        cfg.engines = vec![EngineKind::Pde, EngineKind::Mc];
        cfg.out = Some("results".into());
        cfg.market.x0 = 0.1 + 0.2;
        let text = serialize(&cfg);
        assert_eq!(parse_config(&text).unwrap(), cfg);
    }
}
