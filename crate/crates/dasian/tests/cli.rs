use std::path::Path;
use std::process::{Command, Output};

use dasian::config::{parse_config, serialize, EngineKind, RunConfig};
use dasian::run::{run_convergence_study, run_price, run_verify, EngineOutcome};
use dasian::{execute, AppError, Verb};
use proptest::prelude::*;

const TWO_ATOM: &str = "\
[market]
sigma = 0.2
T = 1
K = 0.8
x0 = 1

[sampling]
atom = 0.5, 0.5
atom = 1.0, 0.5

[engines]
enabled = analytic, cascade, mc, pde

[mc]
paths = 100000
seed = 5

[pde]
M = 256
N = 128
";

const REDUCED: &str = "\
[market]
sigma = 0.2
T = 1
K = 1

[engines]
enabled = analytic, cascade, mc, pde

[mc]
paths = 200000

[pde]
M = 256
N = 256

[converge]
levels = 16, 32
M = N

[verify]
n_t = 6
n_x = 6
mc_paths = 2000
vanishing_samples = 20
";

fn dasian(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dasian"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn price_writes_reports_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TWO_ATOM);
    let out = dir.path().join("out");
    let o = dasian(&["price"], &cfg, &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("price.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("engine,t,x,price,std_error,status,note"));
    assert!(csv.contains("analytic,") && csv.contains(",skipped,"));
    assert_eq!(csv.lines().filter(|l| l.contains(",ok,")).count(), 3);
    assert!(std::fs::read_to_string(out.join("summary.txt")).unwrap().contains("result: pass"));
    assert!(out.join("price_pairs.csv").exists());
}

#[test]
fn price_csv_is_byte_stable_across_threads_and_seed_override_matters() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TWO_ATOM);
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec!["price"];
        args.extend_from_slice(extra);
        assert!(dasian(&args, &cfg, &out).status.success());
        std::fs::read(out.join("price.csv")).unwrap()
    };
    let a = run("a", &["--threads", "1"]);
    assert_eq!(a, run("b", &["--threads", "3"]));
    assert_eq!(a, run("c", &[]));
    assert_ne!(a, run("d", &["--seed", "6"]));
}

#[test]
fn config_errors_exit_two_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &TWO_ATOM.replace("atom = 1.0, 0.5", "atom = 0.25, 0.5"));
    let o = dasian(&["price"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 9") && err.contains("out of order"), "{err}");

    let o = dasian(&["price"], &dir.path().join("missing.cfg"), &dir.path().join("out"));
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn verify_refuses_zero_strike() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &REDUCED.replace("K = 1", "K = 0"));
    let o = dasian(&["verify"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("K != 0"));

    let parsed = parse_config(&REDUCED.replace("K = 1", "K = 0")).unwrap();
    assert!(matches!(run_verify(&parsed), Err(AppError::Refused(_))));
}

#[test]
fn verify_reduced_benchmark_passes_every_suite() {
    let cfg = parse_config(REDUCED).unwrap();
    let rep = run_verify(&cfg).unwrap();
    for s in &rep.suites {
        assert_eq!(s.passed, Some(true), "{}: {}", s.name, s.detail);
    }
    let summary = rep.summary();
    assert!(summary.contains("widened"), "{summary}");
    let dir = tempfile::tempdir().unwrap();
    rep.write(dir.path()).unwrap();
    for f in ["bound_report.csv", "decay_profile.csv", "vanishing_region.csv", "gaussian_tail.csv", "summary.txt"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let bound = std::fs::read_to_string(dir.path().join("bound_report.csv")).unwrap();
    // closed form and mc, 36 points each, plus the header.
    assert_eq!(bound.lines().count(), 1 + 2 * 36);
}

#[test]
fn verify_negative_strike_skips_strip_suites() {
    let cfg = parse_config(&REDUCED.replace("K = 1", "K = -1")).unwrap();
    let rep = run_verify(&cfg).unwrap();
    let skipped: Vec<&str> = rep.suites.iter().filter(|s| s.passed.is_none()).map(|s| s.name).collect();
    assert_eq!(skipped, ["decay", "vanishing"]);
    assert!(rep.passed(), "{}", rep.summary());
}

#[test]
fn zero_drift_convergence_tables_coincide() {
    let cfg = parse_config(REDUCED).unwrap();
    let rep = run_convergence_study(&cfg).unwrap();
    assert_eq!(rep.aligned.rows, rep.misaligned.rows);
    assert!(rep.passed());
    let dir = tempfile::tempdir().unwrap();
    rep.write(dir.path()).unwrap();
    let a = std::fs::read(dir.path().join("convergence_aligned.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("convergence_misaligned.csv")).unwrap());
}

#[test]
fn converge_needs_the_pde_engine() {
    let cfg = parse_config(&REDUCED.replace("enabled = analytic, cascade, mc, pde", "enabled = analytic")).unwrap();
    let err = execute(Verb::Converge, &cfg, Path::new("unused")).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn degenerate_strike_warns() {
    // One atom at T: b ≡ 1 on (0, 1], so K = 1 is the degenerate case.
    let text = "[market]\nsigma = 0.3\nT = 1\nK = 1\nx0 = 1.2\n[sampling]\natom = 1, 1\n[engines]\nenabled = analytic, cascade, pde\n";
    let rep = run_price(&parse_config(text).unwrap()).unwrap();
    assert_eq!(rep.warnings.len(), 1);
    assert!(rep.warnings[0].contains("degenerate"));
    for r in &rep.results {
        let EngineOutcome::Price { value, .. } = r.outcome else { panic!("{:?}", r) };
        assert!((value - 0.2).abs() < 1e-9, "{:?} {value}", r.engine);
    }
    assert!(rep.passed());
}

#[test]
fn analytic_engine_covers_constant_drift() {
    let text = "[market]\nsigma = 0.3\nT = 1\nK = 1.1\nx0 = 1.2\n[sampling]\natom = 1, 1\n[engines]\nenabled = analytic, cascade, pde\n";
    let rep = run_price(&parse_config(text).unwrap()).unwrap();
    assert!(rep.results.iter().all(|r| matches!(r.outcome, EngineOutcome::Price { .. })));
    assert_eq!(rep.pairs.len(), 3);
    assert!(rep.passed(), "{}", rep.summary());
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    (
        0.01f64..2.0,
        -0.1f64..0.1,
        0.1f64..5.0,
        -3.0f64..3.0,
        prop::collection::vec(0.01f64..1.0, 0..4),
        prop::sample::subsequence(EngineKind::ALL.to_vec(), 1..=4),
        1u64..1_000_000,
        any::<u64>(),
        any::<bool>(),
    )
        .prop_map(|(sigma, rate, maturity, strike, weights, engines, paths, seed, antithetic)| {
            let n = weights.len();
            let mut cfg = RunConfig {
                market: dasian::config::MarketSection { sigma, rate, maturity, strike, x0: strike * 1.1 },
                atoms: weights.iter().enumerate().map(|(i, w)| (maturity * ((i + 1) as f64 / n as f64), *w)).collect(),
                engines,
                ..RunConfig::default()
            };
            cfg.mc.paths = paths * 2;
            cfg.mc.seed = seed;
            cfg.mc.antithetic = antithetic;
            cfg
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_then_parse_is_identity(cfg in arb_config()) {
        let text = serialize(&cfg);
        prop_assert_eq!(parse_config(&text).unwrap(), cfg.clone());
        prop_assert_eq!(serialize(&parse_config(&text).unwrap()), text);
    }
}

#[test]
fn bundled_configs_parse() {
    for name in ["two_atom.cfg", "reduced.cfg"] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
        let cfg = parse_config(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(cfg.engines, EngineKind::ALL);
    }
}
