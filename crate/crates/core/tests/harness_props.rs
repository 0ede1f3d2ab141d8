use std::path::PathBuf;

use proptest::prelude::*;
use spectra_core::harness::{
    bundle_from_json, bundle_to_csv, bundle_to_json, emit_report, records_from_csv, run_verification_suite, sweep,
    ExperimentConfig, ReportFormat, Suite,
};
use spectra_core::Group;

fn cyclic_cfg(n: u64, deltas: Vec<f64>, alphas: Vec<f64>, seed: u64) -> ExperimentConfig {
    let mut c = ExperimentConfig::new("props", Group::cyclic(n).unwrap());
    c.deltas = deltas;
    c.alphas = alphas;
    c.ks = vec![2, 3];
    c.seeds = vec![seed];
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reports_are_reproducible(n in 50u64..400, delta in 0.1f64..0.6, seed in any::<u64>()) {
        let cfg = cyclic_cfg(n, vec![delta], vec![delta / 3.0, delta / 5.0], seed);
        let a = bundle_to_json(&run_verification_suite(&cfg).unwrap()).unwrap();
        let b = bundle_to_json(&run_verification_suite(&cfg).unwrap()).unwrap();
        prop_assert_eq!(&a, &b);
        let parsed = bundle_from_json(&a).unwrap();
        prop_assert_eq!(bundle_to_json(&parsed).unwrap(), a);
    }

    #[test]
    fn bounds_recompute(n in 50u64..400, delta in 0.1f64..0.6, seed in any::<u64>()) {
        let cfg = cyclic_cfg(n, vec![delta], vec![delta / 2.0, delta / 7.0], seed);
        let bundle = run_verification_suite(&cfg).unwrap();
        for r in &bundle.records {
            if let (Some(b), Some(again)) = (r.bound, r.recompute_bound()) {
                prop_assert!((b - again).abs() <= 1e-12 * b.abs(), "{r:?}");
            }
            prop_assert!(r.verdict, "{r:?}");
        }
    }

    #[test]
    fn sweep_rows(n in 50u64..600, delta in 0.1f64..0.6, seed in any::<u64>()) {
        let alphas: Vec<f64> = (1..=8).map(|i| delta * i as f64 / 9.0).collect();
        let mut cfg = cyclic_cfg(n, vec![delta], alphas, seed);
        cfg.ks = vec![2];
        let rows = sweep(&cfg).unwrap();
        prop_assert_eq!(rows.len(), 8);
        // same A on every row, so |R_alpha| can only shrink as alpha grows
        for w in rows.windows(2) {
            prop_assert_eq!(w[0].set_size, w[1].set_size);
            prop_assert!(w[0].large_spectrum_size >= w[1].large_spectrum_size);
        }
        for r in &rows {
            prop_assert!(!r.partial, "{r:?}");
            if let Some(ratio) = r.tmain_ratio {
                prop_assert!(ratio >= 1.0, "{r:?}");
            }
        }
    }
}

#[test]
fn tmain_suite_two_hundred_sets() {
    let mut cfg = cyclic_cfg(257, vec![0.2, 0.4], vec![0.05, 0.1], 3);
    cfg.ks = vec![2];
    cfg.trials = 50;
    cfg.suites = vec![Suite::Tmain];
    let bundle = run_verification_suite(&cfg).unwrap();
    assert_eq!(bundle.records.len(), 200);
    assert_eq!(bundle.failures().count(), 0);
    assert!(bundle.paper_regime_ok());
}

#[test]
fn csv_and_file_round_trip() {
    let cfg = cyclic_cfg(101, vec![0.3], vec![0.1], 1);
    let bundle = run_verification_suite(&cfg).unwrap();
    let mut buf = Vec::new();
    bundle_to_csv(&bundle, &mut buf).unwrap();
    assert_eq!(records_from_csv(std::str::from_utf8(&buf).unwrap()).unwrap(), bundle.records);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/report.json");
    emit_report(&bundle, ReportFormat::Json, &path).unwrap();
    assert_eq!(bundle_from_json(&std::fs::read_to_string(&path).unwrap()).unwrap(), bundle);
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a reviewed fixture; `SPECTRA_BLESS=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("SPECTRA_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "{} differs from the fixture", path.display());
}

#[test]
fn golden_cube_union_bundle() {
    let mut cfg = ExperimentConfig::new("golden-cube", Group::cube(12).unwrap());
    cfg.deltas = vec![2f64.powi(-3)];
    cfg.alphas = vec![2f64.powi(-4)];
    cfg.ks = vec![2];
    cfg.relaxed = true;
    cfg.suites = vec![Suite::CubeUnion];
    let bundle = run_verification_suite(&cfg).unwrap();
    assert!(bundle.records.iter().all(|r| r.verdict));
    golden("cube_union_n12.json", &bundle_to_json(&bundle).unwrap());
}

#[test]
fn golden_tmain_bundle() {
    let mut cfg = cyclic_cfg(127, vec![0.3], vec![0.08], 2024);
    cfg.ks = vec![2];
    golden("tmain_z127.json", &bundle_to_json(&run_verification_suite(&cfg).unwrap()).unwrap());
}
