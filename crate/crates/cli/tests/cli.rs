use std::path::Path;
use std::process::{Command, Output};

fn spectra(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spectra"));
    cmd.args(args).env_remove("SPECTRA_SEED");
    if let Some(s) = seed {
        cmd.env("SPECTRA_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const GRID: &str = r#"
id = "cli"
deltas = [0.3]
alphas = [0.1, 0.15]
ks = [2]
seeds = [3]
[group]
kind = "cyclic"
modulus = 211
"#;

#[test]
fn help_lists_subcommands() {
    let out = spectra(&["--help"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for sub in ["spectrum", "energy", "dissoc", "construct", "verify", "sweep"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn empty_grid_verifies_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.json", r#"{"id": "empty", "group": {"kind": "cube", "dim": 4}}"#);
    let out = spectra(&["verify", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_is_byte_identical_and_seed_overridable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "grid.toml", GRID);
    let a = spectra(&["verify", "--config", &cfg], None);
    let b = spectra(&["verify", "--config", &cfg], None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let c = spectra(&["verify", "--config", &cfg], Some("77"));
    let v: serde_json::Value = serde_json::from_slice(&c.stdout).unwrap();
    let records = v["records"].as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["inputs"]["seed"] == 77));
}

#[test]
fn verify_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "grid.toml", GRID);
    let out_path = dir.path().join("out/report.csv");
    let out = spectra(&["verify", "--config", &cfg, "--format", "csv", "--out", out_path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(out_path).unwrap();
    assert!(text.starts_with("suite,name,inputs"));
}

#[test]
fn sweep_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "grid.toml", GRID);
    let out = spectra(&["sweep", "--config", &cfg], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn spectrum_energy_dissoc_on_set_file() {
    let dir = tempfile::tempdir().unwrap();
    let set = write(dir.path(), "a.txt", "ZN 13\n0\n1\n3\n9\n");
    let out = spectra(&["spectrum", &set, "--alpha", "0.2"], None);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["large_spectrum"]["members"], serde_json::json!([0]));

    // {0,1,3,9} is Sidon mod 13: only the 2|B|^2 - |B| trivial solutions
    let out = spectra(&["energy", &set, "--k", "2", "--method", "fourier"], None);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["t_k"], "28");

    let out = spectra(&["dissoc", &set], None);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], false);
}

#[test]
fn construct_cube_relaxed() {
    let dir = tempfile::tempdir().unwrap();
    let set_path = dir.path().join("a.txt");
    let out = spectra(
        &[
            "construct",
            "cube",
            "--n",
            "16",
            "--delta",
            "0.0625",
            "--alpha",
            "0.03125",
            "--relaxed",
            "--set-out",
            set_path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], true);
    assert_eq!(v["regime"], "relaxed");
    assert!(std::fs::read_to_string(set_path).unwrap().starts_with("F2 16\n"));
}

#[test]
fn construct_rejects_bad_parameters() {
    let out = spectra(&["construct", "prescribed", "--N", "101", "--elements", "0", "--delta", "0.2", "--alpha", "0.3"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = spectra(&["construct", "cube", "--delta", "0.1", "--alpha", "0.05"], None);
    assert_eq!(out.status.code(), Some(2));
}
