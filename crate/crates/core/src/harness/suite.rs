//! Verification suites, parameter sweeps and report emission.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constructions::{
    construct_bohr_union, construct_cube_random, construct_cube_union, BohrUnionConfig, ConstructionReport,
    CubeConstructionConfig, Regime, Relation,
};
use crate::dissociation::{chang_bound, max_dissociated_subset};
use crate::energy::{check_tmain_with, energy, large_spectrum, tmain_lower_bound, DEFAULT_ETA};
use crate::error::{Error, Result};
use crate::fourier::group::{Group, GroupSubset};
use crate::harness::bounds::BoundsParams;
use crate::harness::config::{ExperimentConfig, GridPoint, Suite};

/// One measured check with everything needed to recompute its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
    /// BoundsParams field that produced `bound`, evaluated at inputs delta, alpha, k and m.
    pub formula: Option<String>,
    pub relation: Option<Relation>,
    pub verdict: bool,
    pub regime: Regime,
    pub enforced: bool,
    pub error: Option<String>,
}

impl CheckRecord {
    fn error(suite: Suite, name: &str, inputs: BTreeMap<String, Value>, regime: Regime, e: &Error) -> Self {
        CheckRecord {
            suite,
            name: name.to_string(),
            inputs,
            measured: None,
            bound: None,
            formula: None,
            relation: None,
            verdict: false,
            regime,
            enforced: true,
            error: Some(e.to_string()),
        }
    }

    /// Re-evaluates `formula` from the stored inputs.
    pub fn recompute_bound(&self) -> Option<f64> {
        let f = self.formula.as_deref()?;
        let delta = self.inputs.get("delta")?.as_f64()?;
        let alpha = self.inputs.get("alpha")?.as_f64()?;
        let k = self.inputs.get("k").and_then(Value::as_u64).unwrap_or(2) as usize;
        let m = self.inputs.get("m").and_then(Value::as_u64).map(|m| m as usize);
        BoundsParams::new(delta, alpha, k, m).value(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub experiment: String,
    pub group: Group,
    pub records: Vec<CheckRecord>,
}

impl ReportBundle {
    /// True when every enforced paper-regime record passed.
    pub fn paper_regime_ok(&self) -> bool {
        self.records.iter().filter(|r| r.regime == Regime::Paper && r.enforced).all(|r| r.verdict)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.enforced && !r.verdict)
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Subset with each element kept independently with probability δ.
pub fn random_subset<R: Rng + ?Sized>(group: Group, delta: f64, rng: &mut R) -> GroupSubset {
    let elems = (0..group.order() as u64).filter(|_| rng.gen::<f64>() < delta).collect();
    GroupSubset::new(group, elems).expect("elements lie in the group")
}

/// The random set of a grid point depends on (seed, δ, trial) only, so it is
/// shared across α and k.
pub fn grid_set(group: Group, p: &GridPoint, trial: usize) -> GroupSubset {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(p.delta.to_bits() ^ (trial as u64).rotate_left(40));
    random_subset(group, p.delta, &mut rng)
}

fn base_inputs(p: &GridPoint) -> BTreeMap<String, Value> {
    BTreeMap::from([
        ("delta".to_string(), json!(p.delta)),
        ("alpha".to_string(), json!(p.alpha)),
        ("k".to_string(), json!(p.k)),
        ("seed".to_string(), json!(p.seed)),
    ])
}

fn random_set_records(group: Group, p: &GridPoint, trial: usize, suites: &[Suite]) -> Vec<CheckRecord> {
    let a = grid_set(group, p, trial);
    let mut inputs = base_inputs(p);
    inputs.insert("trial".into(), json!(trial));
    inputs.insert("set_size".into(), json!(a.len()));
    let mut out = Vec::new();
    if a.density() < p.alpha {
        // R_alpha is empty and every statement about it is vacuous
        out.push(CheckRecord {
            suite: suites.first().copied().unwrap_or(Suite::Tmain),
            name: "R_alpha empty: alpha exceeds the sampled density".into(),
            inputs,
            measured: Some(a.density()),
            bound: Some(p.alpha),
            formula: None,
            relation: Some(Relation::AtMost),
            verdict: true,
            regime: Regime::Paper,
            enforced: false,
            error: None,
        });
        return out;
    }
    let ls = match large_spectrum(&a, p.alpha, DEFAULT_ETA) {
        Ok(ls) => ls,
        Err(e) => return vec![CheckRecord::error(Suite::Tmain, "large spectrum", inputs, Regime::Paper, &e)],
    };
    // the theorems are stated for the measured density
    inputs.insert("delta".into(), json!(ls.delta));
    if suites.contains(&Suite::Tmain) {
        let b = ls.nonzero();
        let mut inp = inputs.clone();
        inp.insert("m".into(), json!(b.len()));
        out.push(match check_tmain_with(&ls, &b, p.k) {
            Ok(v) => CheckRecord {
                suite: Suite::Tmain,
                name: format!("T_{}(R_alpha \\ 0) >= lower bound", p.k),
                inputs: inp,
                measured: Some(v.t_k as f64),
                bound: finite(v.lower_bound),
                formula: Some("tmain_rhs".into()),
                relation: Some(Relation::AtLeast),
                verdict: v.verdict,
                regime: Regime::Paper,
                enforced: true,
                error: None,
            },
            Err(e) => CheckRecord::error(Suite::Tmain, "tmain", inp, Regime::Paper, &e),
        });
    }
    if suites.contains(&Suite::Chang) && ls.delta > 0.0 {
        let bound = chang_bound(ls.delta, p.alpha);
        out.push(match max_dissociated_subset(&ls.as_subset()) {
            Ok(m) => CheckRecord {
                suite: Suite::Chang,
                name: "greedy dissociated subset of R_alpha <= Chang bound".into(),
                inputs: inputs.clone(),
                measured: Some(m.lambda.len() as f64),
                bound: finite(bound),
                formula: Some("chang".into()),
                relation: Some(Relation::AtMost),
                verdict: m.lambda.len() as f64 <= bound && m.verify_coverage().is_ok(),
                regime: Regime::Paper,
                enforced: true,
                error: None,
            },
            Err(e) => CheckRecord::error(Suite::Chang, "chang", inputs.clone(), Regime::Paper, &e),
        });
    }
    out
}

/// Bound formula for a construction check, with the k it is evaluated at.
fn formula_for(suite: Suite, name: &str, k: usize) -> Option<(&'static str, usize)> {
    match (suite, name) {
        (Suite::CubeUnion, "|R_alpha(A)|") | (Suite::CubeRandom, "|R_alpha(A)|") => Some(("cube_spectrum", k)),
        (Suite::CubeUnion, "T_2(R_alpha(A))") => Some(("cube_energy", 2)),
        (Suite::CubeUnion, "T_3(R_alpha(A))") => Some(("cube_energy", 3)),
        (Suite::CubeRandom, "T_2(R_alpha(A))") => Some(("cube_random_energy", 2)),
        (Suite::BohrUnion, "|R_alpha(A)|") => Some(("bohr_spectrum", k)),
        (Suite::BohrUnion, "T_k(R_alpha(A))") => Some(("bohr_energy", k)),
        _ => None,
    }
}

/// Flattens a construction report into records; the overall verdict comes first.
pub fn construction_records(suite: Suite, rep: &ConstructionReport, inputs: &BTreeMap<String, Value>) -> Vec<CheckRecord> {
    let k = inputs.get("k").and_then(Value::as_u64).unwrap_or(2) as usize;
    let mut out = vec![CheckRecord {
        suite,
        name: "construction verdict".into(),
        inputs: inputs.clone(),
        measured: None,
        bound: None,
        formula: None,
        relation: None,
        verdict: rep.verdict,
        regime: rep.regime,
        enforced: true,
        error: None,
    }];
    for c in &rep.checks {
        let mut inp = inputs.clone();
        let formula = formula_for(suite, &c.name, k).map(|(f, kk)| {
            inp.insert("k".into(), json!(kk));
            f.to_string()
        });
        out.push(CheckRecord {
            suite,
            name: c.name.clone(),
            inputs: inp,
            measured: finite(c.measured),
            bound: finite(c.bound),
            formula,
            relation: Some(c.relation),
            verdict: c.pass,
            regime: c.regime,
            enforced: c.enforced,
            error: None,
        });
    }
    out
}

fn construction_suite(cfg: &ExperimentConfig, suite: Suite, p: &GridPoint) -> Vec<CheckRecord> {
    let mut inputs = base_inputs(p);
    inputs.insert("group".into(), json!(cfg.group.to_string()));
    let regime = Regime::from_hypotheses(!cfg.relaxed);
    let rep = match (suite, cfg.group) {
        (Suite::CubeUnion, Group::Cube { dim }) => {
            let c = CubeConstructionConfig { relaxed: cfg.relaxed, ..CubeConstructionConfig::new(p.delta, p.alpha, dim) };
            construct_cube_union(&c)
        }
        (Suite::CubeRandom, Group::Cube { dim }) => {
            let mut c = CubeConstructionConfig { relaxed: cfg.relaxed, ..CubeConstructionConfig::new(p.delta, p.alpha, dim) };
            if cfg.relaxed {
                c.r = 8;
            }
            construct_cube_random(&c, p.seed)
        }
        (Suite::BohrUnion, Group::Cyclic { modulus }) => {
            let c = BohrUnionConfig { delta: p.delta, alpha: p.alpha, k: p.k, modulus, relaxed: cfg.relaxed };
            construct_bohr_union(&c, p.seed)
        }
        _ => Err(Error::InvalidParameter(format!("suite {suite:?} does not apply to {}", cfg.group))),
    };
    match rep {
        Ok(rep) => construction_records(suite, &rep, &inputs),
        Err(e) => vec![CheckRecord::error(suite, "construction", inputs, regime, &e)],
    }
}

/// Runs every configured suite over the grid; errors become failed records
/// and the run continues. Grid points run in parallel and are merged in grid order.
pub fn run_verification_suite(cfg: &ExperimentConfig) -> Result<ReportBundle> {
    cfg.validate()?;
    let grid = cfg.grid();
    let first_k = cfg.ks.first().copied();
    let first_seed = grid.first().map(|p| p.seed);
    let per_point: Vec<Vec<CheckRecord>> = grid
        .par_iter()
        .map(|p| {
            let mut recs = Vec::new();
            if cfg.suites.iter().any(|s| matches!(s, Suite::Tmain | Suite::Chang)) {
                for trial in 0..cfg.trials {
                    recs.extend(random_set_records(cfg.group, p, trial, &cfg.suites));
                }
            }
            for &suite in &cfg.suites {
                let run = match suite {
                    Suite::Tmain | Suite::Chang => false,
                    // deterministic in (δ, α)
                    Suite::CubeUnion => Some(p.k) == first_k && Some(p.seed) == first_seed,
                    Suite::CubeRandom => Some(p.k) == first_k,
                    Suite::BohrUnion => true,
                };
                if run {
                    recs.extend(construction_suite(cfg, suite, p));
                }
            }
            recs
        })
        .collect();
    Ok(ReportBundle { experiment: cfg.id.clone(), group: cfg.group, records: per_point.into_iter().flatten().collect() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub experiment: String,
    pub delta: f64,
    pub alpha: f64,
    pub k: usize,
    pub seed: u64,
    pub set_size: usize,
    pub density: f64,
    pub large_spectrum_size: usize,
    pub t_k: Option<f64>,
    pub tmain_bound: Option<f64>,
    /// T_k / tmain bound.
    pub tmain_ratio: Option<f64>,
    pub dissociated_size: Option<usize>,
    pub chang_bound: Option<f64>,
    pub chang_ratio: Option<f64>,
    pub partial: bool,
    pub error: Option<String>,
}

fn sweep_row(cfg: &ExperimentConfig, p: &GridPoint) -> SweepRow {
    let a = grid_set(cfg.group, p, 0);
    let mut row = SweepRow {
        experiment: cfg.id.clone(),
        delta: p.delta,
        alpha: p.alpha,
        k: p.k,
        seed: p.seed,
        set_size: a.len(),
        density: a.density(),
        large_spectrum_size: 0,
        t_k: None,
        tmain_bound: None,
        tmain_ratio: None,
        dissociated_size: None,
        chang_bound: None,
        chang_ratio: None,
        partial: false,
        error: None,
    };
    let mut errors = Vec::new();
    if row.density < p.alpha {
        return row;
    }
    match large_spectrum(&a, p.alpha, DEFAULT_ETA) {
        Ok(ls) => {
            row.large_spectrum_size = ls.len();
            let b = ls.nonzero();
            match (energy(&b, p.k), tmain_lower_bound(ls.delta, p.alpha, p.k, b.len())) {
                (Ok(e), Ok(lb)) => {
                    row.t_k = Some(e.t_k as f64);
                    row.tmain_bound = finite(lb);
                    row.tmain_ratio = (lb > 0.0).then(|| e.t_k as f64 / lb);
                }
                (Err(e), _) | (_, Err(e)) => errors.push(e.to_string()),
            }
            if ls.delta > 0.0 {
                let cb = chang_bound(ls.delta, p.alpha);
                row.chang_bound = finite(cb);
                match max_dissociated_subset(&ls.as_subset()) {
                    Ok(m) => {
                        row.dissociated_size = Some(m.lambda.len());
                        row.chang_ratio = (cb > 0.0).then(|| m.lambda.len() as f64 / cb);
                    }
                    Err(e) => errors.push(e.to_string()),
                }
            }
        }
        Err(e) => errors.push(e.to_string()),
    }
    if !errors.is_empty() {
        row.partial = true;
        row.error = Some(errors.join("; "));
    }
    row
}

/// One row per grid point, in grid order.
pub fn sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    Ok(cfg.grid().par_iter().map(|p| sweep_row(cfg, p)).collect())
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        w.write_record(SWEEP_HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

const SWEEP_HEADER: [&str; 16] = [
    "experiment",
    "delta",
    "alpha",
    "k",
    "seed",
    "set_size",
    "density",
    "large_spectrum_size",
    "t_k",
    "tmain_bound",
    "tmain_ratio",
    "dissociated_size",
    "chang_bound",
    "chang_ratio",
    "partial",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Flat CSV row for a check record; `inputs` is embedded as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CsvRecord {
    suite: String,
    name: String,
    inputs: String,
    measured: Option<f64>,
    bound: Option<f64>,
    formula: Option<String>,
    relation: Option<String>,
    verdict: bool,
    regime: String,
    enforced: bool,
    error: Option<String>,
}

const RECORD_HEADER: [&str; 11] =
    ["suite", "name", "inputs", "measured", "bound", "formula", "relation", "verdict", "regime", "enforced", "error"];

fn enum_str<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

pub fn bundle_to_json(bundle: &ReportBundle) -> Result<String> {
    Ok(serde_json::to_string_pretty(bundle)? + "\n")
}

pub fn bundle_from_json(text: &str) -> Result<ReportBundle> {
    Ok(serde_json::from_str(text)?)
}

pub fn bundle_to_csv<W: Write>(bundle: &ReportBundle, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if bundle.records.is_empty() {
        w.write_record(RECORD_HEADER)?;
    }
    for r in &bundle.records {
        w.serialize(CsvRecord {
            suite: enum_str(&r.suite),
            name: r.name.clone(),
            inputs: serde_json::to_string(&r.inputs)?,
            measured: r.measured,
            bound: r.bound,
            formula: r.formula.clone(),
            relation: r.relation.as_ref().map(enum_str),
            verdict: r.verdict,
            regime: r.regime.label().to_string(),
            enforced: r.enforced,
            error: r.error.clone(),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written by `bundle_to_csv` back into records.
pub fn records_from_csv(text: &str) -> Result<Vec<CheckRecord>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in rd.deserialize::<CsvRecord>() {
        let r = row?;
        out.push(CheckRecord {
            suite: serde_json::from_value(Value::String(r.suite))?,
            name: r.name,
            inputs: serde_json::from_str(&r.inputs)?,
            measured: r.measured,
            bound: r.bound,
            formula: r.formula.filter(|s| !s.is_empty()),
            relation: r.relation.filter(|s| !s.is_empty()).map(|s| serde_json::from_value(Value::String(s))).transpose()?,
            verdict: r.verdict,
            regime: serde_json::from_value(Value::String(r.regime))?,
            enforced: r.enforced,
            error: r.error.filter(|s| !s.is_empty()),
        });
    }
    Ok(out)
}

/// Writes the bundle to `path` in the given format.
pub fn emit_report(bundle: &ReportBundle, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    match format {
        ReportFormat::Json => std::fs::write(path, bundle_to_json(bundle)?)?,
        ReportFormat::Csv => bundle_to_csv(bundle, std::fs::File::create(path)?)?,
    }
    Ok(())
}
