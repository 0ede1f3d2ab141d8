use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spectra_core::constructions::{
    construct_bohr_union, construct_cube_random, construct_cube_union, construct_green_plus, construct_prescribed_small,
    construct_riesz, BohrUnionConfig, ConstructionReport, CubeConstructionConfig, QuantizerConfig, Regime,
};
use spectra_core::dissociation::{family_membership, max_dissociated_subset, FamilyParams, Variant};
use spectra_core::energy::{energy, energy_bruteforce, energy_via_fourier, large_spectrum, DEFAULT_ETA};
use spectra_core::fourier::io::{read_set_file, write_set_file, write_spectrum_csv};
use spectra_core::fourier::spectrum;
use spectra_core::harness::{
    emit_report, run_verification_suite, sweep, write_sweep_csv, ExperimentConfig, ReportFormat,
};
use spectra_core::{Group, GroupSubset};

#[derive(Parser)]
#[command(name = "spectra", version, about = "Large Fourier spectra: measurement, constructions and verification")]
struct Cli {
    /// Overrides every seed, including the seed grid of a config file.
    #[arg(long, env = "SPECTRA_SEED", global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transform a set and report its large spectrum.
    Spectrum {
        /// Set file (`ZN <N>` or `F2 <n>` header, one element per line).
        set: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_ETA)]
        eta: f64,
        /// Also write every coefficient as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Additive energy T_k of a set.
    Energy {
        set: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Dissociativity and family membership of a set.
    Dissoc {
        set: PathBuf,
        /// Family variant: plain, k_dissociated, lambda_ks, lambda_k_inf, tilde, partitioned, rank_d.
        #[arg(long, default_value = "plain")]
        variant: Variant,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Blocks for the partitioned variant, e.g. "1,3;5,7".
        #[arg(long)]
        blocks: Option<String>,
        /// Report a greedy maximal dissociated subset instead.
        #[arg(long)]
        max: bool,
    },
    /// Build a set with a prescribed large spectrum.
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        args: ConstructArgs,
    },
    /// Run the verification suites of an experiment config.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tabulate |R_alpha|, T_k and bounds over an experiment grid as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Bruteforce,
    Fourier,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Prescribed,
    Riesz,
    Green,
    Bohr,
    Cube,
    CubeRandom,
}

#[derive(Args)]
struct ConstructArgs {
    /// Cyclic modulus.
    #[arg(long = "N", alias = "modulus")]
    modulus: Option<u64>,
    /// Cube dimension.
    #[arg(short = 'n', long = "n", alias = "dim")]
    dim: Option<u32>,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Prescribed spectrum S (prescribed) or frequency set Λ (riesz), e.g. "0,5,-5".
    #[arg(long)]
    elements: Option<String>,
    /// Blocks of Λ for the green construction, e.g. "1,3;5,7".
    #[arg(long)]
    blocks: Option<String>,
    /// Block count of the random cube sampler.
    #[arg(long, default_value_t = 32)]
    r: usize,
    #[arg(long, default_value_t = 20.0)]
    tau: f64,
    #[arg(long, default_value_t = 200)]
    retries: usize,
    /// Run outside the construction hypotheses and label checks `relaxed`.
    #[arg(long)]
    relaxed: bool,
    /// Report destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the constructed set as a set file.
    #[arg(long)]
    set_out: Option<PathBuf>,
}

fn parse_elements(text: &str, modulus: u64) -> Result<Vec<u64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: i128 = t.parse().with_context(|| format!("bad element {t:?}"))?;
            Ok(v.rem_euclid(modulus as i128) as u64)
        })
        .collect()
}

fn parse_blocks(text: &str, modulus: u64) -> Result<Vec<Vec<u64>>> {
    text.split(';').map(|b| parse_elements(b, modulus)).collect()
}

fn modulus(a: &ConstructArgs) -> Result<u64> {
    a.modulus.context("--N is required for cyclic constructions")
}

fn dim(a: &ConstructArgs) -> Result<u32> {
    a.dim.context("--n is required for cube constructions")
}

fn construct(kind: Kind, a: &ConstructArgs, seed: u64) -> Result<ConstructionReport> {
    let qcfg = QuantizerConfig { tau: a.tau, max_retries: a.retries, seed };
    let report = match kind {
        Kind::Prescribed | Kind::Riesz => {
            let n = modulus(a)?;
            let elems = parse_elements(a.elements.as_deref().context("--elements is required")?, n)?;
            let set = GroupSubset::new(Group::cyclic(n)?, elems)?;
            if matches!(kind, Kind::Prescribed) {
                construct_prescribed_small(&set, a.delta, a.alpha, &qcfg)?
            } else {
                construct_riesz(&set, a.delta, a.alpha, &qcfg, a.relaxed)?
            }
        }
        Kind::Green => {
            let n = modulus(a)?;
            let blocks = parse_blocks(a.blocks.as_deref().context("--blocks is required")?, n)?;
            let lambda = GroupSubset::new(Group::cyclic(n)?, blocks.concat())?;
            construct_green_plus(&lambda, &blocks, a.delta, a.alpha, &qcfg, a.relaxed)?
        }
        Kind::Bohr => {
            let cfg = BohrUnionConfig { delta: a.delta, alpha: a.alpha, k: a.k, modulus: modulus(a)?, relaxed: a.relaxed };
            construct_bohr_union(&cfg, seed)?
        }
        Kind::Cube | Kind::CubeRandom => {
            let cfg = CubeConstructionConfig { r: a.r, relaxed: a.relaxed, ..CubeConstructionConfig::new(a.delta, a.alpha, dim(a)?) };
            if matches!(kind, Kind::Cube) {
                construct_cube_union(&cfg)?
            } else {
                construct_cube_random(&cfg, seed)?
            }
        }
    };
    Ok(report)
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, serde_json::to_string_pretty(value)? + "\n").with_context(|| format!("writing {}", p.display()))
        }
        None => print_json(value),
    }
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let cfg = ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(match seed {
        Some(s) => cfg.with_seed(s),
        None => cfg,
    })
}

/// Ok(true) when every enforced paper-regime check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spectrum { set, alpha, eta, csv } => {
            let a = read_set_file(&set)?;
            let spec = spectrum(&a);
            if let Some(path) = csv {
                write_spectrum_csv(std::fs::File::create(&path)?, &spec)?;
            }
            let ls = alpha.map(|al| large_spectrum(&a, al, eta)).transpose()?;
            print_json(&json!({
                "group": a.group(),
                "size": a.len(),
                "density": a.density(),
                "energy": spec.energy(),
                "large_spectrum": ls,
            }))?;
            Ok(true)
        }
        Command::Energy { set, k, method } => {
            let b = read_set_file(&set)?;
            let rep = match method {
                Method::Auto => energy(&b, k)?,
                Method::Bruteforce => energy_bruteforce(&b, k)?,
                Method::Fourier => energy_via_fourier(&b, k)?,
            };
            // u128 counts are printed as strings to stay exact in JSON readers
            print_json(&json!({
                "group": rep.group,
                "base_size": rep.base_size,
                "k": rep.k,
                "t_k": rep.t_k.to_string(),
                "method": rep.method,
                "integrality_residual": rep.integrality_residual,
            }))?;
            Ok(true)
        }
        Command::Dissoc { set, variant, k, s, p, d, blocks, max } => {
            let a = read_set_file(&set)?;
            if max {
                let m = max_dissociated_subset(&a)?;
                m.verify_coverage()?;
                print_json(&m)?;
                return Ok(true);
            }
            let mut params = FamilyParams::new(k, s);
            params.p = p;
            params.d = d;
            let blocks = match blocks {
                Some(b) => Some(parse_blocks(&b, a.group().order() as u64)?),
                None => None,
            };
            let cert = family_membership(&a, &params, variant, blocks.as_deref())?;
            print_json(&cert)?;
            Ok(true)
        }
        Command::Construct { kind, args } => {
            let rep = construct(kind, &args, cli.seed.unwrap_or(0))?;
            if let Some(path) = &args.set_out {
                write_set_file(path, &rep.set)?;
            }
            write_json(args.out.as_deref(), &rep)?;
            let paper_ok = rep.regime != Regime::Paper || rep.verdict;
            Ok(paper_ok && rep.checks.iter().filter(|c| c.regime == Regime::Paper && c.enforced).all(|c| c.pass))
        }
        Command::Verify { config, out, format } => {
            let cfg = load_config(&config, cli.seed)?;
            let bundle = run_verification_suite(&cfg)?;
            let fmt = match format {
                Format::Json => ReportFormat::Json,
                Format::Csv => ReportFormat::Csv,
            };
            let target = out.or_else(|| match fmt {
                ReportFormat::Json => cfg.output.json.clone(),
                ReportFormat::Csv => cfg.output.csv.clone(),
            });
            match target {
                Some(path) => emit_report(&bundle, fmt, &path)?,
                None => match fmt {
                    ReportFormat::Json => print!("{}", spectra_core::harness::bundle_to_json(&bundle)?),
                    ReportFormat::Csv => spectra_core::harness::bundle_to_csv(&bundle, std::io::stdout().lock())?,
                },
            }
            for r in bundle.failures() {
                eprintln!("FAIL [{}] {:?} {}: {:?}", r.regime.label(), r.suite, r.name, r.error);
            }
            Ok(bundle.paper_regime_ok())
        }
        Command::Sweep { config, out } => {
            let cfg = load_config(&config, cli.seed)?;
            let rows = sweep(&cfg)?;
            match out.or(cfg.output.csv.clone()) {
                Some(path) => write_sweep_csv(&rows, std::fs::File::create(&path)?)?,
                None => write_sweep_csv(&rows, std::io::stdout().lock())?,
            }
            if rows.iter().any(|r| r.partial) {
                eprintln!("warning: some rows are partial");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

