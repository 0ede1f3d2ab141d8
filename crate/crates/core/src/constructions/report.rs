//! Construction reports, regime labels and the independent spot check.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{LargeSpectrum, DEFAULT_ETA};
use crate::error::Result;
use crate::fourier::arith::mul_mod;
use crate::fourier::group::{DensityFunction, Group, GroupSubset};
use crate::fourier::spectrum::{spectrum, Spectrum};

/// Whether a check ran with the hypotheses literally satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "paper-regime")]
    Paper,
    #[serde(rename = "relaxed")]
    Relaxed,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Paper => "paper-regime",
            Regime::Relaxed => "relaxed",
        }
    }

    pub fn from_hypotheses(hold: bool) -> Self {
        if hold {
            Regime::Paper
        } else {
            Regime::Relaxed
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    /// `measured` is 1 when the stated property holds, 0 otherwise.
    Holds,
}

/// One measured quantity compared against a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
    pub pass: bool,
    pub regime: Regime,
    /// Informational checks do not affect the verdict.
    pub enforced: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64, regime: Regime) -> Self {
        Check { name: name.into(), measured, bound, relation: Relation::AtMost, pass: measured <= bound, regime, enforced: true }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64, regime: Regime) -> Self {
        Check { name: name.into(), measured, bound, relation: Relation::AtLeast, pass: measured >= bound, regime, enforced: true }
    }

    pub fn holds(name: impl Into<String>, ok: bool, regime: Regime) -> Self {
        Check {
            name: name.into(),
            measured: if ok { 1.0 } else { 0.0 },
            bound: 1.0,
            relation: Relation::Holds,
            pass: ok,
            regime,
            enforced: true,
        }
    }

    pub fn informational(mut self) -> Self {
        self.enforced = false;
        self
    }

    pub fn enforced_if(mut self, on: bool) -> Self {
        self.enforced = on;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyCoefficient {
    pub frequency: u64,
    pub magnitude: f64,
}

/// Diagnostics of the real function handed to the quantizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDiagnostics {
    pub sum: f64,
    pub min: f64,
    pub max: f64,
    pub key_coefficients: Vec<KeyCoefficient>,
    /// Largest |f̂(r)| over r outside {0} and the keys.
    pub max_off_key: f64,
}

impl FunctionDiagnostics {
    pub fn new(f: &DensityFunction, fhat: &Spectrum, keys: &[u64]) -> Self {
        let mut key_coefficients: Vec<KeyCoefficient> =
            keys.iter().map(|&r| KeyCoefficient { frequency: r, magnitude: fhat.abs(r) }).collect();
        key_coefficients.sort_by_key(|k| k.frequency);
        key_coefficients.dedup_by_key(|k| k.frequency);
        let max_off_key = (1..fhat.len() as u64)
            .filter(|r| key_coefficients.binary_search_by_key(r, |k| k.frequency).is_err())
            .map(|r| fhat.abs(r))
            .fold(0.0, f64::max);
        FunctionDiagnostics { sum: f.sum(), min: f.min(), max: f.max(), key_coefficients, max_off_key }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizerStats {
    /// max_{r≠0} |Ĉ(r) − f̂(r)|.
    pub deviation: f64,
    /// τ·√|G|.
    pub deviation_bound: f64,
    pub accepted: bool,
    pub seed: u64,
}

/// Re-evaluation of sampled coefficients by direct summation over the set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub frequencies: Vec<u64>,
    pub max_error: f64,
    pub tolerance: f64,
    /// Membership in R_α agrees with the direct magnitudes away from the threshold.
    pub membership_agrees: bool,
}

impl SpotCheck {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance && self.membership_agrees
    }
}

pub const SPOT_CHECK_FREQUENCIES: usize = 64;

/// `Σ_{x∈A} χ_r(x)` by direct summation, with exact phase reduction.
pub fn direct_set_coefficient(a: &GroupSubset, r: u64) -> Complex64 {
    match a.group() {
        Group::Cyclic { modulus } => {
            let mut re = 0.0;
            let mut im = 0.0;
            for &x in a.elements() {
                let theta = std::f64::consts::TAU * mul_mod(x, r, modulus) as f64 / modulus as f64;
                re += theta.cos();
                im += theta.sin();
            }
            Complex64::new(re, im)
        }
        Group::Cube { .. } => {
            let s: i64 = a.elements().iter().map(|&x| if (x & r).count_ones() % 2 == 0 { 1 } else { -1 }).sum();
            Complex64::new(s as f64, 0.0)
        }
    }
}

pub fn spot_check(a: &GroupSubset, spec: &Spectrum, large: &LargeSpectrum, seed: u64) -> SpotCheck {
    let order = a.group().order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5907);
    let mut frequencies: Vec<u64> = if order <= SPOT_CHECK_FREQUENCIES {
        (0..order as u64).collect()
    } else {
        sample(&mut rng, order, SPOT_CHECK_FREQUENCIES).into_iter().map(|r| r as u64).collect()
    };
    frequencies.sort_unstable();
    let tolerance = 1e-7 * order as f64 + 1e-6;
    let cut = large.alpha * order as f64;
    let mut max_error: f64 = 0.0;
    let mut membership_agrees = true;
    for &r in &frequencies {
        let direct = direct_set_coefficient(a, r);
        max_error = max_error.max((direct - spec.value(r)).norm());
        let m = direct.norm();
        if (m - cut).abs() > tolerance && (m >= cut) != large.contains(r) {
            membership_agrees = false;
        }
    }
    SpotCheck { frequencies, max_error, tolerance, membership_agrees }
}

/// The end product of every construction.
///
/// When `target` is set, `verdict` means R_α(A) equals it exactly and every
/// enforced check passed; otherwise `verdict` is the conjunction of the
/// enforced checks. Both also require the spot check to pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub construction: String,
    pub group: Group,
    pub delta: f64,
    pub alpha: f64,
    pub regime: Regime,
    pub set_size: usize,
    pub set: GroupSubset,
    pub target: Option<Vec<u64>>,
    pub large_spectrum: Vec<u64>,
    pub boundary_marginals: Vec<u64>,
    pub function: Option<FunctionDiagnostics>,
    pub quantizer: Option<QuantizerStats>,
    pub gamma: Option<f64>,
    pub verdict: bool,
    pub retries_used: usize,
    pub checks: Vec<Check>,
    pub spot_check: SpotCheck,
    /// Derived construction parameters (roundings, drawn frequencies, shifts, ...).
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
}

impl ConstructionReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn large_spectrum_subset(&self) -> GroupSubset {
        GroupSubset::new(self.group, self.large_spectrum.clone()).expect("members lie in the group")
    }
}

/// Everything a construction knows before the report is sealed.
pub(crate) struct Draft {
    pub construction: &'static str,
    pub delta: f64,
    pub alpha: f64,
    pub regime: Regime,
    pub set: GroupSubset,
    pub target: Option<Vec<u64>>,
    pub function: Option<FunctionDiagnostics>,
    pub quantizer: Option<QuantizerStats>,
    pub gamma: Option<f64>,
    pub retries_used: usize,
    pub checks: Vec<Check>,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
}

impl Draft {
    pub fn new(construction: &'static str, delta: f64, alpha: f64, regime: Regime, set: GroupSubset) -> Self {
        Draft {
            construction,
            delta,
            alpha,
            regime,
            set,
            target: None,
            function: None,
            quantizer: None,
            gamma: None,
            retries_used: 0,
            checks: Vec::new(),
            parameters: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(key.to_string(), serde_json::to_value(value).expect("parameters serialize"));
    }

    pub fn finish(self, spec: &Spectrum, large: &LargeSpectrum, seed: u64) -> ConstructionReport {
        let spot = spot_check(&self.set, spec, large, seed);
        let target_ok = self.target.as_ref().is_none_or(|t| *t == large.members);
        let checks_ok = self.checks.iter().all(|c| c.pass || !c.enforced);
        ConstructionReport {
            construction: self.construction.to_string(),
            group: self.set.group(),
            delta: self.delta,
            alpha: self.alpha,
            regime: self.regime,
            set_size: self.set.len(),
            target: self.target,
            large_spectrum: large.members.clone(),
            boundary_marginals: large.boundary_marginals.clone(),
            function: self.function,
            quantizer: self.quantizer,
            gamma: self.gamma,
            verdict: target_ok && checks_ok && spot.passed(),
            retries_used: self.retries_used,
            checks: self.checks,
            spot_check: spot,
            parameters: self.parameters,
            notes: self.notes,
            set: self.set,
        }
    }
}

/// Transform and large spectrum of a built set.
pub(crate) fn measure(a: &GroupSubset, alpha: f64) -> Result<(Spectrum, LargeSpectrum)> {
    let spec = spectrum(a);
    let large = LargeSpectrum::from_spectrum(&spec, alpha, DEFAULT_ETA)?;
    Ok((spec, large))
}

/// Sorted `{0} ∪ S ∪ −S`.
pub(crate) fn symmetric_closure(group: Group, s: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::once(0).chain(s.iter().flat_map(|&x| [x, group.neg(x)])).collect();
    out.sort_unstable();
    out.dedup();
    out
}
