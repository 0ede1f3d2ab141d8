//! Randomized rounding of a [0,1]-valued function to a set of prescribed size
//! with uniformly small Fourier deviation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::group::{DensityFunction, GroupSubset};
use crate::fourier::spectrum::{spectrum, spectrum_of_function, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizerConfig {
    /// Accepted deviation, in units of √|G|.
    pub tau: f64,
    pub max_retries: usize,
    pub seed: u64,
}

impl Default for QuantizerConfig {
    fn default() -> Self {
        QuantizerConfig { tau: 20.0, max_retries: 200, seed: 0 }
    }
}

impl QuantizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be positive, got {}", self.tau)));
        }
        if self.max_retries == 0 {
            return Err(Error::InvalidParameter("max_retries must be at least 1".into()));
        }
        Ok(())
    }

    pub fn deviation_bound(&self, order: usize) -> f64 {
        self.tau * (order as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantization {
    pub set: GroupSubset,
    /// max_{r≠0} |Ĉ(r) − f̂(r)|.
    pub deviation: f64,
    pub deviation_bound: f64,
    /// False when every attempt exceeded the bound; `set` is then the best one.
    pub accepted: bool,
    pub attempts: usize,
    pub seed: u64,
}

/// Allowed excursion of f outside [0,1].
const RANGE_SLACK: f64 = 1e-9;

/// ⌊Σf⌋ with a little slack so that Σf = m − 1e-13 still gives m.
pub fn target_cardinality(f: &DensityFunction) -> usize {
    (f.sum() + 1e-7).floor().max(0.0) as usize
}

/// One round: independent Bernoulli(f(x)) choices, then the cardinality is
/// repaired by dropping the least likely members or adding the most likely
/// non-members, ties broken at random.
pub fn round_once<R: Rng + ?Sized>(f: &DensityFunction, target: usize, rng: &mut R) -> GroupSubset {
    let values = f.values();
    let mut inside: Vec<bool> = values.iter().map(|&p| rng.gen::<f64>() < p).collect();
    let count = inside.iter().filter(|&&b| b).count();
    if count != target {
        let grow = count < target;
        let mut cand: Vec<(f64, u64, usize)> = inside
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != grow)
            .map(|(x, _)| (if grow { -values[x] } else { values[x] }, rng.gen::<u64>(), x))
            .collect();
        let need = count.abs_diff(target);
        cand.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, _, x) in cand.iter().take(need) {
            inside[x] = grow;
        }
    }
    GroupSubset::from_indicator(f.group(), &inside).expect("indicator has the group's length")
}

pub(crate) fn attempt_rng(seed: u64, attempt: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

pub(crate) struct Attempt {
    pub index: usize,
    pub set: GroupSubset,
    pub spectrum: Spectrum,
    pub deviation: f64,
    pub accepted: bool,
}

fn max_deviation(c: &Spectrum, fhat: &Spectrum) -> f64 {
    (1..c.len() as u64).map(|r| (c.value(r) - fhat.value(r)).norm()).fold(0.0, f64::max)
}

/// Runs attempts in parallel batches and returns the lowest-index attempt
/// whose deviation is within bound and that `accept` approves; failing that,
/// the attempt with the smallest deviation, flagged as not accepted.
pub(crate) fn search<F>(f: &DensityFunction, fhat: &Spectrum, cfg: &QuantizerConfig, accept: F) -> Result<Attempt>
where
    F: Fn(&GroupSubset, &Spectrum) -> bool + Sync,
{
    cfg.validate()?;
    f.check_unit_range(RANGE_SLACK)?;
    let target = target_cardinality(f);
    let bound = cfg.deviation_bound(f.group().order());
    let batch = rayon::current_num_threads().max(1);
    let mut best: Option<Attempt> = None;
    let mut start = 0;
    while start < cfg.max_retries {
        let end = (start + batch).min(cfg.max_retries);
        let results: Vec<Attempt> = (start..end)
            .into_par_iter()
            .map(|index| {
                let set = round_once(f, target, &mut attempt_rng(cfg.seed, index));
                let spectrum = spectrum(&set);
                let deviation = max_deviation(&spectrum, fhat);
                let accepted = deviation <= bound && accept(&set, &spectrum);
                Attempt { index, set, spectrum, deviation, accepted }
            })
            .collect();
        for a in results {
            if a.accepted {
                return Ok(a);
            }
            if best.as_ref().is_none_or(|b| a.deviation < b.deviation) {
                best = Some(a);
            }
        }
        start = end;
    }
    Ok(best.expect("at least one attempt ran"))
}

/// Rounds `f` to a set of size exactly ⌊Σf⌋, retrying until the deviation is
/// at most τ√|G| or the retry budget is spent.
pub fn quantize_to_set(f: &DensityFunction, cfg: &QuantizerConfig) -> Result<Quantization> {
    let fhat = spectrum_of_function(f);
    let a = search(f, &fhat, cfg, |_, _| true)?;
    Ok(Quantization {
        set: a.set,
        deviation: a.deviation,
        deviation_bound: cfg.deviation_bound(f.group().order()),
        accepted: a.accepted,
        attempts: a.index + 1,
        seed: cfg.seed,
    })
}
