//! Products of truncated-series polynomials in normalized cosine sums.

use serde::{Deserialize, Serialize};

use crate::constructions::quantize::{search, QuantizerConfig};
use crate::constructions::report::{
    symmetric_closure, Check, ConstructionReport, Draft, FunctionDiagnostics, QuantizerStats, Regime,
};
use crate::dissociation::{family_membership_with, FamilyParams, SearchOptions, Variant};
use crate::energy::{LargeSpectrum, DEFAULT_ETA};
use crate::error::{Error, Result};
use crate::fourier::arith::mul_mod;
use crate::fourier::group::{DensityFunction, Group, GroupSubset};
use crate::fourier::spectrum::{spectrum_of_function, Spectrum};

/// `p_k(x) = 2 + x Σ_{j=0}^k (−1)^j x^{2j} / (2^{4j} j!)`.
pub fn riesz_poly(k: u32, x: f64) -> f64 {
    let y = x * x / 16.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..=k {
        term *= -y / j as f64;
        sum += term;
    }
    2.0 + x * sum
}

fn check_blocks(blocks: &[Vec<u64>]) -> Result<()> {
    if blocks.is_empty() || blocks.iter().any(|b| b.is_empty()) {
        return Err(Error::Precondition("partition needs non-empty blocks".into()));
    }
    let lo = blocks.iter().map(Vec::len).min().unwrap_or(0);
    let hi = blocks.iter().map(Vec::len).max().unwrap_or(0);
    if hi > 2 * lo {
        return Err(Error::Precondition(format!("block sizes {lo}..{hi} differ more than twofold")));
    }
    let mut all: Vec<u64> = blocks.iter().flatten().copied().collect();
    all.sort_unstable();
    let n = all.len();
    all.dedup();
    if all.len() != n {
        return Err(Error::Precondition("blocks overlap".into()));
    }
    Ok(())
}

/// `g(x) = 4^{−p} ∏_i p_{k_i}( Σ_{λ∈Λ_i} cos(2πλx/N) / √k_i )` with `k_i = |Λ_i|`.
pub fn green_plus_function(group: Group, blocks: &[Vec<u64>]) -> Result<DensityFunction> {
    let modulus = group.expect_cyclic()?;
    check_blocks(blocks)?;
    for &l in blocks.iter().flatten() {
        group.check(l)?;
        if l == 0 {
            return Err(Error::Precondition("0 cannot be a frequency".into()));
        }
    }
    let n = modulus as usize;
    let mut values = vec![0.25f64.powi(blocks.len() as i32); n];
    let mut cos_sum = vec![0.0f64; n];
    for block in blocks {
        cos_sum.iter_mut().for_each(|c| *c = 0.0);
        for &l in block {
            for (x, c) in cos_sum.iter_mut().enumerate() {
                *c += (std::f64::consts::TAU * mul_mod(x as u64, l, modulus) as f64 / modulus as f64).cos();
            }
        }
        let k = block.len() as u32;
        let norm = (k as f64).sqrt();
        for (v, &c) in values.iter_mut().zip(&cos_sum) {
            *v *= riesz_poly(k, c / norm);
        }
    }
    DensityFunction::new(group, values)
}

/// `|ĝ(λ)|·2^{p+1}/N`: the coefficient of the first power in the block's
/// polynomial once the other blocks' constant terms (2 each) are divided out.
pub fn leading_coefficient(ghat: &Spectrum, lambda: u64, p: usize) -> f64 {
    ghat.abs(lambda) * 2f64.powi(p as i32 + 1) / ghat.group().order() as f64
}

/// Coefficient diagnostics of the Green+ function on each block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenWindow {
    pub lambda: u64,
    pub block_size: usize,
    /// leading_coefficient · √k_i.
    pub normalized: f64,
    /// |ĝ(λ)| / (2^{−p}N/(8√k_i)).
    pub lower_ratio: f64,
}

pub fn green_windows(ghat: &Spectrum, blocks: &[Vec<u64>]) -> Vec<GreenWindow> {
    let p = blocks.len();
    let n = ghat.group().order() as f64;
    let g = ghat.group();
    blocks
        .iter()
        .flat_map(|b| {
            let k = b.len() as f64;
            b.iter().flat_map(move |&l| [l, g.neg(l)]).map(move |l| GreenWindow {
                lambda: l,
                block_size: b.len(),
                normalized: leading_coefficient(ghat, l, p) * k.sqrt(),
                lower_ratio: ghat.abs(l) / (2f64.powi(-(p as i32)) * n / (8.0 * k.sqrt())),
            })
        })
        .collect()
}

/// Budgets for the randomized falsification of the family hypothesis.
fn spot_options(seed: u64) -> SearchOptions {
    SearchOptions { store_budget: 1e5, stream_budget: 1e6, fallback_samples: 1 << 14, seed }
}

/// Quantizes `γg` with `γ = δ·2^p` aiming at R_α(A) = {0} ⊔ Λ ⊔ −Λ.
pub fn construct_green_plus(
    lambda: &GroupSubset,
    blocks: &[Vec<u64>],
    delta: f64,
    alpha: f64,
    qcfg: &QuantizerConfig,
    relaxed: bool,
) -> Result<ConstructionReport> {
    let g = lambda.group();
    let mut flat: Vec<u64> = blocks.iter().flatten().copied().collect();
    flat.sort_unstable();
    if flat != lambda.elements() {
        return Err(Error::Precondition("blocks do not partition Lambda".into()));
    }
    if !(alpha > 0.0 && alpha <= delta) {
        return Err(Error::InvalidParameter(format!("need 0 < alpha <= delta, got delta={delta}, alpha={alpha}")));
    }
    let p = blocks.len();
    let gamma = delta * 2f64.powi(p as i32);
    if !(0.5 - 1e-12..=1.0 + 1e-12).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "gamma = delta 2^p = {gamma} outside [1/2, 1]; need 2^-(p+1) <= delta <= 2^-p"
        )));
    }
    let base = green_plus_function(g, blocks)?;
    let f = base.scaled(gamma);
    let order = g.order() as f64;

    let kk = (delta / alpha).powi(2).ceil() as u64;
    let params = FamilyParams::new(kk, Some(kk)).with_p(p);
    let cert = family_membership_with(lambda, &params, Variant::Partitioned, Some(blocks), &spot_options(qcfg.seed))?;
    if !cert.verdict && !relaxed {
        return Err(Error::Precondition(format!("Lambda falls outside the partitioned family: {:?}", cert.witness)));
    }
    let size_cap = (delta / alpha).powi(2) * (1.0 / delta).log2() / 4096.0;
    let hypotheses = cert.verdict
        && delta <= 0.125
        && 640.0 / order.sqrt() < alpha
        && alpha <= delta / 2f64.powi(27)
        && lambda.len() as f64 <= size_cap;
    let regime = Regime::from_hypotheses(hypotheses);

    let fhat = spectrum_of_function(&f);
    let target = symmetric_closure(g, lambda.elements());
    let attempt = search(&f, &fhat, qcfg, |_, spec| {
        LargeSpectrum::from_spectrum(spec, alpha, DEFAULT_ETA).is_ok_and(|l| l.members == target)
    })?;
    let large = LargeSpectrum::from_spectrum(&attempt.spectrum, alpha, DEFAULT_ETA)?;
    let ghat = spectrum_of_function(&base);
    let windows = green_windows(&ghat, blocks);

    let mut d = Draft::new("green_plus", delta, alpha, regime, attempt.set);
    d.function = Some(FunctionDiagnostics::new(&f, &fhat, &target));
    d.target = Some(target);
    d.gamma = Some(gamma);
    d.quantizer = Some(QuantizerStats {
        deviation: attempt.deviation,
        deviation_bound: qcfg.deviation_bound(order as usize),
        accepted: attempt.accepted,
        seed: qcfg.seed,
    });
    d.retries_used = attempt.index + 1;
    d.checks.push(Check::holds("Lambda in partitioned family (spot check)", cert.verdict, regime).enforced_if(!relaxed));
    d.checks.push(Check::at_least("min g", base.min(), -1e-12, regime));
    d.checks.push(Check::at_most("max g", base.max(), 1.0 + 1e-12, regime));
    let sum_err = (base.sum() - order / 2f64.powi(p as i32)).abs() / (order / 2f64.powi(p as i32));
    d.checks.push(Check::at_most("relative error of sum g vs 2^-p N", sum_err, 1e-9, regime));
    let min_ratio = windows.iter().map(|w| w.lower_ratio).fold(f64::INFINITY, f64::min);
    d.checks.push(Check::at_least("min |g^(lambda)| / (2^-p N/(8 sqrt k_i))", min_ratio, 1.0, regime));
    if !cert.exhaustive {
        d.notes.push("family hypothesis checked by random falsification only".into());
    }
    Ok(d.finish(&attempt.spectrum, &large, qcfg.seed))
}
