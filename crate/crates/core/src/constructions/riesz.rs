//! Riesz products over 2-dissociated frequency sets.

use serde::{Deserialize, Serialize};

use crate::constructions::quantize::{search, QuantizerConfig};
use crate::constructions::report::{
    symmetric_closure, Check, ConstructionReport, Draft, FunctionDiagnostics, QuantizerStats, Regime,
};
use crate::dissociation::{family_membership, FamilyParams, Variant};
use crate::energy::{LargeSpectrum, DEFAULT_ETA};
use crate::error::{Error, Result};
use crate::fourier::arith::mul_mod;
use crate::fourier::group::{DensityFunction, GroupSubset};
use crate::fourier::spectrum::{spectrum_of_function, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszConfig {
    pub c: f64,
    pub delta: f64,
    pub alpha: f64,
}

impl RieszConfig {
    pub fn new(delta: f64, alpha: f64) -> Result<Self> {
        let cfg = RieszConfig { c: 1.5 * std::f64::consts::LN_2, delta, alpha };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= self.delta && self.delta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < alpha <= delta <= 1, got delta={}, alpha={}",
                self.delta, self.alpha
            )));
        }
        Ok(())
    }

    /// (δ/(3α))·log2(1/δ).
    pub fn max_cardinality(&self) -> f64 {
        self.delta / (3.0 * self.alpha) * (1.0 / self.delta).log2()
    }

    /// Amplitude 2cα/δ of each cosine factor.
    pub fn amplitude(&self) -> f64 {
        2.0 * self.c * self.alpha / self.delta
    }
}

pub fn is_two_dissociated(lambda: &GroupSubset) -> Result<bool> {
    Ok(family_membership(lambda, &FamilyParams::new(2, None), Variant::KDissociated, None)?.verdict)
}

fn riesz_values(lambda: &GroupSubset, cfg: &RieszConfig) -> Result<DensityFunction> {
    cfg.validate()?;
    let g = lambda.group();
    let modulus = g.expect_cyclic()?;
    if lambda.contains(0) {
        return Err(Error::Precondition("0 cannot be a Riesz frequency".into()));
    }
    if lambda.len() as f64 > cfg.max_cardinality() {
        return Err(Error::Precondition(format!(
            "|Lambda| = {} exceeds (delta/(3 alpha)) log2(1/delta) = {:.4}",
            lambda.len(),
            cfg.max_cardinality()
        )));
    }
    let a = cfg.amplitude();
    let mut values = vec![cfg.delta; modulus as usize];
    for &l in lambda.elements() {
        for (x, v) in values.iter_mut().enumerate() {
            let phase = mul_mod(x as u64, l, modulus) as f64 / modulus as f64;
            *v *= 1.0 + a * (std::f64::consts::TAU * phase).cos();
        }
    }
    let f = DensityFunction::new(g, values)?;
    if f.max() > 1.0 + 1e-12 {
        return Err(Error::Precondition(format!("Riesz product exceeds 1 (max {})", f.max())));
    }
    Ok(f)
}

/// `f(x) = δ ∏_{λ∈Λ} (1 + (2cα/δ) cos(2πλx/N))` for a 2-dissociated Λ.
pub fn riesz_product(lambda: &GroupSubset, cfg: &RieszConfig) -> Result<DensityFunction> {
    if !is_two_dissociated(lambda)? {
        return Err(Error::Precondition("Lambda is not 2-dissociated".into()));
    }
    riesz_values(lambda, cfg)
}

/// Measured spectral windows of a Riesz product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszWindows {
    /// min |f̂| over ±Λ, divided by αN.
    pub min_on_lambda: f64,
    /// max |f̂| off {0} ⊔ ±Λ, divided by αN.
    pub max_off_lambda: f64,
    pub sum_relative_error: f64,
    /// min ≥ 1 + 2^-5.
    pub lower_window: bool,
    /// max ≤ 1/2.
    pub upper_window: bool,
}

pub fn riesz_windows(f: &DensityFunction, fhat: &Spectrum, lambda: &GroupSubset, cfg: &RieszConfig) -> RieszWindows {
    let g = lambda.group();
    let scale = cfg.alpha * g.order() as f64;
    let keys = symmetric_closure(g, lambda.elements());
    let mut min_on: f64 = f64::INFINITY;
    let mut max_off: f64 = 0.0;
    for r in 1..g.order() as u64 {
        let m = fhat.abs(r) / scale;
        if keys.binary_search(&r).is_ok() {
            min_on = min_on.min(m);
        } else {
            max_off = max_off.max(m);
        }
    }
    let want = cfg.delta * g.order() as f64;
    let sum_relative_error = (f.sum() - want).abs() / want;
    RieszWindows {
        min_on_lambda: min_on,
        max_off_lambda: max_off,
        sum_relative_error,
        lower_window: min_on >= 1.0 + 1.0 / 32.0,
        upper_window: max_off <= 0.5,
    }
}

/// Quantizes a Riesz product aiming at R_α(A) = {0} ⊔ Λ ⊔ −Λ.
///
/// With `relaxed` the 2-dissociation hypothesis is measured and reported
/// rather than enforced.
pub fn construct_riesz(
    lambda: &GroupSubset,
    delta: f64,
    alpha: f64,
    qcfg: &QuantizerConfig,
    relaxed: bool,
) -> Result<ConstructionReport> {
    let cfg = RieszConfig::new(delta, alpha)?;
    let dissociated = is_two_dissociated(lambda)?;
    if !dissociated && !relaxed {
        return Err(Error::Precondition("Lambda is not 2-dissociated".into()));
    }
    let f = riesz_values(lambda, &cfg)?;
    let g = lambda.group();
    let order = g.order() as f64;
    let hypotheses = dissociated && 640.0 / order.sqrt() < alpha && alpha <= delta / 1024.0;
    let regime = Regime::from_hypotheses(hypotheses);
    let fhat = spectrum_of_function(&f);
    let target = symmetric_closure(g, lambda.elements());
    let attempt = search(&f, &fhat, qcfg, |_, spec| {
        LargeSpectrum::from_spectrum(spec, alpha, DEFAULT_ETA).is_ok_and(|l| l.members == target)
    })?;
    let large = LargeSpectrum::from_spectrum(&attempt.spectrum, alpha, DEFAULT_ETA)?;
    let windows = riesz_windows(&f, &fhat, lambda, &cfg);
    let mut d = Draft::new("riesz", delta, alpha, regime, attempt.set);
    d.function = Some(FunctionDiagnostics::new(&f, &fhat, &target));
    d.target = Some(target);
    d.quantizer = Some(QuantizerStats {
        deviation: attempt.deviation,
        deviation_bound: qcfg.deviation_bound(order as usize),
        accepted: attempt.accepted,
        seed: qcfg.seed,
    });
    d.retries_used = attempt.index + 1;
    d.checks.push(Check::holds("Lambda 2-dissociated", dissociated, regime).enforced_if(!relaxed));
    d.checks.push(Check::at_most("max f", f.max(), 1.0, regime));
    d.checks.push(Check::at_least("min |f^| on ±Lambda / alpha N", windows.min_on_lambda, 1.0 + 1.0 / 32.0, regime).enforced_if(hypotheses));
    d.checks.push(Check::at_most("max |f^| off {0}+±Lambda / alpha N", windows.max_off_lambda, 0.5, regime).enforced_if(hypotheses));
    d.checks.push(Check::at_least("alpha N / (tau sqrt N)", alpha * order.sqrt() / qcfg.tau, 4.0, regime).informational());
    if !hypotheses {
        d.notes.push("hypotheses (2-dissociated, 640/sqrt N < alpha <= delta/1024) not all met".into());
    }
    Ok(d.finish(&attempt.spectrum, &large, qcfg.seed))
}
