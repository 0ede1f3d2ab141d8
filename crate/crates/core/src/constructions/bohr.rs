//! One-dimensional Bohr sets in Z_p and unions of their shifts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::report::{measure, Check, ConstructionReport, Draft, Regime};
use crate::dissociation::{random_family_set, random_family_threshold};
use crate::energy::energy;
use crate::error::{Error, Result};
use crate::fourier::arith::{inverse_mod, mul_mod, reduce_signed, residue_abs};
use crate::fourier::fft::cross_correlation;
use crate::fourier::group::{Group, GroupSubset};
use crate::fourier::spectrum::spectrum;

/// [εN] computed with a little slack against representation error.
fn radius(epsilon: f64, modulus: u64) -> u64 {
    (epsilon * modulus as f64 + 1e-9).floor() as u64
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    Ok(())
}

/// `B_λ(ε) = {x : ‖xλ/N‖ ≤ ε} = {jλ^{-1} : |j| ≤ [εN]}`.
pub fn bohr_set(lambda: u64, epsilon: f64, modulus: u64) -> Result<GroupSubset> {
    let g = Group::cyclic(modulus)?;
    g.require_prime()?;
    check_epsilon(epsilon)?;
    let lambda = lambda % modulus;
    if lambda == 0 {
        return Err(Error::InvalidParameter("lambda must be non-zero".into()));
    }
    let inv = inverse_mod(lambda, modulus)?;
    let l = radius(epsilon, modulus);
    let elems = (0..=l).flat_map(|j| {
        let x = mul_mod(j, inv, modulus);
        [x, g.neg(x)]
    });
    GroupSubset::new(g, elems.collect())
}

/// Measured spectral bounds of one Bohr set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BohrBounds {
    pub lambda: u64,
    pub epsilon: f64,
    pub cardinality: usize,
    /// max over r ≠ 0 of |B̂(r)|·|λ^{-1}r| / N; at most 1 when the decay bound holds.
    pub decay_ratio: f64,
    /// min over r ∈ M_λ of B̂(r) / (εN); at least 3/2 when the plateau bound holds.
    pub plateau_ratio: f64,
    /// [1/(16ε)].
    pub plateau_radius: u64,
}

impl BohrBounds {
    pub fn decay_holds(&self) -> bool {
        self.decay_ratio <= 1.0 + 1e-9
    }

    pub fn plateau_holds(&self) -> bool {
        self.plateau_ratio >= 1.5
    }
}

/// `M_λ = {λp : |p| ≤ [1/(16ε)]}`.
pub fn plateau_set(lambda: u64, epsilon: f64, modulus: u64) -> Result<GroupSubset> {
    let g = Group::cyclic(modulus)?;
    let p = (1.0 / (16.0 * epsilon) + 1e-9).floor() as i64;
    let elems = (-p..=p).map(|j| mul_mod(lambda % modulus, reduce_signed(j as i128, modulus), modulus));
    GroupSubset::new(g, elems.collect())
}

pub fn bohr_bounds(lambda: u64, epsilon: f64, modulus: u64) -> Result<BohrBounds> {
    let b = bohr_set(lambda, epsilon, modulus)?;
    let spec = spectrum(&b);
    let inv = inverse_mod(lambda % modulus, modulus)?;
    let n = modulus as f64;
    let decay_ratio = (1..modulus)
        .map(|r| spec.abs(r) * residue_abs(mul_mod(inv, r, modulus), modulus) as f64 / n)
        .fold(0.0, f64::max);
    let m = plateau_set(lambda, epsilon, modulus)?;
    let plateau_ratio = m.elements().iter().map(|&r| spec.value(r).re / (epsilon * n)).fold(f64::INFINITY, f64::min);
    Ok(BohrBounds {
        lambda,
        epsilon,
        cardinality: b.len(),
        decay_ratio,
        plateau_ratio,
        plateau_radius: (1.0 / (16.0 * epsilon) + 1e-9).floor() as u64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BohrUnionConfig {
    pub delta: f64,
    pub alpha: f64,
    pub k: usize,
    pub modulus: u64,
    /// Allow desk-scale parameters: shrink s to fit N and report bounds without enforcing them.
    pub relaxed: bool,
}

impl BohrUnionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= self.delta && self.delta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < alpha <= delta <= 1, got delta={}, alpha={}",
                self.delta, self.alpha
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Group::cyclic(self.modulus)?.require_prime()?;
        check_epsilon(self.epsilon())
    }

    /// t = [δ/α], the rounding used by the proof.
    pub fn t(&self) -> usize {
        ((self.delta / self.alpha + 1e-9).floor() as usize).max(1)
    }

    pub fn epsilon(&self) -> f64 {
        self.delta / self.t() as f64
    }

    pub fn k1(&self) -> usize {
        2 * self.k
    }

    pub fn m(&self) -> usize {
        self.t().max(self.k1())
    }

    /// s = ⌈8m/ε⌉.
    pub fn s(&self) -> u64 {
        (8.0 * self.m() as f64 / self.epsilon() - 1e-9).ceil() as u64
    }

    /// 2k·max{log(2^6 δk/α²), log(2^6 δ²/α³)} ≤ log N.
    pub fn size_condition(&self) -> bool {
        let (d, a, k) = (self.delta, self.alpha, self.k as f64);
        let lhs = 2.0 * k * (64.0 * d * k / (a * a)).log2().max((64.0 * d * d / (a * a * a)).log2());
        lhs <= (self.modulus as f64).log2()
    }

    pub fn hypotheses(&self) -> bool {
        let (d, a) = (self.delta, self.alpha);
        32.0 * d * d <= a && a <= d / 4.0 && self.k >= 2 && self.k as f64 <= 0.5 * (1.0 / d).log2() && self.size_condition()
    }

    /// The s handed to the family sampler: s itself when N is large enough,
    /// otherwise (relaxed only) the largest s' with C(t,k)(2s'+1)^k < N.
    pub fn family_s(&self) -> Result<u64> {
        let (t, k1, n) = (self.t(), self.k1() as u64, self.modulus as f64);
        let s = self.s();
        if random_family_threshold(t, k1, s) < n {
            return Ok(s);
        }
        if !self.relaxed {
            return Err(Error::Precondition(format!("N = {} too small for the family size condition with s = {s}", self.modulus)));
        }
        let mut lo = 0u64;
        let mut hi = s;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if random_family_threshold(t, k1, mid) < n {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            return Err(Error::Precondition(format!("N = {} admits no s >= 1 for t = {t}", self.modulus)));
        }
        Ok(lo)
    }
}

/// Result of one greedy shift step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftStep {
    pub lambda: u64,
    pub shift: u64,
    pub overlap: usize,
    /// |C_d|·|B|/N, the average over all shifts.
    pub average: f64,
    /// (2εN+1)²t.
    pub stated_bound: f64,
}

/// Shift minimizing |C ∩ (B + s)|, scanning every s through one cross-correlation.
pub fn best_shift(c: &GroupSubset, b: &GroupSubset) -> (u64, usize) {
    let corr = cross_correlation(&c.indicator_f64(), &b.indicator_f64());
    let (s, v) = corr
        .iter()
        .enumerate()
        .map(|(s, v)| (s, v.round() as i64))
        .min_by_key(|&(s, v)| (v, s))
        .expect("non-empty group");
    (s as u64, v.max(0) as usize)
}

/// `A = ⋃ (B_{λ_i}(ε) + s_i)` with Λ drawn from the random family and shifts chosen greedily.
pub fn construct_bohr_union(cfg: &BohrUnionConfig, seed: u64) -> Result<ConstructionReport> {
    cfg.validate()?;
    let hypotheses = cfg.hypotheses();
    if !hypotheses && !cfg.relaxed {
        return Err(Error::Precondition("parameters violate the theorem's hypotheses; use relaxed mode".into()));
    }
    let regime = Regime::from_hypotheses(hypotheses);
    let n = cfg.modulus;
    let g = Group::cyclic(n)?;
    let (t, eps) = (cfg.t(), cfg.epsilon());
    let fs = cfg.family_s()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = random_family_set(t, cfg.k1() as u64, fs, n, &mut rng)?;

    let mut union = GroupSubset::empty(g);
    let mut steps = Vec::with_capacity(t);
    for &l in lambda.elements() {
        let b = bohr_set(l, eps, n)?;
        let (shift, overlap) = if union.is_empty() { (0, 0) } else { best_shift(&union, &b) };
        steps.push(ShiftStep {
            lambda: l,
            shift,
            overlap,
            average: union.len() as f64 * b.len() as f64 / n as f64,
            stated_bound: (2.0 * eps * n as f64 + 1.0).powi(2) * t as f64,
        });
        union = union.union(&b.shifted(shift))?;
    }
    let (spec, large) = measure(&union, cfg.alpha)?;

    let dn = cfg.delta * n as f64;
    let mut d = Draft::new("bohr_union", cfg.delta, cfg.alpha, regime, union.clone());
    d.param("t", t);
    d.param("t_rounding", "floor");
    d.param("epsilon", eps);
    d.param("k1", cfg.k1());
    d.param("m", cfg.m());
    d.param("s", cfg.s());
    d.param("family_s", fs);
    d.param("lambda", lambda.elements());
    d.param("shifts", &steps);
    if fs < cfg.s() {
        d.notes.push(format!("s reduced from {} to {fs} so that N exceeds the family size condition", cfg.s()));
    }
    d.checks.push(Check::at_least("|A| / (delta N)", union.len() as f64 / dn, 1.0, regime));
    d.checks.push(Check::at_most("|A| / (delta N) upper", union.len() as f64 / dn, 3.0, regime));
    let worst_step = steps.iter().map(|s| s.overlap as f64 - s.average).fold(f64::NEG_INFINITY, f64::max);
    d.checks.push(Check::at_most("max shift overlap minus average", worst_step.max(0.0), 0.0, regime));
    let mut plateau_ok = true;
    for &l in lambda.elements() {
        let m = plateau_set(l, eps, n)?;
        plateau_ok &= m.elements().iter().all(|&r| large.contains(r));
    }
    d.checks.push(Check::holds("union of M_lambda inside R_alpha(A)", plateau_ok, regime));
    let card_bound = cfg.delta / (64.0 * cfg.alpha * cfg.alpha);
    d.checks.push(Check::at_least("|R_alpha(A)|", large.len() as f64, card_bound, regime).enforced_if(hypotheses));
    let energy_bound = 2f64.powi(14 * cfg.k as i32) * cfg.delta / cfg.alpha.powi(2 * cfg.k as i32);
    match energy(&large.as_subset(), cfg.k) {
        Ok(e) => d.checks.push(Check::at_most("T_k(R_alpha(A))", e.t_k as f64, energy_bound, regime).enforced_if(hypotheses)),
        Err(e) => d.notes.push(format!("T_k not evaluated: {e}")),
    }
    if !hypotheses {
        d.notes.push("cardinality and energy conclusions are informational outside the size condition".into());
    }
    Ok(d.finish(&spec, &large, seed))
}
