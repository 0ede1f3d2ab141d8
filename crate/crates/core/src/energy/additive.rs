//! Representation counts ν_s and the additive energy T_k.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::energy::large::LargeSpectrum;
use crate::error::{budget_check, Error, Result};
use crate::fourier::group::{Group, GroupSubset};
use crate::fourier::spectrum::spectrum;

/// Enumeration budget for signed s-tuples.
pub const REPRESENTATION_BUDGET: f64 = 1e8;
/// Enumeration budget for k-tuples in the brute-force energy.
pub const BRUTEFORCE_BUDGET: f64 = 1e7;
/// Largest tolerated distance of the Fourier energy from an integer.
pub const INTEGRALITY_LIMIT: f64 = 0.4;

/// How tuples are counted in ν_s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationConvention {
    /// Ordered s-tuples of base elements with independent signs.
    OrderedSigned,
    /// Sets of s distinct base elements with a sign each.
    DistinctUnordered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationCounts {
    pub group: Group,
    pub base: Vec<u64>,
    pub order: usize,
    pub convention: RepresentationConvention,
    /// Targets with non-zero count.
    pub counts: BTreeMap<u64, u64>,
}

impl RepresentationCounts {
    pub fn get(&self, n: u64) -> u64 {
        self.counts.get(&n).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// ν_s(n) for every n under the chosen convention.
pub fn representation_counts(
    base: &GroupSubset,
    s: usize,
    convention: RepresentationConvention,
) -> Result<RepresentationCounts> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be at least 1".into()));
    }
    let g = base.group();
    let elems = base.elements();
    let counts = match convention {
        RepresentationConvention::OrderedSigned => {
            budget_check("ordered representations", (2.0 * elems.len() as f64).powi(s as i32), REPRESENTATION_BUDGET)?;
            let mut cur: HashMap<u64, u64> = HashMap::from([(0, 1)]);
            for _ in 0..s {
                let mut next = HashMap::with_capacity(cur.len() * 2 * elems.len());
                for (&x, &c) in &cur {
                    for &l in elems {
                        *next.entry(g.add(x, l)).or_insert(0) += c;
                        *next.entry(g.sub(x, l)).or_insert(0) += c;
                    }
                }
                cur = next;
            }
            cur.into_iter().collect()
        }
        RepresentationConvention::DistinctUnordered => {
            let cost = binomial(elems.len() as u64, s as u64) * 2f64.powi(s as i32);
            budget_check("distinct representations", cost, REPRESENTATION_BUDGET)?;
            // layer j holds sums over j chosen elements among a prefix
            let mut layers: Vec<HashMap<u64, u64>> = vec![HashMap::new(); s + 1];
            layers[0].insert(0, 1);
            for &l in elems {
                for j in (0..s).rev() {
                    if layers[j].is_empty() {
                        continue;
                    }
                    let src: Vec<(u64, u64)> = layers[j].iter().map(|(&x, &c)| (x, c)).collect();
                    for (x, c) in src {
                        *layers[j + 1].entry(g.add(x, l)).or_insert(0) += c;
                        *layers[j + 1].entry(g.sub(x, l)).or_insert(0) += c;
                    }
                }
            }
            layers.pop().unwrap_or_default().into_iter().collect()
        }
    };
    Ok(RepresentationCounts { group: g, base: elems.to_vec(), order: s, convention, counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMethod {
    Bruteforce,
    Fourier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub group: Group,
    pub base_size: usize,
    pub k: usize,
    pub t_k: u128,
    pub method: EnergyMethod,
    /// Distance of the Fourier sum from the nearest integer (0 for brute force).
    pub integrality_residual: f64,
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok(())
}

/// T_k(B) by hashing all ordered k-fold sums and summing squared multiplicities.
pub fn energy_bruteforce(base: &GroupSubset, k: usize) -> Result<EnergyReport> {
    check_k(k)?;
    let g = base.group();
    let elems = base.elements();
    let m = elems.len();
    budget_check("brute-force energy", (m as f64).powi(k as i32), BRUTEFORCE_BUDGET)?;
    let mut t_k = 0u128;
    if m > 0 {
        let mut sums: HashMap<u64, u64> = HashMap::new();
        let mut idx = vec![0usize; k];
        loop {
            let s = idx.iter().fold(0, |acc, &i| g.add(acc, elems[i]));
            *sums.entry(s).or_insert(0) += 1;
            // odometer increment
            let mut pos = 0;
            while pos < k {
                idx[pos] += 1;
                if idx[pos] < m {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        t_k = sums.values().map(|&c| c as u128 * c as u128).sum();
    }
    Ok(EnergyReport { group: g, base_size: m, k, t_k, method: EnergyMethod::Bruteforce, integrality_residual: 0.0 })
}

/// T_k(B) = |G|^{-1} Σ_r |B̂(r)|^{2k}. Exact for cube inputs when the sum fits
/// in 128 bits; rounded from floating point otherwise.
pub fn energy_via_fourier(base: &GroupSubset, k: usize) -> Result<EnergyReport> {
    check_k(k)?;
    let g = base.group();
    let spec = spectrum(base);
    let order = g.order();
    if let Some(v) = spec.integer_values() {
        let exact = v.iter().try_fold(0u128, |acc, &x| {
            let mag = x.unsigned_abs() as u128;
            let mut p = 1u128;
            for _ in 0..2 * k {
                p = p.checked_mul(mag)?;
            }
            acc.checked_add(p)
        });
        if let Some(total) = exact {
            if total % order as u128 != 0 {
                return Err(Error::Numeric(format!("integer energy sum {total} not divisible by {order}")));
            }
            return Ok(EnergyReport {
                group: g,
                base_size: base.len(),
                k,
                t_k: total / order as u128,
                method: EnergyMethod::Fourier,
                integrality_residual: 0.0,
            });
        }
    }
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    for r in 0..order as u64 {
        let y = spec.abs(r).powi(2 * k as i32) - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    let value = total / order as f64;
    let rounded = value.round();
    let residual = (value - rounded).abs();
    if residual > INTEGRALITY_LIMIT {
        return Err(Error::Numeric(format!("Fourier energy {value} is not close to an integer")));
    }
    Ok(EnergyReport {
        group: g,
        base_size: base.len(),
        k,
        t_k: rounded as u128,
        method: EnergyMethod::Fourier,
        integrality_residual: residual,
    })
}

/// Brute force when within budget, Fourier otherwise.
pub fn energy(base: &GroupSubset, k: usize) -> Result<EnergyReport> {
    if (base.len() as f64).powi(k as i32) <= BRUTEFORCE_BUDGET {
        energy_bruteforce(base, k)
    } else {
        energy_via_fourier(base, k)
    }
}

/// `δ α^{2k} m^{2k} / (2^{4k} δ^{2k})`.
pub fn tmain_lower_bound(delta: f64, alpha: f64, k: usize, m: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= delta && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < alpha <= delta <= 1, got alpha={alpha}, delta={delta}")));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    let e = 2 * k as i32;
    Ok(delta * (alpha / delta).powi(e) * (m as f64).powi(e) / 2f64.powi(4 * k as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmainVerdict {
    pub delta: f64,
    pub alpha: f64,
    pub k: usize,
    pub base_size: usize,
    pub t_k: u128,
    pub lower_bound: f64,
    pub method: EnergyMethod,
    pub verdict: bool,
}

/// Checks `T_k(B) ≥ tmain_lower_bound` for `B ⊆ R_α \ {0}` given the large spectrum.
pub fn check_tmain_with(ls: &LargeSpectrum, b: &GroupSubset, k: usize) -> Result<TmainVerdict> {
    if b.group() != ls.group {
        return Err(Error::GroupMismatch { expected: ls.group.to_string(), found: b.group().to_string() });
    }
    if let Some(&bad) = b.elements().iter().find(|&&r| r == 0 || !ls.contains(r)) {
        return Err(Error::Precondition(format!("{bad} is not in R_alpha \\ {{0}}")));
    }
    let lower_bound = tmain_lower_bound(ls.delta, ls.alpha, k, b.len())?;
    let rep = energy(b, k)?;
    Ok(TmainVerdict {
        delta: ls.delta,
        alpha: ls.alpha,
        k,
        base_size: b.len(),
        t_k: rep.t_k,
        lower_bound,
        method: rep.method,
        verdict: rep.t_k as f64 >= lower_bound,
    })
}

pub fn check_tmain(a: &GroupSubset, alpha: f64, b: &GroupSubset, k: usize, eta: f64) -> Result<TmainVerdict> {
    let ls = crate::energy::large::large_spectrum(a, alpha, eta)?;
    check_tmain_with(&ls, b, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: u64, e: &[u64]) -> GroupSubset {
        GroupSubset::new(Group::cyclic(n).unwrap(), e.to_vec()).unwrap()
    }

    #[test]
    fn single_generator_counts() {
        let rc = representation_counts(&cyc(10, &[1]), 1, RepresentationConvention::OrderedSigned).unwrap();
        assert_eq!(rc.get(1), 1);
        assert_eq!(rc.get(9), 1);
        assert_eq!(rc.total(), 2);
    }

    #[test]
    fn ordered_pair_counts() {
        let rc = representation_counts(&cyc(100, &[1, 2]), 2, RepresentationConvention::OrderedSigned).unwrap();
        assert_eq!(rc.get(3), 2);
        assert_eq!(rc.total(), 16);
        let d = representation_counts(&cyc(100, &[1, 2]), 2, RepresentationConvention::DistinctUnordered).unwrap();
        assert_eq!(d.get(3), 1);
        assert_eq!(d.total(), 4);
    }

    #[test]
    fn singleton_energy() {
        let b = cyc(17, &[5]);
        for k in 1..5 {
            assert_eq!(energy_bruteforce(&b, k).unwrap().t_k, 1);
            assert_eq!(energy_via_fourier(&b, k).unwrap().t_k, 1);
        }
    }

    #[test]
    fn full_group_energy() {
        let b = GroupSubset::full(Group::cyclic(7).unwrap());
        assert_eq!(energy_via_fourier(&b, 2).unwrap().t_k, 343);
        assert_eq!(energy_bruteforce(&b, 2).unwrap().t_k, 343);
    }

    #[test]
    fn subgroup_energy() {
        // span of e1, e2, e3 in Z_2^6
        let g = Group::cube(6).unwrap();
        let b = GroupSubset::new(g, (0..8).collect()).unwrap();
        for k in 2..4 {
            let want = 8u128.pow(2 * k as u32 - 1);
            assert_eq!(energy_bruteforce(&b, k).unwrap().t_k, want);
            assert_eq!(energy_via_fourier(&b, k).unwrap().t_k, want);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let b = GroupSubset::full(Group::cyclic(200).unwrap());
        assert!(matches!(energy_bruteforce(&b, 4), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn lower_bound_domain() {
        assert!(tmain_lower_bound(0.1, 0.2, 2, 3).is_err());
        assert!(tmain_lower_bound(0.1, 0.1, 1, 3).is_err());
        assert!(tmain_lower_bound(0.1, 0.0, 2, 3).is_err());
    }

    #[test]
    fn empty_base_is_vacuous() {
        let a = cyc(31, &[0, 1, 2, 3, 4]);
        let v = check_tmain(&a, 0.1, &GroupSubset::empty(a.group()), 2, 1e-9).unwrap();
        assert_eq!(v.lower_bound, 0.0);
        assert!(v.verdict);
    }

    #[test]
    fn base_outside_spectrum_is_rejected() {
        let a = cyc(31, &[0, 1, 2, 3, 4]);
        assert!(check_tmain(&a, 0.1, &cyc(31, &[0]), 2, 1e-9).is_err());
    }
}
