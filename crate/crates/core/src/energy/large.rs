//! The large spectrum `R_α(A) = {r : |Â(r)| ≥ αN}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::group::{Group, GroupSubset};
use crate::fourier::spectrum::{spectrum, Spectrum};

/// Default threshold slack, in units of |G|.
pub const DEFAULT_ETA: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeSpectrum {
    pub group: Group,
    pub source_cardinality: usize,
    pub alpha: f64,
    pub delta: f64,
    pub eta: f64,
    /// Sorted frequencies r with |Â(r)| ≥ (α − η)|G|.
    pub members: Vec<u64>,
    /// |Â(r)| for each member, aligned with `members`.
    pub magnitudes: Vec<f64>,
    /// Frequencies whose magnitude lies within η|G| of the threshold.
    pub boundary_marginals: Vec<u64>,
}

fn check_alpha(alpha: f64, eta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0,1], got {alpha}")));
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!("eta must be a finite non-negative number, got {eta}")));
    }
    Ok(())
}

pub fn large_spectrum(a: &GroupSubset, alpha: f64, eta: f64) -> Result<LargeSpectrum> {
    LargeSpectrum::from_spectrum(&spectrum(a), alpha, eta)
}

impl LargeSpectrum {
    /// Thresholds a precomputed transform of a subset.
    ///
    /// Magnitudes at r and −r are averaged before comparison, so the member
    /// set is symmetric even when rounding splits a conjugate pair.
    pub fn from_spectrum(spec: &Spectrum, alpha: f64, eta: f64) -> Result<Self> {
        check_alpha(alpha, eta)?;
        let card = spec
            .source_cardinality()
            .ok_or_else(|| Error::InvalidParameter("large spectrum needs the transform of a subset".into()))?;
        let group = spec.group();
        let order = group.order() as f64;
        let cut = alpha * order;
        let slack = eta * order;
        let mut members = Vec::new();
        let mut magnitudes = Vec::new();
        let mut boundary = Vec::new();
        let mut consider = |r: u64, m: f64| {
            if m >= cut - slack {
                members.push(r);
                magnitudes.push(m);
            }
            if (m - cut).abs() <= slack {
                boundary.push(r);
            }
        };
        match (group, spec.integer_values()) {
            (Group::Cube { .. }, Some(v)) => {
                for (r, &x) in v.iter().enumerate() {
                    consider(r as u64, x.unsigned_abs() as f64);
                }
            }
            _ => {
                for r in 0..group.order() as u64 {
                    let m = 0.5 * (spec.abs(r) + spec.abs(group.neg(r)));
                    consider(r, m);
                }
            }
        }
        Ok(LargeSpectrum {
            group,
            source_cardinality: card,
            alpha,
            delta: card as f64 / order,
            eta,
            members,
            magnitudes,
            boundary_marginals: boundary,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, r: u64) -> bool {
        self.members.binary_search(&r).is_ok()
    }

    pub fn as_subset(&self) -> GroupSubset {
        GroupSubset::new(self.group, self.members.clone()).expect("members lie in the group")
    }

    /// R_α \ {0}.
    pub fn nonzero(&self) -> GroupSubset {
        self.as_subset().without(0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.members.iter().all(|&r| self.contains(self.group.neg(r)))
    }

    /// `δ/α²`, the Parseval ceiling on |R_α|.
    pub fn parseval_bound(&self) -> f64 {
        self.delta / (self.alpha * self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_spectrum() {
        let g = Group::cube(3).unwrap();
        let a = GroupSubset::new(g, (0..8).filter(|x| x & 1 == 0).collect()).unwrap();
        let ls = large_spectrum(&a, 0.4, DEFAULT_ETA).unwrap();
        assert_eq!(ls.members, vec![0, 1]);
        assert_eq!(ls.magnitudes, vec![4.0, 4.0]);
        assert!(ls.boundary_marginals.is_empty());
    }

    #[test]
    fn exact_threshold_is_a_marginal() {
        // Â(e1) = 4 = 0.5·8 sits on the threshold
        let g = Group::cube(3).unwrap();
        let a = GroupSubset::new(g, (0..8).filter(|x| x & 1 == 0).collect()).unwrap();
        let ls = large_spectrum(&a, 0.5, DEFAULT_ETA).unwrap();
        assert_eq!(ls.members, vec![0, 1]);
        assert_eq!(ls.boundary_marginals, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_alpha() {
        let a = GroupSubset::full(Group::cyclic(5).unwrap());
        assert!(large_spectrum(&a, 0.0, 0.0).is_err());
        assert!(large_spectrum(&a, 1.5, 0.0).is_err());
        assert!(large_spectrum(&a, 0.5, -1.0).is_err());
    }

    #[test]
    fn empty_set_has_empty_spectrum() {
        let a = GroupSubset::empty(Group::cyclic(11).unwrap());
        let ls = large_spectrum(&a, 0.1, DEFAULT_ETA).unwrap();
        assert!(ls.is_empty());
    }
}
