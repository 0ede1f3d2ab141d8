//! Random members of Λ̃(k,s) of prescribed size.

use rand::seq::index::sample;
use rand::Rng;

use crate::dissociation::family::{family_membership_with, FamilyParams, Variant};
use crate::dissociation::search::SearchOptions;
use crate::error::{Error, Result};
use crate::fourier::group::{Group, GroupSubset};

pub const RANDOM_FAMILY_RETRIES: usize = 1000;

pub(crate) fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `C(t, min(k,t)) · (2s+1)^{min(k,t)}`, the count the size condition compares N against.
pub fn random_family_threshold(t: usize, k: u64, s: u64) -> f64 {
    let k = k.min(t as u64);
    binomial(t as u64, k) * ((2 * s + 1) as f64).powi(k as i32)
}

/// Draws t distinct non-zero residues until they form a member of Λ̃(k,s).
pub fn random_family_set<R: Rng + ?Sized>(t: usize, k: u64, s: u64, modulus: u64, rng: &mut R) -> Result<GroupSubset> {
    let group = Group::cyclic(modulus)?;
    if t == 0 || k == 0 || s == 0 {
        return Err(Error::InvalidParameter("t, k and s must be positive".into()));
    }
    let need = random_family_threshold(t, k, s);
    if modulus as f64 <= need {
        return Err(Error::Precondition(format!("N = {modulus} must exceed C(t,k)(2s+1)^k = {need}")));
    }
    if (t as u64) >= modulus {
        return Err(Error::Precondition(format!("cannot draw {t} distinct non-zero residues mod {modulus}")));
    }
    let params = FamilyParams::new(k.min(t as u64), Some(s));
    let opts = SearchOptions::default();
    for _ in 0..RANDOM_FAMILY_RETRIES {
        let picks: Vec<u64> = sample(rng, modulus as usize - 1, t).into_iter().map(|i| i as u64 + 1).collect();
        let set = GroupSubset::new(group, picks)?;
        let cert = family_membership_with(&set, &params, Variant::Tilde, None, &opts)?;
        if cert.verdict {
            return Ok(set);
        }
    }
    Err(Error::RetriesExhausted(RANDOM_FAMILY_RETRIES))
}
