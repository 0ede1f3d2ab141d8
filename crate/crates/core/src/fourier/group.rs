//! Ambient groups (Z_N and Z_2^n), subsets and real-valued functions on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::arith::{is_prime, mul_mod, reduce_signed};

/// Largest cube dimension we are willing to tabulate.
pub const MAX_CUBE_DIM: u32 = 30;

/// The ambient finite abelian group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Group {
    /// Z_N.
    Cyclic { modulus: u64 },
    /// Z_2^n, elements are n-bit masks.
    Cube { dim: u32 },
}

impl Group {
    pub fn cyclic(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidParameter(format!("cyclic modulus must be >= 2, got {modulus}")));
        }
        if modulus > (1u64 << 40) {
            return Err(Error::InvalidParameter(format!("modulus {modulus} too large to tabulate")));
        }
        Ok(Group::Cyclic { modulus })
    }

    pub fn cube(dim: u32) -> Result<Self> {
        if dim == 0 || dim > MAX_CUBE_DIM {
            return Err(Error::InvalidParameter(format!("cube dimension must be in 1..={MAX_CUBE_DIM}, got {dim}")));
        }
        Ok(Group::Cube { dim })
    }

    /// |G|.
    pub fn order(&self) -> usize {
        match *self {
            Group::Cyclic { modulus } => modulus as usize,
            Group::Cube { dim } => 1usize << dim,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, Group::Cyclic { .. })
    }

    /// N for Z_N, n for Z_2^n.
    pub fn parameter(&self) -> u64 {
        match *self {
            Group::Cyclic { modulus } => modulus,
            Group::Cube { dim } => dim as u64,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Group::Cyclic { .. } => "cyclic",
            Group::Cube { .. } => "cube",
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        (x as u128) < self.order() as u128
    }

    pub fn check(&self, x: u64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element: x, group: self.to_string() })
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match *self {
            Group::Cyclic { modulus } => {
                let s = a + b;
                if s >= modulus {
                    s - modulus
                } else {
                    s
                }
            }
            Group::Cube { .. } => a ^ b,
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        match *self {
            Group::Cyclic { modulus } => {
                if a == 0 {
                    0
                } else {
                    modulus - a
                }
            }
            Group::Cube { .. } => a,
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    /// `c · a` for an integer coefficient `c`.
    #[inline]
    pub fn scale(&self, a: u64, c: i64) -> u64 {
        match *self {
            Group::Cyclic { modulus } => {
                let cr = reduce_signed(c as i128, modulus);
                mul_mod(a, cr, modulus)
            }
            Group::Cube { .. } => {
                if c.rem_euclid(2) == 1 {
                    a
                } else {
                    0
                }
            }
        }
    }

    /// `Σ c_i a_i`.
    pub fn combination(&self, elements: &[u64], coeffs: &[i64]) -> u64 {
        debug_assert_eq!(elements.len(), coeffs.len());
        elements.iter().zip(coeffs).fold(0, |acc, (&a, &c)| self.add(acc, self.scale(a, c)))
    }

    /// Requires a prime modulus (used by the Bohr machinery).
    pub fn require_prime(&self) -> Result<u64> {
        match *self {
            Group::Cyclic { modulus } if is_prime(modulus) => Ok(modulus),
            Group::Cyclic { modulus } => Err(Error::NotPrime(modulus)),
            Group::Cube { .. } => Err(Error::GroupMismatch { expected: "cyclic".into(), found: self.to_string() }),
        }
    }

    pub fn expect_cyclic(&self) -> Result<u64> {
        match *self {
            Group::Cyclic { modulus } => Ok(modulus),
            _ => Err(Error::GroupMismatch { expected: "cyclic".into(), found: self.to_string() }),
        }
    }

    pub fn expect_cube(&self) -> Result<u32> {
        match *self {
            Group::Cube { dim } => Ok(dim),
            _ => Err(Error::GroupMismatch { expected: "cube".into(), found: self.to_string() }),
        }
    }

    pub(crate) fn same_as(&self, other: &Group) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GroupMismatch { expected: self.to_string(), found: other.to_string() })
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Cyclic { modulus } => write!(f, "Z_{modulus}"),
            Group::Cube { dim } => write!(f, "Z_2^{dim}"),
        }
    }
}

/// A subset of the ambient group, stored as a sorted list without repeats.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSubset {
    group: Group,
    elements: Vec<u64>,
}

impl GroupSubset {
    /// Builds a subset, sorting and removing duplicates.
    pub fn new(group: Group, mut elements: Vec<u64>) -> Result<Self> {
        for &x in &elements {
            group.check(x)?;
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(GroupSubset { group, elements })
    }

    pub fn empty(group: Group) -> Self {
        GroupSubset { group, elements: Vec::new() }
    }

    pub fn full(group: Group) -> Self {
        GroupSubset { group, elements: (0..group.order() as u64).collect() }
    }

    pub fn from_indicator(group: Group, indicator: &[bool]) -> Result<Self> {
        if indicator.len() != group.order() {
            return Err(Error::InvalidParameter(format!(
                "indicator length {} != |G| = {}",
                indicator.len(),
                group.order()
            )));
        }
        let elements = indicator.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect();
        Ok(GroupSubset { group, elements })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// δ = |A| / |G|.
    pub fn density(&self) -> f64 {
        self.elements.len() as f64 / self.group.order() as f64
    }

    pub fn indicator(&self) -> Vec<bool> {
        let mut ind = vec![false; self.group.order()];
        for &x in &self.elements {
            ind[x as usize] = true;
        }
        ind
    }

    pub fn indicator_f64(&self) -> Vec<f64> {
        let mut ind = vec![0.0; self.group.order()];
        for &x in &self.elements {
            ind[x as usize] = 1.0;
        }
        ind
    }

    pub fn negated(&self) -> GroupSubset {
        let g = self.group;
        let mut elements: Vec<u64> = self.elements.iter().map(|&x| g.neg(x)).collect();
        elements.sort_unstable();
        GroupSubset { group: g, elements }
    }

    /// A + s.
    pub fn shifted(&self, s: u64) -> GroupSubset {
        let g = self.group;
        let mut elements: Vec<u64> = self.elements.iter().map(|&x| g.add(x, s)).collect();
        elements.sort_unstable();
        GroupSubset { group: g, elements }
    }

    pub fn is_symmetric(&self) -> bool {
        self.elements.iter().all(|&x| self.contains(self.group.neg(x)))
    }

    pub fn union(&self, other: &GroupSubset) -> Result<GroupSubset> {
        self.group.same_as(&other.group)?;
        let mut elements = self.elements.clone();
        elements.extend_from_slice(&other.elements);
        elements.sort_unstable();
        elements.dedup();
        Ok(GroupSubset { group: self.group, elements })
    }

    pub fn intersection_len(&self, other: &GroupSubset) -> usize {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.elements.iter().filter(|&&x| large.contains(x)).count()
    }

    pub fn is_subset_of(&self, other: &GroupSubset) -> bool {
        self.group == other.group && self.elements.iter().all(|&x| other.contains(x))
    }

    /// The subset with one element removed (no-op if absent).
    pub fn without(&self, x: u64) -> GroupSubset {
        GroupSubset { group: self.group, elements: self.elements.iter().copied().filter(|&y| y != x).collect() }
    }
}

/// A real-valued function on the group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityFunction {
    group: Group,
    values: Vec<f64>,
}

impl DensityFunction {
    pub fn new(group: Group, values: Vec<f64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidParameter(format!(
                "function table length {} != |G| = {}",
                values.len(),
                group.order()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite value {v} at {i}")));
        }
        Ok(DensityFunction { group, values })
    }

    pub fn constant(group: Group, c: f64) -> Result<Self> {
        Self::new(group, vec![c; group.order()])
    }

    pub fn from_subset(a: &GroupSubset) -> Self {
        DensityFunction { group: a.group(), values: a.indicator_f64() }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Σ f(x), compensated.
    pub fn sum(&self) -> f64 {
        kahan_sum(self.values.iter().copied())
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Checks `0 <= f <= 1` up to `slack`.
    pub fn check_unit_range(&self, slack: f64) -> Result<()> {
        let (lo, hi) = (self.min(), self.max());
        if lo < -slack || hi > 1.0 + slack {
            return Err(Error::Precondition(format!("function leaves [0,1]: min {lo}, max {hi}")));
        }
        Ok(())
    }

    pub fn scaled(&self, c: f64) -> DensityFunction {
        DensityFunction { group: self.group, values: self.values.iter().map(|v| v * c).collect() }
    }
}

pub(crate) fn kahan_sum(iter: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in iter {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_is_sorted_and_deduplicated() {
        let g = Group::cyclic(10).unwrap();
        let a = GroupSubset::new(g, vec![7, 3, 3, 0, 9]).unwrap();
        assert_eq!(a.elements(), &[0, 3, 7, 9]);
        assert!((a.density() - 0.4).abs() < 1e-15);
        assert!(GroupSubset::new(g, vec![10]).is_err());
    }

    #[test]
    fn group_arithmetic() {
        let g = Group::cyclic(10).unwrap();
        assert_eq!(g.add(7, 5), 2);
        assert_eq!(g.neg(3), 7);
        assert_eq!(g.scale(3, -4), 8);
        assert_eq!(g.combination(&[1, 2, 3], &[1, 1, -1]), 0);
        let c = Group::cube(3).unwrap();
        assert_eq!(c.add(0b101, 0b110), 0b011);
        assert_eq!(c.neg(0b101), 0b101);
        assert_eq!(c.scale(0b101, -3), 0b101);
        assert_eq!(c.scale(0b101, 2), 0);
    }

    #[test]
    fn invalid_groups() {
        assert!(Group::cyclic(1).is_err());
        assert!(Group::cube(0).is_err());
        assert!(Group::cube(31).is_err());
    }

    #[test]
    fn symmetry_and_shift() {
        let g = Group::cyclic(10).unwrap();
        let a = GroupSubset::new(g, vec![0, 1, 9]).unwrap();
        assert!(a.is_symmetric());
        assert_eq!(a.shifted(2).elements(), &[1, 2, 3]);
        assert!(!a.shifted(2).is_symmetric());
    }

    #[test]
    fn density_function_checks() {
        let g = Group::cyclic(4).unwrap();
        assert!(DensityFunction::new(g, vec![0.0; 3]).is_err());
        assert!(DensityFunction::new(g, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        let f = DensityFunction::new(g, vec![0.25, 0.5, 1.0, 0.0]).unwrap();
        assert!(f.check_unit_range(0.0).is_ok());
        assert_eq!(f.sum(), 1.75);
        assert!(f.scaled(2.0).check_unit_range(0.0).is_err());
    }
}
