//! Exact rank of integer matrices and rank-d representations of a frequency.

use serde::{Deserialize, Serialize};

use crate::error::{budget_check, Error, Result};
use crate::fourier::group::{Group, GroupSubset};

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

/// Row-echelon basis over Q kept with primitive integer rows (fraction-free elimination).
#[derive(Debug, Clone, Default)]
pub struct IncrementalRank {
    basis: Vec<(usize, Vec<i128>)>,
}

impl IncrementalRank {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds the row if it is independent of the rows seen so far.
    pub fn try_add(&mut self, row: &[i64]) -> bool {
        let mut v: Vec<i128> = row.iter().map(|&x| x as i128).collect();
        for (pivot, b) in &self.basis {
            let c = v[*pivot];
            if c == 0 {
                continue;
            }
            let p = b[*pivot];
            for (x, &y) in v.iter_mut().zip(b) {
                *x = *x * p - y * c;
            }
            normalize(&mut v);
        }
        match v.iter().position(|&x| x != 0) {
            Some(pivot) => {
                self.basis.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut r = IncrementalRank::new();
    for row in rows {
        r.try_add(row);
    }
    r.rank()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDRepresentation {
    pub group: Group,
    pub target: u64,
    pub base: Vec<u64>,
    /// d rows, each a coefficient vector over `base`.
    pub matrix: Vec<Vec<i64>>,
    pub row_l1_bound: u64,
    pub coeff_bound: u64,
}

impl RankDRepresentation {
    pub fn verify(&self) -> Result<()> {
        for row in &self.matrix {
            if row.len() != self.base.len() {
                return Err(Error::Numeric("row length differs from |base|".into()));
            }
            let l1: u64 = row.iter().map(|x| x.unsigned_abs()).sum();
            if l1 > self.row_l1_bound || row.iter().any(|x| x.unsigned_abs() > self.coeff_bound) {
                return Err(Error::Numeric(format!("row {row:?} violates the coefficient bounds")));
            }
            if self.group.combination(&self.base, row) != self.target {
                return Err(Error::Numeric(format!("row {row:?} does not reproduce {}", self.target)));
            }
        }
        if integer_rank(&self.matrix) != self.matrix.len() {
            return Err(Error::Numeric("rows are linearly dependent".into()));
        }
        Ok(())
    }
}

/// Budget on the number of candidate rows examined.
pub const RANK_SEARCH_BUDGET: f64 = 1e7;

fn count_exact_l1(m: usize, b: u64, w: u64) -> f64 {
    // vectors of length m, entries in [-b, b], L1 exactly w
    let w = w as usize;
    let mut ways = vec![0.0f64; w + 1];
    ways[0] = 1.0;
    for _ in 0..m {
        let mut next = vec![0.0f64; w + 1];
        for (x, &c) in ways.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            next[x] += c;
            for a in 1..=b as usize {
                if x + a > w {
                    break;
                }
                next[x + a] += 2.0 * c;
            }
        }
        ways = next;
    }
    ways[w]
}

/// Visits vectors of L1 norm exactly `w` in lexicographic order.
fn for_each_exact_l1(m: usize, b: i64, w: i64, f: &mut dyn FnMut(&[i64]) -> bool) {
    fn rec(v: &mut Vec<i64>, m: usize, b: i64, rem: i64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let left = m - v.len();
        if left == 0 {
            return rem != 0 || f(v);
        }
        if rem > left as i64 * b {
            return true;
        }
        for c in -b..=b {
            if c.abs() > rem {
                continue;
            }
            v.push(c);
            let go = rec(v, m, b, rem - c.abs(), f);
            v.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(&mut Vec::with_capacity(m), m, b, w, f);
}

/// Searches d rows `m_i` with `Σ_j m_ij λ*_j ≡ r`, `Σ_j |m_ij| ≤ l1_bound`,
/// `|m_ij| ≤ coeff_bound` and rank d. Candidates are scanned by increasing L1
/// norm and then lexicographically; independent rows are kept greedily, which
/// reaches rank d whenever any admissible family does. `Ok(None)` is a
/// definitive not-found over the searched space.
pub fn rank_d_representation(
    target: u64,
    base: &GroupSubset,
    d: usize,
    l1_bound: u64,
    coeff_bound: u64,
) -> Result<Option<RankDRepresentation>> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    let g = base.group();
    g.check(target)?;
    let elems = base.elements();
    let m = elems.len();
    let b = coeff_bound.min(l1_bound);
    let total: f64 = (1..=l1_bound).map(|w| count_exact_l1(m, b, w)).sum();
    budget_check("rank-d representation search", total, RANK_SEARCH_BUDGET)?;
    let mut rank = IncrementalRank::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for w in 1..=l1_bound as i64 {
        for_each_exact_l1(m, b as i64, w, &mut |v| {
            if g.combination(elems, v) == target && rank.try_add(v) {
                rows.push(v.to_vec());
            }
            rows.len() < d
        });
        if rows.len() == d {
            break;
        }
    }
    if rows.len() < d {
        return Ok(None);
    }
    Ok(Some(RankDRepresentation {
        group: g,
        target,
        base: elems.to_vec(),
        matrix: rows,
        row_l1_bound: l1_bound,
        coeff_bound,
    }))
}
