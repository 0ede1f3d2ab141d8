//! Membership in the dissociation families and the certificates that back it.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dissociation::rank::{integer_rank, IncrementalRank};
use crate::dissociation::search::{find_relation, for_each_relation, Block, Constraint, Outcome, SearchOptions, Weight};
use crate::error::{Error, Result};
use crate::fourier::group::{Group, GroupSubset};

/// Family parameters; `s = None` stands for s = ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub k: u64,
    pub s: Option<u64>,
    pub p: Option<usize>,
    pub d: Option<usize>,
}

impl FamilyParams {
    pub fn new(k: u64, s: Option<u64>) -> Self {
        FamilyParams { k, s, p: None, d: None }
    }

    pub fn with_p(mut self, p: usize) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.s == Some(0) {
            return Err(Error::InvalidParameter("s must be at least 1".into()));
        }
        if self.p == Some(0) || self.d == Some(0) {
            return Err(Error::InvalidParameter("p and d must be at least 1".into()));
        }
        Ok(())
    }

    /// Per-coefficient bound once the L1 cap is taken into account.
    fn box_bound(&self) -> i64 {
        self.s.map_or(self.k, |s| s.min(self.k)) as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// ε ∈ {-1,0,1}.
    Plain,
    /// |ε_i| ≤ k.
    KDissociated,
    /// Λ(k,s): |s_i| ≤ s, Σ|s_i| ≤ k.
    LambdaKs,
    /// Λ(k,∞): Σ|s_i| ≤ k.
    LambdaKInf,
    /// Λ̃(k,s): |s_i| ≤ s, at most k non-zero s_i.
    Tilde,
    /// Λ(k,s,p): per-block |s| ≤ s and L1 ≤ k over a balanced partition.
    Partitioned,
    /// Λ_d(k,s): every admissible solution system has rank ≤ d − 1.
    RankD,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Plain,
        Variant::KDissociated,
        Variant::LambdaKs,
        Variant::LambdaKInf,
        Variant::Tilde,
        Variant::Partitioned,
        Variant::RankD,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::KDissociated => "k_dissociated",
            Variant::LambdaKs => "lambda_ks",
            Variant::LambdaKInf => "lambda_k_inf",
            Variant::Tilde => "tilde",
            Variant::Partitioned => "partitioned",
            Variant::RankD => "rank_d",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_").to_ascii_lowercase();
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == norm)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variant {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissociationCertificate {
    pub group: Group,
    pub set: Vec<u64>,
    pub params: FamilyParams,
    pub variant: Variant,
    pub verdict: bool,
    /// Falsifying coefficient rows over `set` (one row, or d rows for rank_d).
    pub witness: Option<Vec<Vec<i64>>>,
    /// Blocks as index lists into `set` (partitioned variant).
    pub partition: Option<Vec<Vec<usize>>>,
    /// True when the verdict covers the whole constraint set (and, for a
    /// searched partition, every balanced partition).
    pub exhaustive: bool,
}

fn constraint_for(variant: Variant, params: &FamilyParams, len: usize, partition: Option<&[Vec<usize>]>) -> Result<Constraint> {
    let k = params.k;
    Ok(match variant {
        Variant::Plain => Constraint::single(len, 1, Weight::Free, 0),
        Variant::KDissociated => Constraint::single(len, k as i64, Weight::Free, 0),
        Variant::LambdaKs | Variant::RankD => {
            let s = params.s.ok_or_else(|| Error::InvalidParameter(format!("{variant} needs s")))?;
            Constraint::single(len, s.min(k) as i64, Weight::L1, k)
        }
        Variant::LambdaKInf => Constraint::single(len, k as i64, Weight::L1, k),
        Variant::Tilde => {
            let s = params.s.ok_or_else(|| Error::InvalidParameter("tilde needs a finite s".into()))?;
            Constraint::single(len, s as i64, Weight::Support, k)
        }
        Variant::Partitioned => {
            let blocks = partition.ok_or_else(|| Error::InvalidParameter("partitioned needs a partition".into()))?;
            Constraint {
                len,
                blocks: blocks
                    .iter()
                    .map(|b| Block { coords: b.clone(), bound: params.box_bound(), weight: Weight::L1, cap: k })
                    .collect(),
            }
        }
    })
}

/// Checks that `blocks` partitions 0..len into p parts whose sizes differ at most twofold.
pub fn check_partition(blocks: &[Vec<usize>], len: usize, p: usize) -> Result<()> {
    if blocks.len() != p {
        return Err(Error::Precondition(format!("partition has {} blocks, expected {p}", blocks.len())));
    }
    let mut seen = vec![false; len];
    for &i in blocks.iter().flatten() {
        if i >= len || seen[i] {
            return Err(Error::Precondition(format!("index {i} missing from the set or repeated")));
        }
        seen[i] = true;
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Precondition("partition does not cover the set".into()));
    }
    let lo = blocks.iter().map(Vec::len).min().unwrap_or(0);
    let hi = blocks.iter().map(Vec::len).max().unwrap_or(0);
    if lo == 0 || hi > 2 * lo {
        return Err(Error::Precondition(format!("block sizes {lo}..{hi} differ more than twofold")));
    }
    Ok(())
}

impl DissociationCertificate {
    /// Re-checks the witness against the family's constraint set, and the
    /// partition's balance.
    pub fn verify(&self) -> Result<()> {
        let len = self.set.len();
        if let Some(blocks) = &self.partition {
            check_partition(blocks, len, self.params.p.unwrap_or(blocks.len()))?;
        }
        let Some(rows) = &self.witness else {
            return if self.verdict { Ok(()) } else { Err(Error::Numeric("negative verdict without witness".into())) };
        };
        if self.verdict {
            return Err(Error::Numeric("positive verdict carries a witness".into()));
        }
        let cons = constraint_for(self.variant, &self.params, len, self.partition.as_deref())?;
        for row in rows {
            if !cons.admits(row) {
                return Err(Error::Numeric(format!("witness {row:?} leaves the constraint set")));
            }
            if row.iter().all(|&c| c == 0) {
                return Err(Error::Numeric("witness is the zero vector".into()));
            }
            if self.group.combination(&self.set, row) != 0 {
                return Err(Error::Numeric(format!("witness {row:?} does not vanish")));
            }
        }
        let need = if self.variant == Variant::RankD { self.params.d.unwrap_or(1) } else { 1 };
        if rows.len() < need || integer_rank(rows) < need {
            return Err(Error::Numeric(format!("witness has rank below {need}")));
        }
        Ok(())
    }
}

/// Dissociativity of a set: no non-trivial {-1,0,1} combination vanishes.
pub fn is_dissociated(d: &GroupSubset) -> DissociationCertificate {
    family_membership(d, &FamilyParams::new(1, Some(1)), Variant::Plain, None).expect("plain variant is always well-posed")
}

/// Budget for enumerating all solutions in the rank_d variant.
pub const RANK_D_BUDGET: f64 = 1e7;

pub fn family_membership(
    set: &GroupSubset,
    params: &FamilyParams,
    variant: Variant,
    partition: Option<&[Vec<u64>]>,
) -> Result<DissociationCertificate> {
    family_membership_with(set, params, variant, partition, &SearchOptions::default())
}

pub fn family_membership_with(
    set: &GroupSubset,
    params: &FamilyParams,
    variant: Variant,
    partition: Option<&[Vec<u64>]>,
    opts: &SearchOptions,
) -> Result<DissociationCertificate> {
    params.validate()?;
    let g = set.group();
    let elems = set.elements();
    let len = elems.len();
    let mut cert = DissociationCertificate {
        group: g,
        set: elems.to_vec(),
        params: *params,
        variant,
        verdict: true,
        witness: None,
        partition: None,
        exhaustive: true,
    };
    match variant {
        Variant::RankD => {
            let d = params.d.ok_or_else(|| Error::InvalidParameter("rank_d needs d".into()))?;
            let cons = constraint_for(variant, params, len, None)?;
            let mut rank = IncrementalRank::new();
            let mut rows = Vec::new();
            for_each_relation(g, elems, &cons, RANK_D_BUDGET, &mut |v| {
                if rank.try_add(v) {
                    rows.push(v.to_vec());
                }
                rows.len() < d
            })
            .ok_or_else(|| Error::BudgetExceeded {
                what: "rank_d solution enumeration".into(),
                cost: cons.count(),
                budget: RANK_D_BUDGET,
            })?;
            if rows.len() >= d {
                cert.verdict = false;
                cert.witness = Some(rows);
            }
        }
        Variant::Partitioned => {
            let p = params.p.ok_or_else(|| Error::InvalidParameter("partitioned needs p".into()))?;
            match partition {
                Some(blocks) => {
                    let idx = partition_indices(set, blocks)?;
                    check_partition(&idx, len, p)?;
                    run_search(&mut cert, &constraint_for(variant, params, len, Some(&idx))?, opts);
                    cert.partition = Some(idx);
                }
                None => search_partitions(&mut cert, p, opts)?,
            }
        }
        _ => run_search(&mut cert, &constraint_for(variant, params, len, None)?, opts),
    }
    Ok(cert)
}

fn run_search(cert: &mut DissociationCertificate, cons: &Constraint, opts: &SearchOptions) {
    match find_relation(cert.group, &cert.set, cons, opts) {
        Outcome::Found(v) => {
            cert.verdict = false;
            cert.witness = Some(vec![v]);
            cert.exhaustive = true;
        }
        Outcome::NoneExhaustive => {
            cert.verdict = true;
            cert.witness = None;
            cert.exhaustive = true;
        }
        Outcome::NoneSampled => {
            cert.verdict = true;
            cert.witness = None;
            cert.exhaustive = false;
        }
    }
}

fn partition_indices(set: &GroupSubset, blocks: &[Vec<u64>]) -> Result<Vec<Vec<usize>>> {
    blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|&x| {
                    set.elements()
                        .binary_search(&x)
                        .map_err(|_| Error::Precondition(format!("partition element {x} is not in the set")))
                })
                .collect()
        })
        .collect()
}

/// Balanced block sizes: as equal as possible.
fn balanced_sizes(len: usize, p: usize) -> Vec<usize> {
    (0..p).map(|i| len / p + usize::from(i < len % p)).collect()
}

/// Canonical labelled assignments (first occurrence order) with every block non-empty.
fn all_partitions(len: usize, p: usize, f: &mut dyn FnMut(Vec<Vec<usize>>) -> bool) {
    fn rec(i: usize, len: usize, p: usize, used: usize, blocks: &mut Vec<Vec<usize>>, f: &mut dyn FnMut(Vec<Vec<usize>>) -> bool) -> bool {
        if len - i < p - used {
            return true;
        }
        if i == len {
            let lo = blocks.iter().map(Vec::len).min().unwrap_or(0);
            let hi = blocks.iter().map(Vec::len).max().unwrap_or(0);
            return !(lo > 0 && hi <= 2 * lo) || f(blocks.clone());
        }
        for b in 0..(used + 1).min(p) {
            blocks[b].push(i);
            let go = rec(i + 1, len, p, used.max(b + 1), blocks, f);
            blocks[b].pop();
            if !go {
                return false;
            }
        }
        true
    }
    let mut blocks = vec![Vec::new(); p];
    rec(0, len, p, 0, &mut blocks, f);
}

/// Number of set partitions of `len` labelled points into `p` blocks, as f64.
fn stirling2(len: usize, p: usize) -> f64 {
    let mut row = vec![0.0f64; p + 1];
    row[0] = 1.0;
    for _ in 0..len {
        for j in (1..=p).rev() {
            row[j] = j as f64 * row[j] + row[j - 1];
        }
        row[0] = 0.0;
    }
    row[p]
}

/// Partition count up to which every balanced partition is tried.
const PARTITION_ENUMERATION_LIMIT: f64 = 2000.0;
/// Random balanced partitions tried beyond that limit.
const PARTITION_SAMPLES: usize = 64;

fn search_partitions(cert: &mut DissociationCertificate, p: usize, opts: &SearchOptions) -> Result<()> {
    let len = cert.set.len();
    if len < p {
        return Err(Error::Precondition(format!("cannot split {len} elements into {p} non-empty blocks")));
    }
    let params = cert.params;
    let mut last: Option<(Vec<Vec<usize>>, Vec<Vec<i64>>)> = None;
    let mut all_exhaustive = true;
    let mut try_one = |blocks: Vec<Vec<usize>>, cert: &mut DissociationCertificate| -> Result<bool> {
        let cons = constraint_for(Variant::Partitioned, &params, len, Some(&blocks))?;
        run_search(cert, &cons, opts);
        all_exhaustive &= cert.exhaustive;
        if cert.verdict {
            cert.partition = Some(blocks);
            return Ok(true);
        }
        last = Some((blocks, cert.witness.clone().unwrap_or_default()));
        Ok(false)
    };
    let enumerate_all = stirling2(len, p) <= PARTITION_ENUMERATION_LIMIT;
    let mut found = false;
    if enumerate_all {
        let mut err = None;
        all_partitions(len, p, &mut |blocks| match try_one(blocks, cert) {
            Ok(hit) => {
                found = hit;
                !hit
            }
            Err(e) => {
                err = Some(e);
                false
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x7061_7274);
        let sizes = balanced_sizes(len, p);
        for attempt in 0..PARTITION_SAMPLES {
            let mut order: Vec<usize> = (0..len).collect();
            if attempt > 0 {
                order.shuffle(&mut rng);
            } else {
                // round-robin on sorted order first
                order.sort_by_key(|&i| (i % p, i));
            }
            let mut blocks = Vec::with_capacity(p);
            let mut it = order.into_iter();
            for &sz in &sizes {
                let mut b: Vec<usize> = it.by_ref().take(sz).collect();
                b.sort_unstable();
                blocks.push(b);
            }
            if try_one(blocks, cert)? {
                found = true;
                break;
            }
        }
    }
    if found {
        // a witnessing partition settles membership, given its search was exhaustive
        return Ok(());
    }
    if let Some((blocks, rows)) = last {
        cert.verdict = false;
        cert.partition = Some(blocks);
        cert.witness = Some(rows);
    }
    cert.exhaustive = enumerate_all && all_exhaustive;
    Ok(())
}

/// `2^{9k} k^k |Λ|^k (s+1)^{2d} · 2^{2sk(log k)² / log(k^{2s}|Λ|^{s-2})}` with base-2 logs.
/// Returns +∞ when the exponent's denominator is not positive.
pub fn statement_tk_upper_bound(k: u64, lambda_size: usize, s: u64, d: usize) -> f64 {
    let kf = k as f64;
    let lf = lambda_size as f64;
    let sf = s as f64;
    let denom = 2.0 * sf * kf.log2() + (sf - 2.0) * lf.log2();
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    let expo = 2.0 * sf * kf * kf.log2().powi(2) / denom;
    2f64.powf(9.0 * kf) * kf.powf(kf) * lf.powf(kf) * (sf + 1.0).powf(2.0 * d as f64) * 2f64.powf(expo)
}
