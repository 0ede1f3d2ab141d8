//! Span(E) = {Σ ε_i e_i : ε ∈ {-1,0,1}^E} and greedy maximal dissociated subsets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{budget_check, Error, Result};
use crate::fourier::group::{Group, GroupSubset};

/// Work budget for span construction, in element visits.
pub const SPAN_BUDGET: f64 = 2e9;
/// Groups up to this order use a dense tag table.
const DENSE_LIMIT: usize = 1 << 25;

// tag 0: absent, 1: origin, 2 + 2j + σ: reached from generator j with sign (+ for σ = 0)
enum Tags {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl Tags {
    fn get(&self, x: u64) -> u32 {
        match self {
            Tags::Dense(v) => v[x as usize],
            Tags::Sparse(m) => m.get(&x).copied().unwrap_or(0),
        }
    }

    fn set(&mut self, x: u64, t: u32) {
        match self {
            Tags::Dense(v) => v[x as usize] = t,
            Tags::Sparse(m) => {
                m.insert(x, t);
            }
        }
    }
}

/// Incrementally grown span with back-pointers to ε-representations.
pub struct SpanTree {
    group: Group,
    generators: Vec<u64>,
    tags: Tags,
    members: Vec<u64>,
    work: f64,
}

impl SpanTree {
    pub fn new(group: Group) -> Self {
        let mut tags =
            if group.order() <= DENSE_LIMIT { Tags::Dense(vec![0; group.order()]) } else { Tags::Sparse(HashMap::new()) };
        tags.set(0, 1);
        SpanTree { group, generators: Vec::new(), tags, members: vec![0], work: 0.0 }
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.group.contains(x) && self.tags.get(x) != 0
    }

    /// Adds a generator: Span ← Span ∪ (Span + e) ∪ (Span − e).
    pub fn push(&mut self, e: u64) -> Result<()> {
        self.group.check(e)?;
        self.work += 2.0 * self.members.len() as f64;
        budget_check("span construction", self.work, SPAN_BUDGET)?;
        let j = self.generators.len() as u32;
        self.generators.push(e);
        let g = self.group;
        let old = self.members.len();
        for i in 0..old {
            let x = self.members[i];
            for (sigma, y) in [(0u32, g.add(x, e)), (1u32, g.sub(x, e))] {
                if self.tags.get(y) == 0 {
                    self.tags.set(y, 2 + 2 * j + sigma);
                    self.members.push(y);
                }
            }
        }
        Ok(())
    }

    /// ε with Σ ε_j e_j = x, if x lies in the span.
    pub fn representation(&self, x: u64) -> Option<Vec<i64>> {
        if !self.contains(x) {
            return None;
        }
        let mut eps = vec![0i64; self.generators.len()];
        let mut cur = x;
        loop {
            let t = self.tags.get(cur);
            if t == 1 {
                return Some(eps);
            }
            let j = ((t - 2) / 2) as usize;
            let plus = (t - 2) % 2 == 0;
            let e = self.generators[j];
            if plus {
                eps[j] += 1;
                cur = self.group.sub(cur, e);
            } else {
                eps[j] -= 1;
                cur = self.group.add(cur, e);
            }
        }
    }

    pub fn to_subset(&self) -> GroupSubset {
        GroupSubset::new(self.group, self.members.clone()).expect("span members lie in the group")
    }
}

pub fn span(e: &GroupSubset) -> Result<GroupSubset> {
    let order = e.group().order() as f64;
    let reach = 3f64.powi(e.len() as i32).min(order);
    budget_check("span", 2.0 * reach * e.len() as f64, SPAN_BUDGET)?;
    let mut tree = SpanTree::new(e.group());
    for &x in e.elements() {
        tree.push(x)?;
    }
    Ok(tree.to_subset())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageEntry {
    pub element: u64,
    /// ε over Λ with Σ ε_j λ_j = element.
    pub coefficients: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxDissociated {
    pub group: Group,
    pub lambda: Vec<u64>,
    pub coverage: Vec<CoverageEntry>,
}

impl MaxDissociated {
    /// Re-evaluates every coverage entry.
    pub fn verify_coverage(&self) -> Result<()> {
        for c in &self.coverage {
            if c.coefficients.len() != self.lambda.len() || c.coefficients.iter().any(|e| e.abs() > 1) {
                return Err(Error::Numeric(format!("malformed coverage entry for {}", c.element)));
            }
            if self.group.combination(&self.lambda, &c.coefficients) != c.element {
                return Err(Error::Numeric(format!("coverage entry for {} does not re-evaluate", c.element)));
            }
        }
        Ok(())
    }

    pub fn lambda_subset(&self) -> GroupSubset {
        GroupSubset::new(self.group, self.lambda.clone()).expect("Λ lies in the group")
    }
}

/// Largest element count accepted by the greedy scan.
pub const MAX_DISSOCIATED_INPUT: usize = 10_000;

/// Greedy scan in ascending order: keep r iff r ∉ Span(Λ so far).
///
/// A new element outside the current span cannot close a vanishing signed
/// sum, so Λ stays dissociated; every skipped element lies in Span(Λ), which
/// is both the coverage statement and maximality.
pub fn max_dissociated_subset(r: &GroupSubset) -> Result<MaxDissociated> {
    if r.len() > MAX_DISSOCIATED_INPUT {
        return Err(Error::Precondition(format!("|R| = {} exceeds {MAX_DISSOCIATED_INPUT}", r.len())));
    }
    let mut tree = SpanTree::new(r.group());
    for &x in r.elements() {
        if !tree.contains(x) {
            tree.push(x)?;
        }
    }
    let coverage = r
        .elements()
        .iter()
        .map(|&x| CoverageEntry { element: x, coefficients: tree.representation(x).expect("covered by construction") })
        .collect();
    Ok(MaxDissociated { group: r.group(), lambda: tree.generators().to_vec(), coverage })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: u64, e: &[u64]) -> GroupSubset {
        GroupSubset::new(Group::cyclic(n).unwrap(), e.to_vec()).unwrap()
    }

    #[test]
    fn small_spans() {
        assert_eq!(span(&cyc(10, &[])).unwrap().elements(), &[0]);
        assert_eq!(span(&cyc(10, &[1])).unwrap().elements(), &[0, 1, 9]);
        // {1, 3, 9} in a large group: all 27 signed sums distinct
        assert_eq!(span(&cyc(1000, &[1, 3, 9])).unwrap().len(), 27);
    }

    #[test]
    fn representations_re_evaluate() {
        let g = Group::cyclic(1009).unwrap();
        let mut tree = SpanTree::new(g);
        for e in [5, 17, 100, 333] {
            tree.push(e).unwrap();
        }
        for x in 0..1009 {
            if let Some(eps) = tree.representation(x) {
                assert_eq!(g.combination(tree.generators(), &eps), x);
            }
        }
    }

    #[test]
    fn origin_only() {
        let m = max_dissociated_subset(&cyc(10, &[0])).unwrap();
        assert!(m.lambda.is_empty());
        assert_eq!(m.coverage[0].coefficients, Vec::<i64>::new());
    }

    #[test]
    fn greedy_on_a_span() {
        let r = span(&cyc(100, &[1, 5])).unwrap();
        let m = max_dissociated_subset(&r).unwrap();
        m.verify_coverage().unwrap();
        let s = span(&m.lambda_subset()).unwrap();
        assert!(r.is_subset_of(&s));
    }
}
