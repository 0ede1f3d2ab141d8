//! Dissociated sets and the refined families Λ(k,s), Λ̃(k,s), Λ(k,s,p), Λ_d(k,s).

pub mod family;
pub mod random;
pub mod rank;
pub(crate) mod search;
pub mod span;

pub use family::{
    check_partition, family_membership, family_membership_with, is_dissociated, statement_tk_upper_bound,
    DissociationCertificate, FamilyParams, Variant,
};
pub use random::{random_family_set, random_family_threshold};
pub use rank::{integer_rank, rank_d_representation, IncrementalRank, RankDRepresentation};
pub use search::SearchOptions;
pub use span::{max_dissociated_subset, span, CoverageEntry, MaxDissociated, SpanTree};

/// `2(δ/α)² log₂(1/δ)`, the cardinality bound for dissociated subsets of R_α.
pub fn chang_bound(delta: f64, alpha: f64) -> f64 {
    2.0 * (delta / alpha).powi(2) * (1.0 / delta).log2()
}
