use proptest::prelude::*;
use spectra_core::dissociation::{
    family_membership, is_dissociated, max_dissociated_subset, span, statement_tk_upper_bound, FamilyParams, Variant,
};
use spectra_core::energy::energy;
use spectra_core::{Group, GroupSubset};

fn small_set(max_len: usize) -> impl Strategy<Value = GroupSubset> {
    (17u64..=2000).prop_flat_map(move |n| {
        proptest::collection::vec(1..n, 1..=max_len).prop_map(move |v| GroupSubset::new(Group::cyclic(n).unwrap(), v).unwrap())
    })
}

/// Brute-force membership: no non-zero vector in the box [-b, b]^m passing
/// `keep` vanishes mod N.
fn oracle(a: &GroupSubset, b: i64, keep: impl Fn(&[i64]) -> bool) -> bool {
    let m = a.len();
    let g = a.group();
    let mut c = vec![-b; m];
    loop {
        if c.iter().any(|&x| x != 0) && keep(&c) && g.combination(a.elements(), &c) == 0 {
            return false;
        }
        let mut i = 0;
        while i < m && c[i] == b {
            c[i] = -b;
            i += 1;
        }
        if i == m {
            return true;
        }
        c[i] += 1;
    }
}

fn member(a: &GroupSubset, k: u64, s: Option<u64>, v: Variant) -> bool {
    let cert = family_membership(a, &FamilyParams::new(k, s), v, None).unwrap();
    cert.verify().unwrap();
    cert.verdict
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn containment_chain(a in small_set(5), k in 1u64..=4, s in 1u64..=3) {
        let ks = member(&a, k * s, Some(s), Variant::LambdaKs);
        let tilde = member(&a, k, Some(s), Variant::Tilde);
        let plain = member(&a, k, Some(s), Variant::LambdaKs);
        let inf = member(&a, k, None, Variant::LambdaKInf);
        prop_assert!(!ks || tilde);
        prop_assert!(!tilde || plain);
        prop_assert!(!inf || plain);
    }

    #[test]
    fn verdicts_match_brute_force(a in small_set(4), k in 1u64..=4, s in 1u64..=2) {
        let l1 = |c: &[i64]| c.iter().map(|x| x.unsigned_abs()).sum::<u64>() <= k;
        let supp = |c: &[i64]| c.iter().filter(|&&x| x != 0).count() as u64 <= k;
        prop_assert_eq!(member(&a, k, Some(s), Variant::LambdaKs), oracle(&a, s.min(k) as i64, l1));
        prop_assert_eq!(member(&a, k, Some(s), Variant::Tilde), oracle(&a, s as i64, supp));
        prop_assert_eq!(member(&a, k, None, Variant::KDissociated), oracle(&a, k as i64, |_| true));
        prop_assert_eq!(is_dissociated(&a).verdict, oracle(&a, 1, |_| true));
    }

    #[test]
    fn witnesses_reverify(a in small_set(6), k in 1u64..=5, s in 1u64..=3, vi in 0usize..5) {
        let v = [Variant::Plain, Variant::KDissociated, Variant::LambdaKs, Variant::LambdaKInf, Variant::Tilde][vi];
        let cert = family_membership(&a, &FamilyParams::new(k, Some(s)), v, None).unwrap();
        prop_assert!(cert.verify().is_ok());
        prop_assert_eq!(cert.witness.is_some(), !cert.verdict);
    }

    #[test]
    fn greedy_is_maximal(r in small_set(40)) {
        let m = max_dissociated_subset(&r).unwrap();
        m.verify_coverage().unwrap();
        let lambda = m.lambda_subset();
        prop_assert!(is_dissociated(&lambda).verdict);
        for &x in r.elements() {
            if !lambda.contains(x) {
                let mut bigger = m.lambda.clone();
                bigger.push(x);
                prop_assert!(!is_dissociated(&GroupSubset::new(r.group(), bigger).unwrap()).verdict);
            }
        }
    }

    #[test]
    fn two_dissociated_span_is_full(a in small_set(8)) {
        let two = family_membership(&a, &FamilyParams::new(2, None), Variant::KDissociated, None).unwrap().verdict;
        prop_assume!(two);
        prop_assert_eq!(span(&a).unwrap().len() as u64, 3u64.pow(a.len() as u32));
    }

    #[test]
    fn statement_bound(a in small_set(6), k in 1u64..=3, d in 1usize..=2) {
        let params = FamilyParams::new(2 * k, Some(3)).with_d(d);
        let cert = family_membership(&a, &params, Variant::RankD, None).unwrap();
        cert.verify().unwrap();
        prop_assume!(cert.verdict);
        let t = energy(&a, k as usize).unwrap().t_k as f64;
        prop_assert!(t <= statement_tk_upper_bound(k, a.len(), 3, d));
    }
}

#[test]
fn powers_of_three_span() {
    // 2-dissociated in a large modulus, so every signed sum is distinct
    let g = Group::cyclic(1_000_003).unwrap();
    let a = GroupSubset::new(g, vec![1, 5, 25, 125, 625, 3125, 15625, 78125]).unwrap();
    assert!(family_membership(&a, &FamilyParams::new(2, None), Variant::KDissociated, None).unwrap().verdict);
    assert_eq!(span(&a).unwrap().len(), 6561);
}
