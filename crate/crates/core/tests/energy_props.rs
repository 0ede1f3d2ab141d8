use proptest::prelude::*;
use spectra_core::energy::{
    check_tmain, energy, energy_bruteforce, energy_via_fourier, large_spectrum, tmain_lower_bound, DEFAULT_ETA,
};
use spectra_core::{Group, GroupSubset};

fn group() -> impl Strategy<Value = Group> {
    prop_oneof![(2u64..=400).prop_map(|n| Group::cyclic(n).unwrap()), (1u32..=8).prop_map(|d| Group::cube(d).unwrap())]
}

fn subset_of(g: Group, max: usize) -> impl Strategy<Value = GroupSubset> {
    let n = g.order() as u64;
    proptest::collection::vec(0..n, 0..=max).prop_map(move |v| GroupSubset::new(g, v).unwrap())
}

fn nonempty_set() -> impl Strategy<Value = GroupSubset> {
    group().prop_flat_map(|g| subset_of(g, g.order())).prop_filter("non-empty", |a| !a.is_empty())
}

fn small_base() -> impl Strategy<Value = GroupSubset> {
    group().prop_flat_map(|g| subset_of(g, 12))
}

/// Ordered quadruples with a + b = c + d, counted directly.
fn t2_oracle(b: &GroupSubset) -> u128 {
    let g = b.group();
    let e = b.elements();
    let mut t = 0;
    for &a in e {
        for &bb in e {
            for &c in e {
                for &d in e {
                    if g.add(a, bb) == g.add(c, d) {
                        t += 1;
                    }
                }
            }
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn large_spectrum_shape(a in nonempty_set(), frac in 0.05f64..1.0) {
        let delta = a.density();
        let alpha = (frac * delta).max(1e-6);
        let ls = large_spectrum(&a, alpha, DEFAULT_ETA).unwrap();
        prop_assert!(ls.contains(0));
        prop_assert!(ls.is_symmetric());
        prop_assert!(ls.len() as f64 <= (delta / (alpha * alpha)).floor(), "{} > delta/alpha^2", ls.len());
    }

    #[test]
    fn energy_methods_agree(b in small_base(), k in 2usize..=3) {
        let brute = energy_bruteforce(&b, k).unwrap();
        let four = energy_via_fourier(&b, k).unwrap();
        prop_assert_eq!(brute.t_k, four.t_k);
        if k == 2 && b.len() <= 8 {
            prop_assert_eq!(brute.t_k, t2_oracle(&b));
        }
    }

    #[test]
    fn energy_monotone(b in small_base(), extra in proptest::collection::vec(any::<u64>(), 1..4), k in 1usize..=3) {
        let g = b.group();
        let n = g.order() as u64;
        let mut bigger = b.elements().to_vec();
        bigger.extend(extra.iter().map(|x| x % n));
        let bigger = GroupSubset::new(g, bigger).unwrap();
        prop_assert!(energy(&b, k).unwrap().t_k <= energy(&bigger, k).unwrap().t_k);
    }

    #[test]
    fn tmain_on_random_sets(a in nonempty_set(), frac in 0.02f64..0.9, k in 2usize..=3) {
        let alpha = frac * a.density();
        let ls = large_spectrum(&a, alpha, DEFAULT_ETA).unwrap();
        let b = ls.nonzero();
        prop_assume!(b.len() <= 64);
        let v = check_tmain(&a, alpha, &b, k, DEFAULT_ETA).unwrap();
        prop_assert!(v.verdict, "{v:?}");
    }

    /// δ = p/q, α = r/s evaluated as one exact integer fraction.
    #[test]
    fn tmain_bound_matches_rational(q in 1u128..=12, pf in 0.0f64..1.0, s in 1u128..=12, rf in 0.0f64..1.0, k in 2u32..=3, m in 1u128..=40) {
        let p = 1 + (pf * q as f64) as u128 % q;
        let r = 1 + (rf * s as f64) as u128 % s;
        prop_assume!(r * q <= p * s);
        let num = q.pow(2 * k - 1) * r.pow(2 * k) * m.pow(2 * k);
        let den = p.pow(2 * k - 1) * s.pow(2 * k) * 16u128.pow(k);
        let want = num as f64 / den as f64;
        let got = tmain_lower_bound(p as f64 / q as f64, r as f64 / s as f64, k as usize, m as usize).unwrap();
        prop_assert!((got - want).abs() <= 1e-12 * want, "{got} vs {p}/{q} {r}/{s}: {want}");
    }
}

#[test]
fn tmain_bound_worked_values() {
    // delta = alpha, k = 2, m = 4: 4^4 / 2^8 leaves delta
    for d in [0.5, 0.1, 1.0 / 3.0] {
        assert!((tmain_lower_bound(d, d, 2, 4).unwrap() - d).abs() <= 1e-15);
    }
    // (1/4)(1/8)^4 2^4 / (2^8 (1/4)^4)
    assert_eq!(tmain_lower_bound(0.25, 0.125, 2, 2).unwrap(), 1.0 / 1024.0);
}

#[test]
fn trivial_energies() {
    let g = Group::cyclic(101).unwrap();
    let one = GroupSubset::new(g, vec![7]).unwrap();
    assert_eq!(energy(&one, 3).unwrap().t_k, 1);
    // T_1(B) = |B|
    let b = GroupSubset::new(g, vec![1, 5, 9, 40]).unwrap();
    assert_eq!(energy(&b, 1).unwrap().t_k, 4);
    assert_eq!(energy(&GroupSubset::empty(g), 2).unwrap().t_k, 0);
}
