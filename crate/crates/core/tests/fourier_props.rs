//! Transform invariants against a hand-written direct-sum oracle.

use num_complex::Complex64;
use proptest::prelude::*;
use spectra_core::fourier::wht::wht_in_place;
use spectra_core::fourier::{parseval_check_subset, spectrum};
use spectra_core::{Group, GroupSubset};

/// Σ_{x∈A} e^{+2πi xr/N}, phases reduced exactly in integers.
fn oracle(a: &GroupSubset, n: u64, r: u64) -> Complex64 {
    a.elements()
        .iter()
        .map(|&x| {
            let t = std::f64::consts::TAU * ((x as u128 * r as u128) % n as u128) as f64 / n as f64;
            Complex64::new(t.cos(), t.sin())
        })
        .sum()
}

fn cube_oracle(a: &GroupSubset, r: u64) -> i64 {
    a.elements().iter().map(|&x| if (x & r).count_ones() % 2 == 0 { 1 } else { -1 }).sum()
}

fn cyclic_set() -> impl Strategy<Value = GroupSubset> {
    (2u64..=700).prop_flat_map(|n| {
        proptest::collection::vec(0..n, 0..=n as usize).prop_map(move |v| GroupSubset::new(Group::cyclic(n).unwrap(), v).unwrap())
    })
}

fn cube_set() -> impl Strategy<Value = GroupSubset> {
    (1u32..=10).prop_flat_map(|d| {
        let size = 1u64 << d;
        proptest::collection::vec(0..size, 0..=size as usize)
            .prop_map(move |v| GroupSubset::new(Group::cube(d).unwrap(), v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cyclic_matches_oracle(a in cyclic_set()) {
        let n = a.group().order() as u64;
        let spec = spectrum(&a);
        for r in 0..n {
            let d = spec.value(r) - oracle(&a, n, r);
            prop_assert!(d.norm() <= 1e-9 * (1.0 + a.len() as f64 / 64.0), "N={n} r={r} |d|={}", d.norm());
        }
    }

    #[test]
    fn conjugate_symmetry_and_zero(a in cyclic_set()) {
        let spec = spectrum(&a);
        let g = a.group();
        prop_assert_eq!(spec.value(0), Complex64::new(a.len() as f64, 0.0));
        for r in 0..g.order() as u64 {
            let (p, m) = (spec.abs(r), spec.abs(g.neg(r)));
            prop_assert!((p - m).abs() <= 1e-9 * p.max(1.0));
        }
    }

    #[test]
    fn cube_matches_oracle(a in cube_set()) {
        let spec = spectrum(&a);
        let ints = spec.integer_values().expect("indicator transform is integral");
        prop_assert_eq!(ints[0], a.len() as i64);
        for r in 0..a.group().order() as u64 {
            prop_assert_eq!(ints[r as usize], cube_oracle(&a, r));
        }
    }

    #[test]
    fn wht_twice_scales(values in (0u32..=11).prop_flat_map(|d| proptest::collection::vec(-1000i64..1000, 1usize << d))) {
        let mut data = values.clone();
        wht_in_place(&mut data);
        wht_in_place(&mut data);
        let n = values.len() as i64;
        prop_assert!(data.iter().zip(&values).all(|(&y, &x)| y == n * x));
    }

    #[test]
    fn parseval_both_kinds(a in prop_oneof![cyclic_set(), cube_set()]) {
        prop_assert!(parseval_check_subset(&a, &spectrum(&a)) <= 1e-9);
    }
}

#[test]
fn fast_paths_match_oracle() {
    // 1024 radix-2, 1031 prime (Bluestein), 1000 composite (Bluestein)
    for n in [1024u64, 1031, 1000, 513] {
        let g = Group::cyclic(n).unwrap();
        let a = GroupSubset::new(g, (0..n).filter(|x| (x * x + 3 * x) % 7 < 3).collect()).unwrap();
        let spec = spectrum(&a);
        for r in 0..n {
            assert!((spec.value(r) - oracle(&a, n, r)).norm() < 1e-8, "N={n} r={r}");
        }
    }
}
