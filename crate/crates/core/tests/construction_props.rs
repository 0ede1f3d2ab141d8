use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_core::constructions::{
    bohr_bounds, bohr_set, construct_cube_union, construct_prescribed_small, green_plus_function, leading_coefficient,
    quantize_to_set, riesz_product, riesz_windows, ConstructionReport, CubeConstructionConfig, QuantizerConfig,
    RieszConfig,
};
use spectra_core::dissociation::{family_membership, FamilyParams, Variant};
use spectra_core::fourier::spectrum_of_function;
use spectra_core::{DensityFunction, Group, GroupSubset};

const PRIMES: [u64; 6] = [1009, 2003, 4001, 8009, 10007, 65537];

fn direct(a: &GroupSubset, r: u64) -> Complex64 {
    match a.group() {
        Group::Cyclic { modulus } => a
            .elements()
            .iter()
            .map(|&x| {
                let t = std::f64::consts::TAU * ((x as u128 * r as u128) % modulus as u128) as f64 / modulus as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .sum(),
        Group::Cube { .. } => {
            Complex64::new(a.elements().iter().map(|&x| if (x & r).count_ones() % 2 == 0 { 1.0 } else { -1.0 }).sum(), 0.0)
        }
    }
}

/// Independent spot check of a passing report on 64 random frequencies.
fn reverify(rep: &ConstructionReport, seed: u64) {
    let g = rep.group;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cut = rep.alpha * g.order() as f64;
    for _ in 0..64 {
        let r = rng.gen_range(0..g.order() as u64);
        let m = direct(&rep.set, r).norm();
        if (m - cut).abs() > 1e-6 * g.order() as f64 {
            assert_eq!(m >= cut, rep.large_spectrum.binary_search(&r).is_ok(), "frequency {r}");
        }
    }
}

fn two_dissociated(n: u64, size: usize, rng: &mut ChaCha8Rng) -> GroupSubset {
    let g = Group::cyclic(n).unwrap();
    loop {
        let v: Vec<u64> = (0..size).map(|_| rng.gen_range(1..n)).collect();
        let a = GroupSubset::new(g, v).unwrap();
        if a.len() == size && family_membership(&a, &FamilyParams::new(2, None), Variant::KDissociated, None).unwrap().verdict {
            return a;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quantizer_exact_cardinality(vals in (2usize..400).prop_flat_map(|n| proptest::collection::vec(0.0f64..=1.0, n)), seed in any::<u64>()) {
        let n = vals.len() as u64;
        let sum: f64 = vals.iter().sum();
        let f = DensityFunction::new(Group::cyclic(n).unwrap(), vals).unwrap();
        let q = quantize_to_set(&f, &QuantizerConfig { tau: 20.0, max_retries: 3, seed }).unwrap();
        prop_assert_eq!(q.set.len(), (sum + 1e-7).floor() as usize);
    }

    #[test]
    fn riesz_windows_hold(pi in 0usize..PRIMES.len(), size in 1usize..=4, delta in 0.05f64..0.5, ratio in 1.0f64/1024.0..1.0/16.0, seed in any::<u64>()) {
        let n = PRIMES[pi];
        let alpha = delta * ratio;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = two_dissociated(n, size, &mut rng);
        let cfg = RieszConfig::new(delta, alpha).unwrap();
        prop_assume!(size as f64 <= cfg.max_cardinality());
        let f = riesz_product(&lambda, &cfg).unwrap();
        let fhat = spectrum_of_function(&f);
        let w = riesz_windows(&f, &fhat, &lambda, &cfg);
        prop_assert!(f.min() >= -1e-12);
        prop_assert!(w.sum_relative_error <= 1e-9);
        prop_assert!(w.lower_window && w.upper_window, "{w:?}");
        // the lower window again, through the direct sum
        for &l in lambda.elements() {
            let d: Complex64 = f.values().iter().enumerate().map(|(x, &v)| {
                let t = std::f64::consts::TAU * ((x as u128 * l as u128) % n as u128) as f64 / n as f64;
                Complex64::new(t.cos(), t.sin()) * v
            }).sum();
            prop_assert!(d.norm() >= (1.0 + 1.0 / 32.0) * alpha * n as f64);
        }
    }

    #[test]
    fn green_single_block(k in 1usize..=8, pi in 0usize..PRIMES.len()) {
        let n = PRIMES[pi];
        let block: Vec<u64> = (0..k as u64).map(|i| 2 * i + 1).collect();
        let g = green_plus_function(Group::cyclic(n).unwrap(), &[block.clone()]).unwrap();
        prop_assert!((g.sum() - n as f64 / 2.0).abs() <= 1e-9 * n as f64 / 2.0);
        prop_assert!(g.min() >= -1e-12 && g.max() <= 1.0 + 1e-12);
        let ghat = spectrum_of_function(&g);
        let q = leading_coefficient(&ghat, block[0], 1) * (k as f64).sqrt();
        prop_assert!((0.25..=0.5).contains(&q), "k={k}: {q}");
    }

    #[test]
    fn bohr_set_by_definition(pi in 0usize..5, lam in 1u64..1_000_000, j in 1u64..400) {
        let n = PRIMES[pi];
        let lambda = lam % (n - 1) + 1;
        let radius = j % (n / 2 - 1);
        let eps = (radius as f64 + 0.5) / n as f64;
        let b = bohr_set(lambda, eps, n).unwrap();
        let want: Vec<u64> = (0..n).filter(|&x| {
            let y = x * lambda % n;
            y.min(n - y) <= radius
        }).collect();
        prop_assert_eq!(b.elements(), &want[..]);
    }

    #[test]
    fn bohr_bounds_hold(pi in 0usize..4, lam in 1u64..1_000_000, e in 0.0f64..1.0) {
        let n = PRIMES[pi];
        let lambda = lam % (n - 1) + 1;
        let eps = 3.0 / n as f64 + e * (0.45 - 3.0 / n as f64);
        let bb = bohr_bounds(lambda, eps, n).unwrap();
        prop_assert!(bb.decay_holds(), "{bb:?}");
        prop_assert!(bb.plateau_holds(), "{bb:?}");
    }

    #[test]
    fn cube_union_spectrum(n in 8u32..=14, a in 2i32..=5, gap in 0i32..=2) {
        let (delta, alpha) = (2f64.powi(-a), 2f64.powi(-a - gap));
        let cfg = CubeConstructionConfig { relaxed: true, ..CubeConstructionConfig::new(delta, alpha, n) };
        let Ok(rep) = construct_cube_union(&cfg) else { return Ok(()) };
        prop_assert!(rep.check("R_alpha(A) inside union of L_i").unwrap().pass);
        if gap == 0 {
            prop_assert_eq!(Some(&rep.large_spectrum), rep.target.as_ref());
        }
        if rep.verdict {
            reverify(&rep, n as u64);
        }
    }
}

#[test]
fn green_two_blocks_exact_sum() {
    let n = 65537u64;
    let g = green_plus_function(Group::cyclic(n).unwrap(), &[vec![1, 100], vec![10000, 30000]]).unwrap();
    assert!((g.sum() - n as f64 / 4.0).abs() <= 1e-9 * n as f64 / 4.0);
}

#[test]
fn prescribed_is_deterministic_and_reverifies() {
    let g = Group::cyclic(65537).unwrap();
    let s = GroupSubset::new(g, vec![0]).unwrap();
    let q = QuantizerConfig { tau: 4.0, max_retries: 20, seed: 11 };
    let a = construct_prescribed_small(&s, 0.3, 0.1, &q).unwrap();
    let b = construct_prescribed_small(&s, 0.3, 0.1, &q).unwrap();
    assert_eq!(a, b);
    assert!(a.verdict);
    assert_eq!(a.set.len(), (0.3f64 * 65537.0 + 1e-7).floor() as usize);
    reverify(&a, 5);
}
