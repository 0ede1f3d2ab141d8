//! Small symmetric sets realized exactly as a large spectrum.

use crate::constructions::quantize::{search, QuantizerConfig};
use crate::constructions::report::{Check, ConstructionReport, Draft, FunctionDiagnostics, QuantizerStats, Regime};
use crate::energy::{LargeSpectrum, DEFAULT_ETA};
use crate::error::{Error, Result};
use crate::fourier::arith::mul_mod;
use crate::fourier::group::{DensityFunction, Group, GroupSubset};
use crate::fourier::spectrum::spectrum_of_function;

fn check_density(delta: f64, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= delta && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < alpha <= delta <= 1, got delta={delta}, alpha={alpha}")));
    }
    Ok(())
}

/// `f(x) = δ + 2α Σ_{r∈S\{0}} χ_r(x)`, so that `f̂(r) = 2α|G|` on `S\{0}`.
pub fn build_prescribed_function(s: &GroupSubset, delta: f64, alpha: f64) -> Result<DensityFunction> {
    check_density(delta, alpha)?;
    if delta > 0.5 {
        return Err(Error::Precondition(format!("delta = {delta} exceeds 1/2")));
    }
    if !s.contains(0) || !s.is_symmetric() {
        return Err(Error::Precondition("S must be symmetric and contain 0".into()));
    }
    // the range argument needs |S \ {0}|, not |S|
    let nonzero = s.len() - 1;
    if nonzero as f64 > delta / (2.0 * alpha) {
        return Err(Error::Precondition(format!("|S*| = {nonzero} exceeds delta/(2 alpha) = {}", delta / (2.0 * alpha))));
    }
    let g = s.group();
    let order = g.order();
    let mut values = vec![delta; order];
    for &r in s.elements().iter().filter(|&&r| r != 0) {
        match g {
            Group::Cyclic { modulus } => {
                for (x, v) in values.iter_mut().enumerate() {
                    let phase = mul_mod(x as u64, r, modulus) as f64 / modulus as f64;
                    *v += 2.0 * alpha * (std::f64::consts::TAU * phase).cos();
                }
            }
            Group::Cube { .. } => {
                for (x, v) in values.iter_mut().enumerate() {
                    *v += if (x as u64 & r).count_ones() % 2 == 0 { 2.0 * alpha } else { -2.0 * alpha };
                }
            }
        }
    }
    DensityFunction::new(g, values)
}

pub fn construct_prescribed_small(s: &GroupSubset, delta: f64, alpha: f64, qcfg: &QuantizerConfig) -> Result<ConstructionReport> {
    let f = build_prescribed_function(s, delta, alpha)?;
    let order = s.group().order() as f64;
    let floor = 2.0 * qcfg.tau / order.sqrt();
    if alpha <= floor {
        return Err(Error::Precondition(format!("alpha = {alpha} must exceed 2 tau / sqrt|G| = {floor}")));
    }
    let hypotheses = delta <= 0.5 && 20.0 / order.sqrt() < alpha && alpha <= delta / 2.0 && qcfg.tau <= 20.0;
    let regime = Regime::from_hypotheses(hypotheses);
    let fhat = spectrum_of_function(&f);
    let target = s.elements().to_vec();
    let attempt = search(&f, &fhat, qcfg, |_, spec| {
        LargeSpectrum::from_spectrum(spec, alpha, DEFAULT_ETA).is_ok_and(|l| l.members == target)
    })?;
    let large = LargeSpectrum::from_spectrum(&attempt.spectrum, alpha, DEFAULT_ETA)?;
    let mut d = Draft::new("prescribed", delta, alpha, regime, attempt.set);
    d.target = Some(target);
    d.function = Some(FunctionDiagnostics::new(&f, &fhat, s.elements()));
    d.quantizer = Some(QuantizerStats {
        deviation: attempt.deviation,
        deviation_bound: qcfg.deviation_bound(order as usize),
        accepted: attempt.accepted,
        seed: qcfg.seed,
    });
    d.retries_used = attempt.index + 1;
    d.checks.push(Check::at_most("deviation <= tau sqrt|G|", attempt.deviation, qcfg.deviation_bound(order as usize), regime));
    d.checks.push(Check::at_least("min f", f.min(), 0.0, regime));
    d.checks.push(Check::at_most("max f", f.max(), 1.0, regime));
    Ok(d.finish(&attempt.spectrum, &large, qcfg.seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::spectrum::direct_spectrum;

    #[test]
    fn origin_only_is_constant() {
        let g = Group::cyclic(64).unwrap();
        let f = build_prescribed_function(&GroupSubset::new(g, vec![0]).unwrap(), 0.3, 0.1).unwrap();
        assert!(f.values().iter().all(|&v| (v - 0.3).abs() < 1e-15));
    }

    #[test]
    fn pair_matches_closed_form() {
        let n = 101u64;
        let g = Group::cyclic(n).unwrap();
        let (delta, alpha) = (0.4, 0.05);
        let f = build_prescribed_function(&GroupSubset::new(g, vec![0, 3, n - 3]).unwrap(), delta, alpha).unwrap();
        for x in 0..n as usize {
            let want = delta + 4.0 * alpha * (std::f64::consts::TAU * 3.0 * x as f64 / n as f64).cos();
            assert!((f.values()[x] - want).abs() < 1e-12);
        }
        let fhat = direct_spectrum(g, f.values());
        for r in 0..n as usize {
            let want = match r {
                0 => delta * n as f64,
                3 | 98 => 2.0 * alpha * n as f64,
                _ => 0.0,
            };
            assert!((fhat[r].re - want).abs() < 1e-9 && fhat[r].im.abs() < 1e-9, "r={r}");
        }
    }

    #[test]
    fn cardinality_guard() {
        let g = Group::cyclic(101).unwrap();
        let s = GroupSubset::new(g, vec![0, 1, 100, 2, 99]).unwrap();
        assert!(build_prescribed_function(&s, 0.2, 0.05).is_err());
        assert!(build_prescribed_function(&s, 0.2, 0.025).is_ok());
        assert!(build_prescribed_function(&GroupSubset::new(g, vec![0, 1]).unwrap(), 0.2, 0.01).is_err());
    }

    #[test]
    fn small_pipeline() {
        let g = Group::cyclic(65536).unwrap();
        let s = GroupSubset::new(g, vec![0]).unwrap();
        let cfg = QuantizerConfig { tau: 4.0, max_retries: 20, seed: 1 };
        let rep = construct_prescribed_small(&s, 0.3, 0.1, &cfg).unwrap();
        assert!(rep.verdict, "{:?}", rep.large_spectrum);
        assert_eq!(rep.large_spectrum, vec![0]);
        assert_eq!(rep.set_size, (0.3f64 * 65536.0).floor() as usize);
    }
}
