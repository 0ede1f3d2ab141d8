//! Headline bound formulas, all with base-2 logarithms.

use serde::{Deserialize, Serialize};

use crate::dissociation::chang_bound;
use crate::energy::tmain_lower_bound;

/// φ = (√73 − 5)/2.
pub fn phi() -> f64 {
    (73f64.sqrt() - 5.0) / 2.0
}

/// Every headline bound evaluated at one (δ, α, k) and, for the energy lower
/// bound, one base size m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsParams {
    pub delta: f64,
    pub alpha: f64,
    pub k: usize,
    pub m: Option<usize>,
    /// 2(δ/α)² log(1/δ).
    pub chang: f64,
    /// δ(α/δ)^{2k} m^{2k} / 2^{4k}.
    pub tmain_rhs: Option<f64>,
    /// 2^{14k} δ/α^{2k}.
    pub bohr_energy: f64,
    /// 8δ/α^{2k}.
    pub cube_energy: f64,
    /// 16δ/α⁴.
    pub cube_random_energy: f64,
    /// δ/(64α²).
    pub bohr_spectrum: f64,
    /// δ/(8α²).
    pub cube_spectrum: f64,
    pub phi: f64,
}

impl BoundsParams {
    pub fn new(delta: f64, alpha: f64, k: usize, m: Option<usize>) -> Self {
        let a2k = alpha.powi(2 * k as i32);
        BoundsParams {
            delta,
            alpha,
            k,
            m,
            chang: chang_bound(delta, alpha),
            tmain_rhs: m.and_then(|m| tmain_lower_bound(delta, alpha, k, m).ok()),
            bohr_energy: 2f64.powi(14 * k as i32) * delta / a2k,
            cube_energy: 8.0 * delta / a2k,
            cube_random_energy: 16.0 * delta / alpha.powi(4),
            bohr_spectrum: delta / (64.0 * alpha * alpha),
            cube_spectrum: delta / (8.0 * alpha * alpha),
            phi: phi(),
        }
    }

    /// Looks a bound up by field name.
    pub fn value(&self, name: &str) -> Option<f64> {
        match name {
            "chang" => Some(self.chang),
            "tmain_rhs" => self.tmain_rhs,
            "bohr_energy" => Some(self.bohr_energy),
            "cube_energy" => Some(self.cube_energy),
            "cube_random_energy" => Some(self.cube_random_energy),
            "bohr_spectrum" => Some(self.bohr_spectrum),
            "cube_spectrum" => Some(self.cube_spectrum),
            "phi" => Some(self.phi),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_like_constant() {
        // φ² + 5φ − 12 = 0
        let p = phi();
        assert!((p * p + 5.0 * p - 12.0).abs() < 1e-12);
    }

    #[test]
    fn standard_cube_values() {
        let b = BoundsParams::new(2f64.powi(-5), 2f64.powi(-6), 2, None);
        assert_eq!(b.cube_energy, 2f64.powi(22));
        assert_eq!(b.cube_spectrum, 16.0);
        assert_eq!(b.cube_random_energy, 2f64.powi(23));
        assert!(b.tmain_rhs.is_none());
    }

    #[test]
    fn chang_base_two() {
        let b = BoundsParams::new(0.25, 0.125, 2, Some(3));
        assert!((b.chang - 16.0).abs() < 1e-12);
    }
}
