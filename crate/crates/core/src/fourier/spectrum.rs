//! Fourier transforms of subsets and functions on the ambient group.
//!
//! Sign convention: with `e(x) = exp(-2πi x/N)` the transform on Z_N is
//! `f̂(r) = Σ_n f(n) e(-nr)`, i.e. the kernel is `exp(+2πi nr/N)`. The cube
//! transform is the Walsh-Hadamard sum `Σ_x (-1)^{<r,x>} f(x)`. The two
//! conventions for the character differ by conjugation only; every quantity
//! downstream depends on `|f̂|` alone.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fourier::fft::{direct_dft, DftPlan, Direction};
use crate::fourier::group::{kahan_sum, DensityFunction, Group, GroupSubset};
use crate::fourier::wht::wht_in_place;

/// Direction of the cyclic kernel under the crate-wide convention.
pub const CYCLIC_DIRECTION: Direction = Direction::Positive;

/// Coefficient storage. Cube transforms of indicators are exact integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Coefficients {
    Complex(Vec<Complex64>),
    Real(Vec<f64>),
    Integer(Vec<i64>),
}

/// The full transform of a subset or a function, one value per frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    group: Group,
    coefficients: Coefficients,
    /// |A| when the source was a subset.
    source_cardinality: Option<usize>,
}

impl Spectrum {
    pub fn group(&self) -> Group {
        self.group
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn source_cardinality(&self) -> Option<usize> {
        self.source_cardinality
    }

    pub fn len(&self) -> usize {
        match &self.coefficients {
            Coefficients::Complex(v) => v.len(),
            Coefficients::Real(v) => v.len(),
            Coefficients::Integer(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn value(&self, r: u64) -> Complex64 {
        let r = r as usize;
        match &self.coefficients {
            Coefficients::Complex(v) => v[r],
            Coefficients::Real(v) => Complex64::new(v[r], 0.0),
            Coefficients::Integer(v) => Complex64::new(v[r] as f64, 0.0),
        }
    }

    #[inline]
    pub fn abs(&self, r: u64) -> f64 {
        let r = r as usize;
        match &self.coefficients {
            Coefficients::Complex(v) => v[r].norm(),
            Coefficients::Real(v) => v[r].abs(),
            Coefficients::Integer(v) => v[r].unsigned_abs() as f64,
        }
    }

    /// `Σ_r |f̂(r)|²`; exact for integer tables below 2^128.
    pub fn energy(&self) -> f64 {
        match &self.coefficients {
            Coefficients::Complex(v) => kahan_sum(v.iter().map(|z| z.norm_sqr())),
            Coefficients::Real(v) => kahan_sum(v.iter().map(|x| x * x)),
            Coefficients::Integer(v) => v.iter().map(|&x| (x as i128 * x as i128) as u128).sum::<u128>() as f64,
        }
    }

    /// `|f̂(r)|` for all r.
    pub fn magnitudes(&self) -> Vec<f64> {
        (0..self.len() as u64).map(|r| self.abs(r)).collect()
    }

    pub fn integer_values(&self) -> Option<&[i64]> {
        match &self.coefficients {
            Coefficients::Integer(v) => Some(v),
            _ => None,
        }
    }
}

/// Transform of a real table on Z_N under the crate convention.
pub fn cyclic_transform(values: &[f64]) -> Vec<Complex64> {
    let mut out = DftPlan::new(values.len(), CYCLIC_DIRECTION).process_real(values);
    // the zero frequency is a plain sum; keep it exact for indicators
    if let Some(z) = out.first_mut() {
        *z = Complex64::new(kahan_sum(values.iter().copied()), 0.0);
    }
    out
}

/// Transform of a subset of Z_N.
pub fn dft_cyclic(a: &GroupSubset) -> Result<Spectrum> {
    a.group().expect_cyclic()?;
    let coeffs = cyclic_transform(&a.indicator_f64());
    Ok(Spectrum { group: a.group(), coefficients: Coefficients::Complex(coeffs), source_cardinality: Some(a.len()) })
}

/// Transform of a real function on Z_N.
pub fn dft_cyclic_function(f: &DensityFunction) -> Result<Spectrum> {
    f.group().expect_cyclic()?;
    let coeffs = cyclic_transform(f.values());
    Ok(Spectrum { group: f.group(), coefficients: Coefficients::Complex(coeffs), source_cardinality: None })
}

/// Transform of a subset of Z_2^n; integer-valued.
pub fn wht_cube(a: &GroupSubset) -> Result<Spectrum> {
    a.group().expect_cube()?;
    let mut data = vec![0i64; a.group().order()];
    for &x in a.elements() {
        data[x as usize] = 1;
    }
    wht_in_place(&mut data);
    Ok(Spectrum { group: a.group(), coefficients: Coefficients::Integer(data), source_cardinality: Some(a.len()) })
}

/// Transform of a real function on Z_2^n.
pub fn wht_cube_function(f: &DensityFunction) -> Result<Spectrum> {
    f.group().expect_cube()?;
    let mut data = f.values().to_vec();
    wht_in_place(&mut data);
    Ok(Spectrum { group: f.group(), coefficients: Coefficients::Real(data), source_cardinality: None })
}

/// Transform of a subset in whichever group it lives in.
pub fn spectrum(a: &GroupSubset) -> Spectrum {
    match a.group() {
        Group::Cyclic { .. } => dft_cyclic(a),
        Group::Cube { .. } => wht_cube(a),
    }
    .expect("group kind checked by dispatch")
}

/// Transform of a function in whichever group it lives in.
pub fn spectrum_of_function(f: &DensityFunction) -> Spectrum {
    match f.group() {
        Group::Cyclic { .. } => dft_cyclic_function(f),
        Group::Cube { .. } => wht_cube_function(f),
    }
    .expect("group kind checked by dispatch")
}

/// `Σ_x f(x) χ_r(x)` evaluated directly at one frequency.
pub fn direct_coefficient(group: Group, values: &[f64], r: u64) -> Complex64 {
    match group {
        Group::Cyclic { modulus } => {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut phase = 0u64;
            for &v in values {
                if v != 0.0 {
                    let theta = 2.0 * std::f64::consts::PI * phase as f64 / modulus as f64;
                    acc += Complex64::new(theta.cos(), theta.sin()) * v;
                }
                phase = (phase + r) % modulus;
            }
            acc
        }
        Group::Cube { .. } => {
            let s: f64 = values
                .iter()
                .enumerate()
                .map(|(x, &v)| if (x as u64 & r).count_ones() % 2 == 0 { v } else { -v })
                .sum();
            Complex64::new(s, 0.0)
        }
    }
}

/// Full direct O(|G|²) transform; oracle for tests.
pub fn direct_spectrum(group: Group, values: &[f64]) -> Vec<Complex64> {
    match group {
        Group::Cyclic { .. } => {
            let data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            direct_dft(&data, CYCLIC_DIRECTION)
        }
        Group::Cube { .. } => (0..values.len() as u64).map(|r| direct_coefficient(group, values, r)).collect(),
    }
}

/// Relative Parseval residual `|Σ|f̂|² − |G|·Σ|f|²| / (|G|·Σ|f|²)`; zero when both sides vanish.
pub fn parseval_residual(values: &[f64], spectrum: &Spectrum) -> f64 {
    let order = spectrum.group().order() as f64;
    let lhs = spectrum.energy();
    let rhs = order * kahan_sum(values.iter().map(|v| v * v));
    if rhs == 0.0 {
        return if lhs == 0.0 { 0.0 } else { f64::INFINITY };
    }
    (lhs - rhs).abs() / rhs
}

pub fn parseval_check(f: &DensityFunction, spectrum: &Spectrum) -> f64 {
    parseval_residual(f.values(), spectrum)
}

pub fn parseval_check_subset(a: &GroupSubset, spectrum: &Spectrum) -> f64 {
    if let Some(v) = spectrum.integer_values() {
        // exact path: Σ Â² = |G|·|A|
        let lhs: u128 = v.iter().map(|&x| (x as i128 * x as i128) as u128).sum();
        let rhs = spectrum.group().order() as u128 * a.len() as u128;
        if rhs == 0 {
            return if lhs == 0 { 0.0 } else { f64::INFINITY };
        }
        return lhs.abs_diff(rhs) as f64 / rhs as f64;
    }
    parseval_residual(&a.indicator_f64(), spectrum)
}
