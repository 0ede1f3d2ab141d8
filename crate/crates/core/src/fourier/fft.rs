//! Arbitrary-length discrete Fourier transforms.
//!
//! `DftPlan` evaluates `X(r) = Σ_n x(n) exp(sign · 2πi·nr/N)` for any `N`:
//! direct summation for small `N`, iterative radix-2 for powers of two, and
//! Bluestein's chirp-z reduction to a power-of-two circular convolution
//! otherwise. All twiddles are generated from exact integer phase indices
//! (`n·r mod N`, `k² mod 2N`) so accuracy does not degrade with `N`.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Lengths at or below this use the O(N²) direct sum.
pub const DIRECT_THRESHOLD: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// exp(-2πi nr/N)
    Negative,
    /// exp(+2πi nr/N)
    Positive,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Negative => -1.0,
            Direction::Positive => 1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Negative => Direction::Positive,
            Direction::Positive => Direction::Negative,
        }
    }
}

/// exp(sign · 2πi · num / den) with `num` already reduced modulo `den`.
#[inline]
fn unit(sign: f64, num: u64, den: u64) -> Complex64 {
    let theta = sign * 2.0 * PI * (num as f64) / (den as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// Roots `exp(sign·2πi k/n)` for `k < n`.
fn roots_table(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n).map(|k| unit(sign, k as u64, n as u64)).collect()
}

/// In-place iterative radix-2 transform; `twiddles[k] = exp(sign·2πi k/len)` for `k < len/2`.
fn radix2_in_place(data: &mut [Complex64], twiddles: &[Complex64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let u = data[start + k];
                let v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}

#[derive(Debug, Clone)]
enum Kernel {
    Direct { roots: Vec<Complex64> },
    Radix2 { twiddles: Vec<Complex64> },
    Bluestein {
        /// exp(sign·πi k²/N) for k < N.
        chirp: Vec<Complex64>,
        /// Forward transform of the conjugate chirp filter, length `m`.
        filter_hat: Vec<Complex64>,
        /// Forward radix-2 twiddles of size `m`.
        fwd: Vec<Complex64>,
        /// Inverse radix-2 twiddles of size `m`.
        inv: Vec<Complex64>,
    },
}

/// A reusable transform of fixed length and direction.
#[derive(Debug, Clone)]
pub struct DftPlan {
    len: usize,
    direction: Direction,
    kernel: Kernel,
}

impl DftPlan {
    pub fn new(len: usize, direction: Direction) -> Self {
        assert!(len > 0, "transform length must be positive");
        let sign = direction.sign();
        let kernel = if len <= DIRECT_THRESHOLD {
            Kernel::Direct { roots: roots_table(len, sign) }
        } else if len.is_power_of_two() {
            Kernel::Radix2 { twiddles: half_roots(len, sign) }
        } else {
            let m = (2 * len - 1).next_power_of_two();
            let two_n = 2 * len as u64;
            let chirp: Vec<Complex64> = (0..len as u64)
                .map(|k| {
                    let idx = ((k as u128 * k as u128) % two_n as u128) as u64;
                    unit(sign, idx, two_n)
                })
                .collect();
            let fwd = half_roots(m, -1.0);
            let inv = half_roots(m, 1.0);
            let mut filter = vec![Complex64::new(0.0, 0.0); m];
            filter[0] = chirp[0].conj();
            for k in 1..len {
                let c = chirp[k].conj();
                filter[k] = c;
                filter[m - k] = c;
            }
            radix2_in_place(&mut filter, &fwd);
            Kernel::Bluestein { chirp, filter_hat: filter, fwd, inv }
        };
        DftPlan { len, direction, kernel }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn process(&self, input: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(input.len(), self.len, "input length does not match plan");
        match &self.kernel {
            Kernel::Direct { roots } => direct_with_roots(input, roots),
            Kernel::Radix2 { twiddles } => {
                let mut data = input.to_vec();
                radix2_in_place(&mut data, twiddles);
                data
            }
            Kernel::Bluestein { chirp, filter_hat, fwd, inv } => {
                let m = filter_hat.len();
                let mut a = vec![Complex64::new(0.0, 0.0); m];
                for (k, (x, w)) in input.iter().zip(chirp).enumerate() {
                    a[k] = x * w;
                }
                radix2_in_place(&mut a, fwd);
                for (x, h) in a.iter_mut().zip(filter_hat) {
                    *x *= h;
                }
                radix2_in_place(&mut a, inv);
                let scale = 1.0 / m as f64;
                (0..self.len).map(|r| a[r] * chirp[r] * scale).collect()
            }
        }
    }

    pub fn process_real(&self, input: &[f64]) -> Vec<Complex64> {
        let data: Vec<Complex64> = input.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.process(&data)
    }
}

fn half_roots(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n / 2).map(|k| unit(sign, k as u64, n as u64)).collect()
}

fn direct_with_roots(input: &[Complex64], roots: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    (0..n)
        .map(|r| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for x in input {
                acc += x * roots[idx];
                idx += r;
                if idx >= n {
                    idx -= n;
                }
            }
            acc
        })
        .collect()
}

/// The O(N²) definition, with exact phase reduction. Used as a test oracle
/// and for short transforms.
pub fn direct_dft(input: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let n = input.len();
    if n == 0 {
        return Vec::new();
    }
    let roots = roots_table(n, direction.sign());
    direct_with_roots(input, &roots)
}

/// One-shot transform.
pub fn dft(input: &[Complex64], direction: Direction) -> Vec<Complex64> {
    DftPlan::new(input.len(), direction).process(input)
}

/// Circular cross-correlation of two real sequences:
/// `out[s] = Σ_x a(x) · b(x - s)`.
pub fn cross_correlation(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let fwd = DftPlan::new(n, Direction::Negative);
    let fa = fwd.process_real(a);
    let fb = fwd.process_real(b);
    // corr[s] = Σ_x a(x) b(x-s): transform is A(k)·conj(B(k)).
    let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y.conj()).collect();
    let inv = DftPlan::new(n, Direction::Positive);
    inv.process(&prod).iter().map(|z| z.re / n as f64).collect()
}
