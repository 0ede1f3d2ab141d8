//! Modular arithmetic on residues: inverses, deterministic primality and
//! symmetric representatives.

use crate::error::{Error, Result};

/// Witnesses that make Miller-Rabin deterministic for every `u64`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin test, exact over the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// The inverse of `a` modulo `modulus`.
pub fn inverse_mod(a: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::InvalidParameter(format!("modulus {modulus} < 2")));
    }
    let a_red = a % modulus;
    let (g, x, _) = extended_gcd(a_red as i128, modulus as i128);
    if g != 1 {
        return Err(Error::NotInvertible { a, modulus });
    }
    Ok(x.rem_euclid(modulus as i128) as u64)
}

/// Representative of `a mod n` in `(-n/2, n/2]`.
#[inline]
pub fn symmetric_rep(a: u64, n: u64) -> i64 {
    let a = a % n;
    if 2 * a > n {
        a as i64 - n as i64
    } else {
        a as i64
    }
}

/// `|a|` for a residue, i.e. distance to 0 in Z_n.
#[inline]
pub fn residue_abs(a: u64, n: u64) -> u64 {
    symmetric_rep(a, n).unsigned_abs()
}

/// Reduces a signed integer into `[0, n)`.
#[inline]
pub fn reduce_signed(v: i128, n: u64) -> u64 {
    v.rem_euclid(n as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn known_primes_and_pseudoprimes() {
        for p in [65537u64, 131071, 250007, 1_000_003, (1 << 61) - 1, 18446744073709551557] {
            assert!(is_prime(p), "{p}");
        }
        // strong pseudoprimes to several small bases
        for c in [3215031751u64, 2152302898747, 3474749660383, 341550071728321, 3825123056546413051] {
            assert!(!is_prime(c), "{c}");
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse_mod(3, 7).unwrap(), 5);
        assert_eq!(inverse_mod(1, 131071).unwrap(), 1);
        // frozen from an independent extended-Euclid run
        assert_eq!(inverse_mod(12345, 131071).unwrap(), 113064);
        assert!(matches!(inverse_mod(6, 9), Err(Error::NotInvertible { .. })));
        assert!(matches!(inverse_mod(0, 7), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn inverse_matches_fermat_oracle() {
        // For prime p, a^{p-2} is the inverse; independent of the Euclid path.
        let p = 131071u64;
        for a in [2u64, 3, 12345, 99999, 131070] {
            assert_eq!(inverse_mod(a, p).unwrap(), pow_mod(a, p - 2, p));
        }
        assert_eq!(inverse_mod(12345, 131071).unwrap(), pow_mod(12345, 131069, 131071));
    }

    #[test]
    fn symmetric_representatives() {
        assert_eq!(symmetric_rep(0, 10), 0);
        assert_eq!(symmetric_rep(5, 10), 5);
        assert_eq!(symmetric_rep(6, 10), -4);
        assert_eq!(symmetric_rep(6, 13), 6);
        assert_eq!(symmetric_rep(7, 13), -6);
        assert_eq!(residue_abs(12, 13), 1);
    }
}
