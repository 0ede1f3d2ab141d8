//! Walsh-Hadamard transform on Z_2^n: `f̂(r) = Σ_x (-1)^{<r,x>} f(x)`.

use std::ops::{Add, Sub};

/// Unnormalized in-place butterfly; applying it twice multiplies by `2^n`.
pub fn wht_in_place<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let n = data.len();
    assert!(n.is_power_of_two(), "WHT length must be a power of two");
    let mut half = 1;
    while half < n {
        for start in (0..n).step_by(2 * half) {
            for i in start..start + half {
                let u = data[i];
                let v = data[i + half];
                data[i] = u + v;
                data[i + half] = u - v;
            }
        }
        half <<= 1;
    }
}

/// Definition-based O(4^n) sum, kept as an oracle.
pub fn direct_wht(values: &[i64]) -> Vec<i64> {
    let n = values.len();
    (0..n)
        .map(|r| {
            values
                .iter()
                .enumerate()
                .map(|(x, &v)| if (r & x).count_ones() % 2 == 0 { v } else { -v })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let values: Vec<i64> = (0..64).map(|i| (i * 37 % 11) - 5).collect();
        let mut fast = values.clone();
        wht_in_place(&mut fast);
        assert_eq!(fast, direct_wht(&values));
    }

    #[test]
    fn involution_up_to_scale() {
        let values: Vec<i64> = (0..256).map(|i| (i * 13 % 7) as i64).collect();
        let mut t = values.clone();
        wht_in_place(&mut t);
        wht_in_place(&mut t);
        let scaled: Vec<i64> = values.iter().map(|v| v * 256).collect();
        assert_eq!(t, scaled);
    }

    #[test]
    fn float_variant() {
        let mut v = vec![1.0, 0.0, 0.0, 0.0];
        wht_in_place(&mut v);
        assert_eq!(v, vec![1.0; 4]);
    }
}
