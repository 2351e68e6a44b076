//! Exact integer helpers shared by the bound formulas.

/// Binomial coefficient; zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[inline]
pub fn pow2(e: u32) -> u128 {
    1u128 << e
}

#[inline]
pub fn ceil_div(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}

/// Number of DNA words of length `n` with GC-content `w`.
pub fn gc_slice_size(n: usize, w: usize) -> u128 {
    binom(n as i64, w as i64) * pow2(n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(12, 6), 924);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(3, -1), 0);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn slice_sizes() {
        assert_eq!(gc_slice_size(4, 2), 96);
        assert_eq!(gc_slice_size(12, 6), 924 * 4096);
    }
}
