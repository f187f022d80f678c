use num_bigint::BigUint;

use crate::error::{GrassError, Result};

/// The explicit complexity bound `c1(k, n) * d^c2(k, n)` for hypersurfaces of
/// degree `d` in `G(k, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub k: usize,
    pub n: usize,
    pub d: u64,
    /// The unspecified multiplicative constant, reported as given.
    pub c_param: f64,
    /// `c1 / c_param`, exact.
    pub c1_over_c: BigUint,
    pub log10_c1: f64,
    /// `k (n + 5)`.
    pub c2: u64,
    pub log10_bound: f64,
}

/// `log10` of a big integer from its leading 64 bits.
pub fn log10_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0) as f64;
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

pub(crate) fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `2k * 2^(8k^2 - 2k) * (binom(nk, k(k+1)+1) + (k+1)^2)^(k(n+1)) * (2k^2(n+1))^(k(n+5))`.
pub fn c1_over_c(k: usize, n: usize) -> BigUint {
    let (k, n) = (k as u64, n as u64);
    let base = binomial_big(n * k, k * (k + 1) + 1) + BigUint::from((k + 1) * (k + 1));
    let last = BigUint::from(2 * k * k * (n + 1));
    BigUint::from(2 * k)
        * (BigUint::from(1u32) << (8 * k * k - 2 * k))
        * base.pow((k * (n + 1)) as u32)
        * last.pow((k * (n + 5)) as u32)
}

/// Evaluates the bound, in logarithmic form for the final product.
pub fn pfaffian_bound(k: usize, n: usize, d: u64, c_param: f64) -> Result<BoundReport> {
    if k == 0 || n < 2 || k > n - k {
        return Err(GrassError::DimensionError(format!("need 1 <= k <= n - k, got n = {n}, k = {k}")));
    }
    if d == 0 {
        return Err(GrassError::InvalidArgument("degree must be at least 1".into()));
    }
    if !(c_param > 0.0 && c_param.is_finite()) {
        return Err(GrassError::InvalidArgument(format!("constant must be positive and finite, got {c_param}")));
    }
    let exact = c1_over_c(k, n);
    let c2 = (k * (n + 5)) as u64;
    let log10_c1 = c_param.log10() + log10_big(&exact);
    let log10_bound = log10_c1 + c2 as f64 * (d as f64).log10();
    Ok(BoundReport { k, n, d, c_param, c1_over_c: exact, log10_c1, c2, log10_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        assert_eq!(pfaffian_bound(2, 4, 1, 1.0).unwrap().c2, 18);
        assert_eq!(pfaffian_bound(3, 8, 1, 1.0).unwrap().c2, 39);
    }

    #[test]
    fn g24_constant() {
        let expect = BigUint::from(4u32) * (BigUint::from(1u32) << 28u32) * BigUint::from(17u32).pow(10) * BigUint::from(40u32).pow(18);
        assert_eq!(c1_over_c(2, 4), expect);
    }

    #[test]
    fn monotone_and_validated() {
        let a = pfaffian_bound(2, 5, 2, 1.0).unwrap();
        let b = pfaffian_bound(2, 5, 3, 1.0).unwrap();
        let c = pfaffian_bound(2, 5, 3, 2.0).unwrap();
        assert!(a.log10_bound < b.log10_bound && b.log10_bound < c.log10_bound);
        assert!(pfaffian_bound(3, 5, 1, 1.0).is_err());
        assert!(pfaffian_bound(2, 5, 0, 1.0).is_err());
        assert!(pfaffian_bound(2, 5, 1, 0.0).is_err());
    }

    #[test]
    fn log10_of_powers_of_ten() {
        let x = BigUint::from(10u32).pow(300);
        assert!((log10_big(&x) - 300.0).abs() < 1e-12);
        assert!((log10_big(&BigUint::from(1000u32)) - 3.0).abs() < 1e-15);
    }
}
