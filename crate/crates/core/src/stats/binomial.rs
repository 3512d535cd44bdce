use num_bigint::BigUint;

use super::{Sidedness, TestResult};
use crate::error::{Error, Result};

/// Relative tolerance when deciding which outcomes are "as extreme" as the
/// observed one in the two-sided test, so that outcomes whose probability
/// equals the observed one up to rounding are included.
const TIE_TOLERANCE: f64 = 1e-7;

/// Natural log of a big integer, accurate to a few ulps.
pub(crate) fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln C(n, k)` for every `k` in `0..=n`, from exact integer coefficients.
fn ln_binomial_row(n: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::from(1u32);
    for k in 0..=n {
        out.push(big_ln(&c));
        if k < n {
            c *= n - k;
            c /= k + 1;
        }
    }
    out
}

/// Exact binomial test of `k` successes in `n` trials against success
/// probability `p0`. The two-sided p-value sums every outcome no more likely
/// than the observed one.
pub fn binomial_test(k: u64, n: u64, p0: f64, sidedness: Sidedness) -> Result<TestResult> {
    if n == 0 || k > n {
        return Err(Error::InvalidArgument(format!("binomial test needs 0 <= k <= n, n >= 1 (k={k}, n={n})")));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::InvalidArgument(format!("null probability {p0} outside (0, 1)")));
    }
    let (lp, lq) = (p0.ln(), (-p0).ln_1p());
    let ln_pmf: Vec<f64> = ln_binomial_row(n)
        .into_iter()
        .enumerate()
        .map(|(i, lc)| lc + i as f64 * lp + (n - i as u64) as f64 * lq)
        .collect();
    let observed = ln_pmf[k as usize];
    let include = |i: usize| match sidedness {
        Sidedness::Greater => i as u64 >= k,
        Sidedness::Less => i as u64 <= k,
        Sidedness::TwoSided => ln_pmf[i] <= observed + TIE_TOLERANCE.ln_1p(),
    };
    let mut terms: Vec<f64> = (0..ln_pmf.len()).filter(|&i| include(i)).map(|i| ln_pmf[i].exp()).collect();
    terms.sort_by(f64::total_cmp);
    let p_value = terms.iter().sum::<f64>().min(1.0);
    Ok(TestResult {
        method: "exact binomial".into(),
        statistic: k as f64,
        p_value,
        n: vec![n],
        seed: None,
        replicates: None,
        sidedness,
        alpha_adjusted: None,
        generator: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: u64, n: u64) -> f64 {
        binomial_test(k, n, 0.5, Sidedness::TwoSided).unwrap().p_value
    }

    #[test]
    fn named_values() {
        assert!((p(49, 49) / 3.552713678800501e-15 - 1.0).abs() < 1e-12);
        assert!((p(45, 49) / (2.0 * 231_526.0 / 2f64.powi(49)) - 1.0).abs() < 1e-12);
        assert_eq!(p(1, 2), 1.0);
    }

    #[test]
    fn symmetric_and_one_sided() {
        assert_eq!(p(3, 10), p(7, 10));
        let g = binomial_test(10, 10, 0.5, Sidedness::Greater).unwrap().p_value;
        assert!((g - 1.0 / 1024.0).abs() < 1e-15);
        let l = binomial_test(10, 10, 0.5, Sidedness::Less).unwrap().p_value;
        assert!((l - 1.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_null() {
        // pmf at p0 = 0.3, n = 3: 0.343, 0.441, 0.189, 0.027.
        let r = binomial_test(1, 3, 0.3, Sidedness::TwoSided).unwrap();
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let r = binomial_test(0, 3, 0.3, Sidedness::TwoSided).unwrap();
        assert!((r.p_value - 0.559).abs() < 1e-12);
        let r = binomial_test(2, 3, 0.3, Sidedness::TwoSided).unwrap();
        assert!((r.p_value - 0.216).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(binomial_test(1, 0, 0.5, Sidedness::TwoSided).is_err());
        assert!(binomial_test(3, 2, 0.5, Sidedness::TwoSided).is_err());
        assert!(binomial_test(1, 2, 1.0, Sidedness::TwoSided).is_err());
        assert!(binomial_test(1, 2, 0.0, Sidedness::TwoSided).is_err());
    }

    #[test]
    fn big_ln_matches_f64_for_small_and_large() {
        assert_eq!(big_ln(&BigUint::from(1u32)), 0.0);
        let big = BigUint::from(3u32).pow(100);
        assert!((big_ln(&big) - 100.0 * 3f64.ln()).abs() < 1e-12);
    }
}
