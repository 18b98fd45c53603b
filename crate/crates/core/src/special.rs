//! Normal tail probabilities and log-space helpers.

use libm::erfc;
use std::f64::consts::SQRT_2;

/// Standard normal CDF via `erfc`, accurate in the far lower tail.
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// Upper tail `P(N > z)`.
pub fn norm_sf(z: f64) -> f64 {
    0.5 * erfc(z / SQRT_2)
}

/// `log(exp(a) + exp(b))` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Sum whose value does not depend on the order of `values`.
///
/// Terms are sorted by total order and accumulated with Neumaier
/// compensation, so permuting the inputs gives a bit-identical result.
pub fn order_free_sum(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values.iter() {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cdf_reference_values() {
        assert_relative_eq!(norm_cdf(0.0), 0.5, max_relative = 1e-15);
        assert_relative_eq!(norm_cdf(-1.959963984540054), 0.025, max_relative = 1e-13);
        // P(N > 10) = 7.619853024160527e-24
        assert_relative_eq!(norm_sf(10.0), 7.619853024160527e-24, max_relative = 1e-13);
        assert_relative_eq!(norm_cdf(-10.0), norm_sf(10.0), max_relative = 1e-15);
        assert!(norm_cdf(-37.0) > 0.0);
    }

    #[test]
    fn log_add_exp_is_stable() {
        assert_relative_eq!(log_add_exp(0.0, 0.0), 2f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(log_add_exp(1000.0, 1000.0), 1000.0 + 2f64.ln(), max_relative = 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, -3.0), -3.0);
    }

    #[test]
    fn order_free_sum_ignores_order() {
        let mut a = vec![1e16, 1.0, -1e16, 3.5, 1e-3, -7.25];
        let mut b = a.clone();
        b.reverse();
        b.swap(0, 3);
        assert_eq!(order_free_sum(&mut a).to_bits(), order_free_sum(&mut b).to_bits());
        let mut c = vec![1e16, 1.0, -1e16];
        assert_eq!(order_free_sum(&mut c), 1.0);
    }
}
