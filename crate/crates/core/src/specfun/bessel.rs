//! Bessel functions of the first kind, integer order.
//!
//! |x| ≤ [`SERIES_LIMIT`] uses the ascending power series; beyond that a
//! Miller backward recurrence normalised by J₀ + 2ΣJ₂ₖ = 1.

use super::SpecFunError;

pub const MAX_ORDER: u32 = 64;
pub const SERIES_LIMIT: f64 = 12.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// J_order(x).
pub fn bessel_j(order: u32, x: f64) -> Result<f64, SpecFunError> {
    if order > MAX_ORDER {
        return Err(SpecFunError::UnsupportedOrder { order, max: MAX_ORDER });
    }
    if !x.is_finite() {
        return Err(SpecFunError::Domain(format!("bessel_j: non-finite argument {x}")));
    }
    Ok(bessel_j_unchecked(order, x))
}

/// J₀(x); the hot path for radial spherical functions.
#[inline]
pub fn j0(x: f64) -> f64 {
    bessel_j_unchecked(0, x)
}

pub(crate) fn bessel_j_unchecked(order: u32, x: f64) -> f64 {
    let sign = if x < 0.0 && order % 2 == 1 { -1.0 } else { 1.0 };
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT { series(order, ax) } else { miller(order, ax) };
    sign * v
}

/// Ascending series Σ (−x²/4)ᵏ (x/2)ⁿ / (k! (n+k)!), x ≥ 0.
pub(crate) fn series(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    let q = -half * half;
    let n = order as f64;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (n + k));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > half {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

/// Miller backward recurrence, x > 0.
pub(crate) fn miller(order: u32, x: f64) -> f64 {
    let top = (order as f64).max(x);
    let mut start = (top + (160.0 * top).sqrt() + 20.0) as usize;
    start += start % 2;
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        // cur = J_k, compute J_{k-1}
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        let idx = k - 1;
        if idx == order as usize {
            wanted = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            next *= RESCALE_BY;
            norm *= RESCALE_BY;
            wanted *= RESCALE_BY;
        }
    }
    norm += cur;
    wanted / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    /// J_n(x) = (1/π)∫₀^π cos(nτ − x sin τ) dτ by the periodic trapezoid
    /// rule, which converges geometrically once the node count exceeds x + n.
    fn integral_oracle(n: u32, x: f64) -> f64 {
        let m = 512usize;
        let h = 2.0 * PI / m as f64;
        let s: f64 = (0..m)
            .map(|j| {
                let t = j as f64 * h;
                (n as f64 * t - x * t.sin()).cos()
            })
            .sum();
        s / m as f64
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(bessel_j(0, 2.404825557695773).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn order_limit() {
        assert!(matches!(bessel_j(65, 1.0), Err(SpecFunError::UnsupportedOrder { .. })));
        assert!(bessel_j(64, 1.0).is_ok());
        assert!(bessel_j(0, f64::NAN).is_err());
    }

    #[test]
    fn matches_integral_oracle() {
        for n in [0u32, 1, 2, 5, 10, 20, 33, 64] {
            for i in 0..=200 {
                let x = -50.0 + 0.5 * i as f64;
                let got = bessel_j(n, x).unwrap();
                let want = integral_oracle(n, x);
                assert!((got - want).abs() <= 1e-12, "n={n} x={x} got={got} want={want}");
            }
        }
    }

    #[test]
    fn branches_agree_on_overlap() {
        for n in 0..=20 {
            for i in 0..=40 {
                let x = 10.0 + 0.05 * i as f64;
                let d = (series(n, x) - miller(n, x)).abs();
                assert!(d <= 1e-12, "n={n} x={x} diff={d}");
            }
        }
    }

    #[test]
    fn recurrence_identity() {
        for n in 1..=32u32 {
            for i in 0..=399 {
                let x = 0.1 + 0.1 * i as f64;
                let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
                let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
                assert!((lhs - rhs).abs() <= 1e-9, "n={n} x={x}");
            }
        }
    }
}
