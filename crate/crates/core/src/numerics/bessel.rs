//! Cylindrical Bessel functions of the first kind, integer order.
//!
//! Three regimes:
//!
//! - ascending power series when the terms decrease from the start,
//! - Miller's downward recurrence normalized by `J0 + 2 Σ J_2k = 1`,
//! - Hankel's asymptotic expansion for `x ≥ 25` and `x ≥ m²`.

use alloc::format;

use crate::math;
use crate::{Error, Result};

const ASYMPTOTIC_MIN_X: f64 = 25.0;
const RESCALE_ABOVE: f64 = 1e250;

/// `J_m(x)` for a non-negative integer order.
///
/// Negative `x` is handled through `J_m(-x) = (-1)^m J_m(x)`.
pub fn bessel_j(m: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j: x = {x} is not finite")));
    }
    if x < 0.0 {
        let v = bessel_j(m, -x)?;
        return Ok(if m.is_multiple_of(2) { v } else { -v });
    }
    Ok(bessel_j_nonneg(m, x))
}

/// `J_m(x)` for any integer order, via `J_{-m}(x) = (-1)^m J_m(x)`.
pub fn bessel_j_signed(m: i32, x: f64) -> Result<f64> {
    let v = bessel_j(m.unsigned_abs(), x)?;
    Ok(if m < 0 && m % 2 != 0 { -v } else { v })
}

/// `J_m'(x)` from `J_m' = J_{m-1} - (m/x) J_m` (and `J_0' = -J_1`).
pub fn bessel_j_derivative(m: u32, x: f64) -> Result<f64> {
    if m == 0 {
        return Ok(-bessel_j(1, x)?);
    }
    if x == 0.0 {
        return Ok(if m == 1 { 0.5 } else { 0.0 });
    }
    Ok(bessel_j(m - 1, x)? - m as f64 / x * bessel_j(m, x)?)
}

/// The `k`-th positive zero (`k ≥ 1`) of `J_m`.
///
/// McMahon's expansion seeds a short Newton polish; the seed is kept when
/// Newton wanders off.
pub fn bessel_j_zero(m: u32, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("bessel_j_zero: zero index must be >= 1".into()));
    }
    let seed = mcmahon_zero(m, k);
    let mut x = seed;
    for _ in 0..8 {
        let f = bessel_j(m, x)?;
        let df = bessel_j_derivative(m, x)?;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        x -= step;
        if math::abs(step) <= 1e-15 * x {
            break;
        }
    }
    // Newton must stay within the gap between neighbouring zeros (~π).
    if !x.is_finite() || math::abs(x - seed) > 1.0 || x <= 0.0 {
        return Ok(seed);
    }
    Ok(x)
}

fn mcmahon_zero(m: u32, k: u32) -> f64 {
    let mu = 4.0 * (m as f64) * (m as f64);
    let beta = (k as f64 + 0.5 * m as f64 - 0.25) * core::f64::consts::PI;
    let b8 = 8.0 * beta;
    let b8_3 = b8 * b8 * b8;
    let b8_5 = b8_3 * b8 * b8;
    let z = beta
        - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8_3)
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8_5);
    // For large orders the low zeros are poorly served by McMahon; the
    // first zero always exceeds m.
    if z <= m as f64 {
        m as f64 + 1.8557571 * math::powf(m as f64, 1.0 / 3.0) + 1.0
    } else {
        z
    }
}

fn bessel_j_nonneg(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let order = m as f64;
    let half = 0.5 * x;
    if x <= 4.0 || half * half < 0.5 * (order + 1.0) {
        series(m, x)
    } else if x >= ASYMPTOTIC_MIN_X && x >= order * order {
        asymptotic(m, x)
    } else {
        miller(m, x)
    }
}

fn series(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=m {
        term *= half / i as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + m as f64));
        sum += term;
        if math::abs(term) <= 1e-17 * math::abs(sum) || k > 500.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

fn miller(m: u32, x: f64) -> f64 {
    let reach = if (m as f64) > x { m as f64 } else { x };
    let start = reach + 20.0 + math::sqrt(40.0 * reach);
    let mut top = math::ceil(start) as u32;
    if top % 2 == 1 {
        top += 1;
    }
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k, k = top
    let mut sum = 2.0 * cur; // top is even
    let mut result = if m == top { cur } else { 0.0 };
    let mut k = top;
    while k > 0 {
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if math::abs(cur) > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            next /= RESCALE_ABOVE;
            sum /= RESCALE_ABOVE;
            result /= RESCALE_ABOVE;
        }
        if k == m {
            result = cur;
        }
        if k.is_multiple_of(2) {
            sum += if k == 0 { cur } else { 2.0 * cur };
        }
    }
    result / sum
}

fn asymptotic(m: u32, x: f64) -> f64 {
    let mu = 4.0 * (m as f64) * (m as f64);
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60u32 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_x);
        let mag = math::abs(term);
        if mag > last {
            break;
        }
        last = mag;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-17 {
            break;
        }
    }
    // χ = x − (2m+1)π/4; expand cos/sin(x − φ) so x is never reduced by hand.
    let (cos_phi, sin_phi) = eighth_turn(2 * m + 1);
    let (sx, cx) = (math::sin(x), math::cos(x));
    let cos_chi = cx * cos_phi + sx * sin_phi;
    let sin_chi = sx * cos_phi - cx * sin_phi;
    math::sqrt(2.0 / (core::f64::consts::PI * x)) * (p * cos_chi - q * sin_chi)
}

/// `(cos, sin)` of `k·π/4`.
fn eighth_turn(k: u32) -> (f64, f64) {
    let r = core::f64::consts::FRAC_1_SQRT_2;
    match k % 8 {
        0 => (1.0, 0.0),
        1 => (r, r),
        2 => (0.0, 1.0),
        3 => (-r, r),
        4 => (-1.0, 0.0),
        5 => (-r, -r),
        6 => (0.0, -1.0),
        _ => (r, -r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power series with log-gamma coefficients; only trusted where
    /// cancellation is mild (x ≤ 6).
    fn series_oracle(m: u32, x: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..120u32 {
            let lg = math::ln_gamma(k as f64 + 1.0) + math::ln_gamma((k + m) as f64 + 1.0);
            let t = math::exp((2 * k + m) as f64 * math::ln(0.5 * x) - lg);
            sum += if k.is_multiple_of(2) { t } else { -t };
        }
        sum
    }

    #[test]
    fn trivial_values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn first_zero_of_j0() {
        // Root of the series oracle located by bisection.
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if series_oracle(0, lo) * series_oracle(0, mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((0.5 * (lo + hi) - 2.404825557695773).abs() < 1e-12);
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-10);
    }

    /// Reference values from a 40-digit evaluation (mpmath `besselj`).
    const REFERENCE: &[(u32, f64, f64)] = &[
        (0, 0.5, 0.9384698072408129),
        (0, 3.0, -0.26005195490193344),
        (0, 8.0, 0.17165080713755391),
        (0, 15.0, -0.014224472826780773),
        (0, 24.9, 0.08324596835301549),
        (0, 25.1, 0.10827567149994945),
        (0, 30.0, -0.086367983581040211),
        (0, 49.0, -0.052900033322273515),
        (0, 120.0, 0.071823415829156128),
        (0, 1000.5, 0.019486559987130137),
        (1, 0.5, 0.24226845767487389),
        (1, 3.0, 0.33905895852593646),
        (1, 8.0, 0.23463634685391462),
        (1, 15.0, 0.20510403861352276),
        (1, 24.9, -0.13485569953140887),
        (1, 25.1, -0.11463478413442257),
        (1, 30.0, -0.11875106261662294),
        (1, 49.0, -0.10150612803431056),
        (1, 120.0, -0.011805211433001891),
        (1, 1000.5, 0.016027715373203338),
        (2, 0.5, 0.030604023458682641),
        (2, 3.0, 0.48609126058589108),
        (2, 8.0, -0.11299172042407525),
        (2, 15.0, 0.041571677975250475),
        (2, 24.9, -0.094077751447907769),
        (2, 25.1, -0.11740991724771221),
        (2, 30.0, 0.078451246073265349),
        (2, 49.0, 0.048756926055566962),
        (2, 120.0, -0.072020169353039492),
        (2, 1000.5, -0.019454520576089251),
        (5, 0.5, 8.0536272413574741e-6),
        (5, 3.0, 0.043028434877047584),
        (5, 8.0, 0.18577477219056331),
        (5, 15.0, 0.13045613456502955),
        (5, 24.9, -0.080246762733942447),
        (5, 25.1, -0.051194170474627658),
        (5, 30.0, -0.14324029551207708),
        (5, 49.0, -0.11133775270237937),
        (5, 120.0, -0.0045718460339604955),
        (5, 1000.5, 0.016260280660072511),
        (10, 0.5, 2.6131773608228031e-13),
        (10, 3.0, 1.2928351645715884e-5),
        (10, 8.0, 0.060767026774251156),
        (10, 15.0, -0.090071811047659054),
        (10, 24.9, -0.088688801558025676),
        (10, 25.1, -0.061095034514211718),
        (10, 30.0, -0.12987689399858877),
        (10, 49.0, -0.059337894918979001),
        (10, 120.0, -0.070696213540718558),
        (10, 1000.5, -0.018662525369861662),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for &(m, x, expect) in REFERENCE {
            let v = bessel_j(m, x).unwrap();
            let tol = 1e-12 * expect.abs().max(1e-3);
            assert!((v - expect).abs() < tol, "m={m} x={x}: {v} vs {expect}");
        }
    }

    #[test]
    fn agrees_with_series_oracle_for_small_arguments() {
        for m in 0..=10u32 {
            let mut x = 0.05;
            while x <= 6.0 {
                let v = bessel_j(m, x).unwrap();
                let o = series_oracle(m, x);
                assert!((v - o).abs() < 1e-13, "m={m} x={x}: {v} vs {o}");
                x += 0.173;
            }
        }
    }

    #[test]
    fn miller_and_asymptotic_agree_at_switch() {
        for m in 0..=5u32 {
            for &x in &[25.0, 27.5, 31.0, 40.0, 49.9] {
                let a = asymptotic(m, x);
                let b = miller(m, x);
                assert!((a - b).abs() < 1e-14, "m={m} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn reflection_for_negative_order() {
        for m in 1..6 {
            let x = 3.7;
            let pos = bessel_j_signed(m, x).unwrap();
            let neg = bessel_j_signed(-m, x).unwrap();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(neg, sign * pos);
        }
    }

    #[test]
    fn non_finite_argument_is_rejected() {
        assert!(matches!(bessel_j(0, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(2, f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn zeros_are_roots() {
        for m in 0..6u32 {
            let mut prev = 0.0;
            for k in 1..30u32 {
                let z = bessel_j_zero(m, k).unwrap();
                assert!(z > prev);
                assert!(bessel_j(m, z).unwrap().abs() < 1e-13, "m={m} k={k}");
                prev = z;
            }
        }
    }
}
