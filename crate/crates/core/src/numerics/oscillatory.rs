//! `∫₀^∞ g(x) J_m(p x) dx` by panels between Bessel zeros plus Wynn's
//! epsilon algorithm (Shanks transform) on the partial sums.

use alloc::format;
use alloc::vec::Vec;

use super::{bessel_j, bessel_j_zero, integrate_adaptive, QuadratureResult};
use crate::math;
use crate::{Error, Result};

const MIN_PANELS: usize = 8;
const MAX_PANELS: usize = 400;

/// Semi-infinite Bessel-weighted integral.
///
/// Each panel between consecutive zeros of `J_m(p x)` is integrated
/// adaptively; the partial sums form an alternating sequence whose limit
/// is extrapolated with the epsilon algorithm. The answer is accepted when
/// two successive extrapolations agree within `tol`.
pub fn integrate_oscillatory_bessel<G: Fn(f64) -> f64>(
    g: G,
    m: u32,
    p: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Domain(format!("oscillatory integral: p = {p} must be > 0")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("oscillatory integral: tol = {tol} must be > 0")));
    }
    let integrand = |x: f64| g(x) * bessel_j(m, p * x).unwrap_or(f64::NAN);
    let panel_tol = 0.01 * tol;

    let mut partial = Vec::with_capacity(MAX_PANELS);
    let mut evaluations = 0usize;
    let mut sum = 0.0;
    let mut left = 0.0;
    let mut previous: Option<f64> = None;
    let mut best = 0.0;
    let mut best_err = f64::INFINITY;
    let mut agreed = 0;

    for k in 1..=MAX_PANELS as u32 {
        let right = bessel_j_zero(m, k)? / p;
        let piece = integrate_adaptive(integrand, left, right, panel_tol)?;
        evaluations += piece.evaluations;
        sum += piece.value;
        partial.push(sum);
        left = right;

        let estimate = wynn_epsilon(&partial);
        if let Some(prev) = previous {
            let diff = math::abs(estimate - prev);
            if diff < best_err {
                best_err = diff;
                best = estimate;
            }
            if partial.len() >= MIN_PANELS && diff <= tol {
                agreed += 1;
                if agreed >= 2 {
                    return Ok(QuadratureResult {
                        value: estimate,
                        error_estimate: diff,
                        evaluations,
                    });
                }
            } else {
                agreed = 0;
            }
        }
        previous = Some(estimate);
    }
    Err(Error::OscillatoryFailure {
        estimate: if best_err.is_finite() { best } else { sum },
    })
}

/// Highest even-column entry of the epsilon table built from `s`.
fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    if n < 3 {
        return s[n - 1];
    }
    // Columns eps_{-1} = 0, eps_0 = s; only the last two columns are kept.
    let mut prev: Vec<f64> = alloc::vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = s[n - 1];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 {
                // Sequence already converged at this column.
                return if col % 2 == 0 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col % 2 == 0 {
            let candidate = cur[cur.len() - 1];
            if candidate.is_finite() {
                best = candidate;
            }
        }
    }
    best
}
