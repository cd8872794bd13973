use alloc::format;

use crate::math;
use crate::{Error, Result};

const MAX_ITER: usize = 500;
const EPS: f64 = 1e-16;

/// Euler's gamma function for positive arguments.
pub fn gamma(s: f64) -> f64 {
    math::gamma(s)
}

/// Lower incomplete gamma function `γ(s, x) = ∫₀ˣ u^{s-1} e^{-u} du`.
pub fn lower_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    Ok(regularized_lower_gamma(s, x)? * math::gamma(s))
}

/// Regularized `P(s, x) = γ(s, x) / Γ(s)`.
///
/// Series below `x = s + 1`, Lentz continued fraction for the complement
/// above it.
pub fn regularized_lower_gamma(s: f64, x: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("incomplete gamma: shape s = {s} must be > 0")));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("incomplete gamma: x = {x} must be >= 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let log_prefactor = s * math::ln(x) - x - math::ln_gamma(s);
    if x < s + 1.0 {
        let mut ap = s;
        let mut del = 1.0 / s;
        let mut sum = del;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if math::abs(del) < math::abs(sum) * EPS {
                break;
            }
        }
        Ok((sum * math::exp(log_prefactor)).min(1.0))
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if math::abs(d) < tiny {
                d = tiny;
            }
            c = b + an / c;
            if math::abs(c) < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if math::abs(del - 1.0) < EPS {
                break;
            }
        }
        Ok((1.0 - math::exp(log_prefactor) * h).max(0.0))
    }
}
