//! Adaptive Gauss-Kronrod quadrature (15-point panels, global bisection).

#![allow(clippy::excessive_precision)]

use alloc::collections::BinaryHeap;
use alloc::format;
use core::cmp::Ordering;

use crate::math;
use crate::{Error, Result};

/// Panels allowed before giving up.
const MAX_PANELS: usize = 2000;

/// Outcome of a definite integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate, always `>= 0`.
    pub error_estimate: f64,
    /// Integrand evaluations spent, always `>= 1`.
    pub evaluations: usize,
}

// Kronrod abscissae on [-1, 1] (non-negative half) and weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss 7-point weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
///
/// Returns `(value, error_estimate)` using the QUADPACK error heuristic.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    check_finite(fc, center)?;
    let mut res_k = WGK[7] * fc;
    let mut res_g = WG[3] * fc;
    let mut res_abs = math::abs(res_k);
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (f(x1), f(x2));
        check_finite(f1, x1)?;
        check_finite(f2, x2)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (math::abs(f1) + math::abs(f2));
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * math::abs(fc - mean);
    for j in 0..7 {
        res_asc += WGK[j] * (math::abs(fv1[j] - mean) + math::abs(fv2[j] - mean));
    }
    let scale = math::abs(half);
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut err = math::abs((res_k - res_g) * half);
    if res_asc != 0.0 && err != 0.0 {
        let r = math::powf(200.0 * err / res_asc, 1.5);
        err = res_asc * if r < 1.0 { r } else { 1.0 };
    }
    let round = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && err < round {
        err = round;
    }
    Ok((value, err))
}

fn check_finite(v: f64, x: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("integrand is {v} at x = {x}")))
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// `∫_a^b f` to absolute tolerance `tol`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate falls below `tol` (or below the rounding floor of the sum).
/// Running out of panels yields [`Error::QuadratureFailure`] carrying the
/// best estimate.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("integrate_adaptive: tol = {tol} must be > 0")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("integrate_adaptive: limits [{a}, {b}] must be finite")));
    }
    let (value, error) = gauss_kronrod_15(&f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });

    loop {
        // Summed afresh each round: incremental updates lose everything
        // when one early panel is huge and later ones cancel it.
        let (total, total_err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if total_err <= tol || total_err <= 50.0 * f64::EPSILON * math::abs(total) {
            return Ok(QuadratureResult {
                value: total,
                error_estimate: total_err.max(0.0),
                evaluations,
            });
        }
        let failure = Error::QuadratureFailure {
            estimate: total,
            error_estimate: total_err,
        };
        if heap.len() >= MAX_PANELS {
            return Err(failure);
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Panel can no longer be split in floating point.
            return Err(failure);
        }
        let (v1, e1) = gauss_kronrod_15(&f, worst.a, mid)?;
        let (v2, e2) = gauss_kronrod_15(&f, mid, worst.b)?;
        evaluations += 30;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
}
