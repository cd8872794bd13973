//! Changes of variable between the Morse radial picture, the
//! Pöschl-Teller sphere picture and the plane `(t, Φ)` on which the
//! Fourier transform acts.
//!
//! Two different variables are both called `t` in the literature: the
//! Morse-side `t_m = r²/2 = λe^{−ρ}` and the Pöschl-Teller-side
//! `t_pt = tan(σ/2) = e^{−ρ}`. They are kept apart here.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math;
use crate::{Error, Result};

/// An invertible, strictly monotone change of variable.
pub trait CoordinateMap {
    fn name(&self) -> &'static str;
    fn forward(&self, x: f64) -> f64;
    fn inverse(&self, y: f64) -> f64;
    /// Open interval on which `forward` is defined.
    fn domain(&self) -> (f64, f64);
    fn codomain(&self) -> (f64, f64);
}

/// `ρ ↦ r = √(2λ e^{−ρ})`.
#[derive(Debug, Clone, Copy)]
pub struct MorseRadius {
    pub lambda: f64,
}

impl CoordinateMap for MorseRadius {
    fn name(&self) -> &'static str {
        "rho->r"
    }
    fn forward(&self, rho: f64) -> f64 {
        math::sqrt(2.0 * self.lambda) * math::exp(-0.5 * rho)
    }
    fn inverse(&self, r: f64) -> f64 {
        math::ln(2.0 * self.lambda / (r * r))
    }
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn codomain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// `ρ ↦ θ` with `cos θ = tanh ρ`.
#[derive(Debug, Clone, Copy)]
pub struct PolarAngle;

impl CoordinateMap for PolarAngle {
    fn name(&self) -> &'static str {
        "rho->theta"
    }
    fn forward(&self, rho: f64) -> f64 {
        theta_from_rho(rho)
    }
    fn inverse(&self, theta: f64) -> f64 {
        -math::ln(math::tan(0.5 * theta))
    }
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn codomain(&self) -> (f64, f64) {
        (0.0, PI)
    }
}

/// `ρ ↦ ζ = sinh ρ`.
#[derive(Debug, Clone, Copy)]
pub struct Sinh;

impl CoordinateMap for Sinh {
    fn name(&self) -> &'static str {
        "rho->zeta"
    }
    fn forward(&self, rho: f64) -> f64 {
        math::sinh(rho)
    }
    fn inverse(&self, zeta: f64) -> f64 {
        libm::asinh(zeta)
    }
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn codomain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// `ζ ↦ σ = cot⁻¹ ζ`, principal branch in `(0, π)`.
#[derive(Debug, Clone, Copy)]
pub struct ArcCot;

impl CoordinateMap for ArcCot {
    fn name(&self) -> &'static str {
        "zeta->sigma"
    }
    fn forward(&self, zeta: f64) -> f64 {
        math::atan2(1.0, zeta)
    }
    fn inverse(&self, sigma: f64) -> f64 {
        math::cos(sigma) / math::sin(sigma)
    }
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn codomain(&self) -> (f64, f64) {
        (0.0, PI)
    }
}

/// `σ ↦ t = tan(σ/2)`.
#[derive(Debug, Clone, Copy)]
pub struct HalfTangent;

impl CoordinateMap for HalfTangent {
    fn name(&self) -> &'static str {
        "sigma->t_pt"
    }
    fn forward(&self, sigma: f64) -> f64 {
        math::tan(0.5 * sigma)
    }
    fn inverse(&self, t: f64) -> f64 {
        2.0 * math::atan(t)
    }
    fn domain(&self) -> (f64, f64) {
        (0.0, PI)
    }
    fn codomain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// `ρ ↦ t_pt = e^{−ρ}` (the composed chain).
#[derive(Debug, Clone, Copy)]
pub struct PtPlaneRadius;

impl CoordinateMap for PtPlaneRadius {
    fn name(&self) -> &'static str {
        "rho->t_pt"
    }
    fn forward(&self, rho: f64) -> f64 {
        chain_30(rho).t
    }
    fn inverse(&self, t: f64) -> f64 {
        rho_from_t_pt(t)
    }
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn codomain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// `ρ ↦ t_m = λ e^{−ρ}`.
#[derive(Debug, Clone, Copy)]
pub struct MorsePlaneRadius {
    pub lambda: f64,
}

impl CoordinateMap for MorsePlaneRadius {
    fn name(&self) -> &'static str {
        "rho->t_m"
    }
    fn forward(&self, rho: f64) -> f64 {
        t_morse_from_rho(self.lambda, rho)
    }
    fn inverse(&self, t: f64) -> f64 {
        rho_from_t_morse(self.lambda, t)
    }
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn codomain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// `r ↦ t = r²/2`.
#[derive(Debug, Clone, Copy)]
pub struct HalfSquare;

impl CoordinateMap for HalfSquare {
    fn name(&self) -> &'static str {
        "r->t_m"
    }
    fn forward(&self, r: f64) -> f64 {
        0.5 * r * r
    }
    fn inverse(&self, t: f64) -> f64 {
        math::sqrt(2.0 * t)
    }
    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn codomain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// `φ ↦ Φ = 2φ`.
#[derive(Debug, Clone, Copy)]
pub struct AngleDoubling;

impl CoordinateMap for AngleDoubling {
    fn name(&self) -> &'static str {
        "phi->Phi"
    }
    fn forward(&self, phi: f64) -> f64 {
        2.0 * phi
    }
    fn inverse(&self, big_phi: f64) -> f64 {
        0.5 * big_phi
    }
    fn domain(&self) -> (f64, f64) {
        (0.0, PI)
    }
    fn codomain(&self) -> (f64, f64) {
        (0.0, 2.0 * PI)
    }
}

/// Every map, with the λ-dependent ones bound to `lambda`.
pub fn all_maps(lambda: f64) -> Vec<Box<dyn CoordinateMap>> {
    vec![
        Box::new(MorseRadius { lambda }),
        Box::new(PolarAngle),
        Box::new(Sinh),
        Box::new(ArcCot),
        Box::new(HalfTangent),
        Box::new(PtPlaneRadius),
        Box::new(MorsePlaneRadius { lambda }),
        Box::new(HalfSquare),
        Box::new(AngleDoubling),
    ]
}

/// `ρ = ln(2λ / r²)`.
pub fn rho_from_r(lambda: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("rho_from_r: r = {r} must be > 0")));
    }
    check_lambda(lambda)?;
    Ok(MorseRadius { lambda }.inverse(r))
}

/// `r = √(2λ e^{−ρ})`.
pub fn r_from_rho(lambda: f64, rho: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(MorseRadius { lambda }.forward(rho))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.5) || !lambda.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "must be finite and > 1/2",
        });
    }
    Ok(())
}

/// Intermediate values of the `ρ → ζ → σ → t` substitution chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chain30 {
    pub zeta: f64,
    pub sigma: f64,
    pub t: f64,
}

/// `ζ = sinh ρ`, `σ = cot⁻¹ ζ ∈ (0, π)`, `t = tan(σ/2)`.
///
/// `t` is taken from the half-angle form `sin σ / (1 + cos σ)` with
/// `sin σ = 1/√(1+ζ²)` and `cos σ = ζ/√(1+ζ²)`, which avoids rounding
/// `σ` near `π`.
pub fn chain_30(rho: f64) -> Chain30 {
    let zeta = math::sinh(rho);
    let sigma = ArcCot.forward(zeta);
    let h = math::hypot(1.0, zeta);
    let t = if zeta >= 0.0 { 1.0 / (h + zeta) } else { h - zeta };
    Chain30 { zeta, sigma, t }
}

/// `θ = arccos(tanh ρ)`, evaluated as `2 arctan(e^{−ρ})`.
pub fn theta_from_rho(rho: f64) -> f64 {
    2.0 * math::atan(math::exp(-rho))
}

/// `(t, Φ) = (r²/2, 2φ)`.
pub fn t_phi_from_r_phi(r: f64, phi: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("t_phi_from_r_phi: r = {r} must be > 0")));
    }
    Ok((HalfSquare.forward(r), AngleDoubling.forward(phi)))
}

/// Morse-side plane radius `t_m = λ e^{−ρ}`.
pub fn t_morse_from_rho(lambda: f64, rho: f64) -> f64 {
    lambda * math::exp(-rho)
}

/// Inverse of [`t_morse_from_rho`].
pub fn rho_from_t_morse(lambda: f64, t: f64) -> f64 {
    math::ln(lambda / t)
}

/// Pöschl-Teller-side plane radius `t_pt = e^{−ρ}`.
pub fn t_pt_from_rho(rho: f64) -> f64 {
    chain_30(rho).t
}

/// Inverse of [`t_pt_from_rho`].
pub fn rho_from_t_pt(t: f64) -> f64 {
    -math::ln(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn samples(count: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        (0..count).map(|_| rng.gen_range(lo..hi)).collect()
    }

    proptest! {
        #[test]
        fn r_rho_inverse(lambda in 0.6f64..50.0, rho in -20.0f64..40.0) {
            let back = rho_from_r(lambda, r_from_rho(lambda, rho).unwrap()).unwrap();
            prop_assert!((back - rho).abs() <= 1e-12 * rho.abs().max(1.0));
        }

        #[test]
        fn plane_radii_differ_by_lambda(lambda in 0.6f64..50.0, rho in -5.0f64..30.0) {
            let ratio = t_morse_from_rho(lambda, rho) / t_pt_from_rho(rho);
            prop_assert!((ratio / lambda - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rho_from_r_examples() {
        assert_eq!(rho_from_r(2.0, 2.0).unwrap(), 0.0);
        let e = core::f64::consts::E;
        assert!((rho_from_r(e / 2.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(rho_from_r(2.0, 0.0).is_err());
        assert!(rho_from_r(2.0, -1.0).is_err());
    }

    #[test]
    fn r_round_trip() {
        let lambdas = samples(100, 0.6, 20.0, 7);
        let radii = samples(100, 0.01, 30.0, 11);
        for (&l, &r) in lambdas.iter().zip(&radii) {
            let back = r_from_rho(l, rho_from_r(l, r).unwrap()).unwrap();
            assert!(((back - r) / r).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_examples() {
        let c = chain_30(0.0);
        assert_eq!(c.zeta, 0.0);
        assert!((c.sigma - PI / 2.0).abs() < 1e-15);
        assert!((c.t - 1.0).abs() < 1e-15);
        assert!(chain_30(40.0).t < 1e-17);
    }

    #[test]
    fn chain_identity() {
        for rho in samples(100, -5.0, 5.0, 3) {
            let c = chain_30(rho);
            assert!((c.t - (-rho).exp()).abs() < 1e-12, "rho={rho}");
            // Literal tan(σ/2) agrees up to the rounding of σ.
            let literal = HalfTangent.forward(c.sigma);
            assert!(((literal - c.t) / c.t).abs() < 1e-12);
        }
    }

    #[test]
    fn theta_examples() {
        assert!((theta_from_rho(0.0) - PI / 2.0).abs() < 1e-15);
        assert!(theta_from_rho(40.0) < 1e-15);
        let r = (1.0 + 2.0_f64.sqrt()).ln();
        assert!((theta_from_rho(r) - PI / 4.0).abs() < 1e-15);
        for rho in samples(50, -6.0, 6.0, 5) {
            assert!((theta_from_rho(rho) - rho.tanh().acos()).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_coordinates() {
        let (t, big_phi) = t_phi_from_r_phi(2.0_f64.sqrt(), PI / 4.0).unwrap();
        assert!((t - 1.0).abs() < 1e-15);
        assert!((big_phi - PI / 2.0).abs() < 1e-15);
        assert!(t_phi_from_r_phi(1e-200, 0.0).unwrap().0 < 1e-300);
        assert!(t_phi_from_r_phi(0.0, 0.0).is_err());
        for rho in samples(50, -3.0, 8.0, 9) {
            let r = r_from_rho(4.5, rho).unwrap();
            let (t, _) = t_phi_from_r_phi(r, 0.0).unwrap();
            assert!(((t - t_morse_from_rho(4.5, rho)) / t).abs() < 1e-13);
        }
    }

    fn interior(lo: f64, hi: f64) -> (f64, f64) {
        let lo = if lo.is_finite() { lo + 1e-3 } else { -8.0 };
        let hi = if hi.is_finite() { hi - 1e-3 } else { 8.0 };
        (lo.max(-8.0).min(hi), hi.min(if lo > 0.0 { 30.0 } else { 8.0 }))
    }

    #[test]
    fn every_map_round_trips() {
        for map in all_maps(4.5) {
            let (lo, hi) = interior(map.domain().0, map.domain().1);
            for x in samples(100, lo, hi, 13) {
                let back = map.inverse(map.forward(x));
                assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0), "{}: {x} -> {back}", map.name());
            }
        }
    }

    #[test]
    fn every_map_is_strictly_monotone() {
        for map in all_maps(2.0) {
            let (lo, hi) = interior(map.domain().0, map.domain().1);
            let ys: Vec<f64> = (0..1000).map(|i| map.forward(lo + (hi - lo) * i as f64 / 999.0)).collect();
            let up = ys.windows(2).all(|w| w[1] > w[0]);
            let down = ys.windows(2).all(|w| w[1] < w[0]);
            assert!(up || down, "{} not monotone", map.name());
            let (clo, chi) = map.codomain();
            assert!(ys.iter().all(|&y| y > clo && y < chi), "{} leaves codomain", map.name());
        }
    }
}
