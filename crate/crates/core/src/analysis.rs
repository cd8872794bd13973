//! Cross-family spectral comparisons.
//!
//! Levels are paired by index; 1-D bound spectra are simple, so no
//! matching heuristics are needed.

use alloc::vec::Vec;

use crate::eigensolver::{generalized_spectrum, Grid, Spectrum};
use crate::math;
use crate::potentials::{Family, Generalized};
use crate::Result;

/// Tolerance for comparing two independently solved spectra.
pub const DEFAULT_TOLERANCE: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPair {
    pub left: f64,
    pub right: f64,
    /// `left − right`.
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Different level counts after the optional ground-state skip.
    CountMismatch { left: usize, right: usize },
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub pairs: Vec<LevelPair>,
    pub max_delta: f64,
    pub skipped_ground: bool,
    pub tolerance: f64,
    pub verdict: Verdict,
}

fn compare(left: &[f64], right: &[f64], skipped_ground: bool, tolerance: f64) -> SpectralReport {
    let pairs: Vec<LevelPair> = left
        .iter()
        .zip(right)
        .map(|(&l, &r)| LevelPair {
            left: l,
            right: r,
            delta: l - r,
        })
        .collect();
    let max_delta = pairs.iter().fold(0.0_f64, |a, p| a.max(math::abs(p.delta)));
    let verdict = if left.len() != right.len() {
        Verdict::CountMismatch {
            left: left.len(),
            right: right.len(),
        }
    } else if max_delta <= tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    SpectralReport {
        pairs,
        max_delta,
        skipped_ground,
        tolerance,
        verdict,
    }
}

/// Pairs the levels of `a` (without its ground state if asked) with `b`.
pub fn isospectral_check(a: &Spectrum, b: &Spectrum, skip_ground_of_a: bool, tolerance: f64) -> SpectralReport {
    let left = if skip_ground_of_a && !a.eigenvalues.is_empty() {
        &a.eigenvalues[1..]
    } else {
        &a.eigenvalues[..]
    };
    compare(left, &b.eigenvalues, skip_ground_of_a, tolerance)
}

/// `λ − μ − 1/2`, the energy offset between the two families.
pub fn energy_shift(lambda: f64, mu: f64) -> f64 {
    lambda - mu - 0.5
}

/// Pairs `E_M,n + (λ − μ − 1/2)` with `E_PT,n`.
pub fn energy_shift_check(e_m: &Spectrum, e_pt: &Spectrum, lambda: f64, mu: f64, tolerance: f64) -> SpectralReport {
    let shift = energy_shift(lambda, mu);
    let left: Vec<f64> = e_m.eigenvalues.iter().map(|e| e + shift).collect();
    compare(&left, &e_pt.eigenvalues, false, tolerance)
}

/// Generalized spectrum at one Γ.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub gamma: f64,
    pub rho_min: Option<f64>,
    pub spectrum: Spectrum,
}

/// Generalized spectra of `family` for each Γ, in input order.
///
/// `grid` builds the grid from `ρ_min` (if any).
pub fn gamma_sweep<F, G>(family: F, gammas: &[f64], grid: G) -> Result<Vec<SweepPoint>>
where
    F: Family,
    G: Fn(Option<f64>) -> Grid,
{
    gammas.iter().map(|&g| sweep_point(family, g, &grid)).collect()
}

/// One entry of [`gamma_sweep`].
pub fn sweep_point<F, G>(family: F, gamma: f64, grid: &G) -> Result<SweepPoint>
where
    F: Family,
    G: Fn(Option<f64>) -> Grid,
{
    let gen = Generalized::new(family.with_gamma(gamma)?)?;
    let rho_min = gen.rho_min();
    let spectrum = generalized_spectrum(&gen, grid(rho_min))?;
    Ok(SweepPoint {
        gamma,
        rho_min,
        spectrum,
    })
}

/// Largest pairwise deviation across the sweep, each point against the
/// first.
pub fn sweep_spread(points: &[SweepPoint], tolerance: f64) -> Option<SpectralReport> {
    let first = points.first()?;
    let mut worst: Option<SpectralReport> = None;
    for p in &points[1..] {
        let r = isospectral_check(&first.spectrum, &p.spectrum, false, tolerance);
        let replace = match &worst {
            None => true,
            Some(w) => !r.verdict.passed() && w.verdict.passed() || r.max_delta > w.max_delta,
        };
        if replace {
            worst = Some(r);
        }
    }
    worst.or_else(|| Some(isospectral_check(&first.spectrum, &first.spectrum, false, tolerance)))
}
