//! Morse and Pöschl-Teller families.
//!
//! Each family is described by a base superpotential `W` with
//!
//! - shifted potential `W'² − W''` (ground state at zero energy),
//! - supersymmetric partner `W'² + W''`,
//! - generalized potential `W'² − W'' − 2 q'`, where
//!   `q = e^{−2W} / (Γ + ∫₀^ρ e^{−2W})` is the Γ-dependent term of the
//!   general Riccati solution `f = W' + q`.
//!
//! For Morse `W = aρ + λe^{−ρ}` with `a = λ − 1/2`; for Pöschl-Teller
//! `W = μ ln cosh ρ`.

use alloc::format;
use alloc::vec::Vec;

use crate::eigensolver::Grid;
use crate::math;
use crate::numerics::{gauss_kronrod_15, integrate_adaptive};
use crate::{Error, Result};

/// Parameters of the Morse family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    lambda: f64,
    gamma: f64,
}

impl MorseParams {
    /// Requires `λ > 1/2` and `Γ > 0`.
    pub fn new(lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.5) || !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be finite and > 1/2",
            });
        }
        check_gamma(gamma)?;
        Ok(Self { lambda, gamma })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `a = λ − 1/2`.
    pub fn a(&self) -> f64 {
        self.lambda - 0.5
    }
}

/// Parameters of the Pöschl-Teller family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtParams {
    mu: f64,
    gamma: f64,
}

impl PtParams {
    /// Requires `μ > 0` and `Γ > 0`.
    pub fn new(mu: f64, gamma: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: mu,
                reason: "must be finite and > 0",
            });
        }
        check_gamma(gamma)?;
        Ok(Self { mu, gamma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || gamma.is_nan() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "must be > 0",
        });
    }
    Ok(())
}

/// `λ²(1 − e^{−ρ})² − λ + 1/4`.
pub fn morse_shifted(p: &MorseParams, rho: f64) -> f64 {
    let l = p.lambda;
    let s = 1.0 - math::exp(-rho);
    l * l * s * s - l + 0.25
}

/// Supersymmetric partner of [`morse_shifted`].
pub fn morse_partner(p: &MorseParams, rho: f64) -> f64 {
    morse_shifted(p, rho) + 2.0 * p.lambda * math::exp(-rho)
}

/// `−μ(μ+1)/cosh²ρ + μ²`.
pub fn pt_shifted(p: &PtParams, rho: f64) -> f64 {
    let mu = p.mu;
    let c = math::cosh(rho);
    -mu * (mu + 1.0) / (c * c) + mu * mu
}

/// Supersymmetric partner of [`pt_shifted`].
pub fn pt_partner(p: &PtParams, rho: f64) -> f64 {
    let c = math::cosh(rho);
    pt_shifted(p, rho) + 2.0 * p.mu / (c * c)
}

/// A potential family generated by a base superpotential.
pub trait Family: Copy {
    /// Short label used in reports ("morse", "pt").
    const NAME: &'static str;

    fn gamma(&self) -> f64;

    /// Same base parameters with a different Γ.
    fn with_gamma(&self, gamma: f64) -> Result<Self>;

    /// `W'(ρ)`.
    fn w_prime(&self, rho: f64) -> f64;

    /// `W''(ρ)`.
    fn w_second(&self, rho: f64) -> f64;

    /// `−2 W(ρ)`, the logarithm of the q-term numerator.
    fn log_weight(&self, rho: f64) -> f64;

    /// Base potential with zero ground-state energy.
    fn shifted(&self, rho: f64) -> f64;

    /// Supersymmetric partner of [`Family::shifted`].
    fn partner(&self, rho: f64) -> f64;

    /// Asymptotic value of the potential (onset of the continuum).
    fn continuum_threshold(&self) -> f64;

    /// Exact bound-state energies of the shifted potential.
    fn analytic_levels(&self) -> Vec<f64>;

    /// Interval over which the denominator table is built.
    fn table_domain(&self) -> (f64, f64);
}

/// Half-width cap on denominator tables.
const TABLE_CAP: f64 = 60.0;
/// Nodes per unit ρ in denominator tables.
const TABLE_DENSITY: f64 = 256.0;
/// `−2W` below which the numerator underflows.
const LOG_UNDERFLOW: f64 = -745.0;

impl Family for MorseParams {
    const NAME: &'static str = "morse";

    fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.lambda, gamma)
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn w_prime(&self, rho: f64) -> f64 {
        self.lambda * (1.0 - math::exp(-rho)) - 0.5
    }

    fn w_second(&self, rho: f64) -> f64 {
        self.lambda * math::exp(-rho)
    }

    fn log_weight(&self, rho: f64) -> f64 {
        -(2.0 * self.lambda - 1.0) * rho - 2.0 * self.lambda * math::exp(-rho)
    }

    fn shifted(&self, rho: f64) -> f64 {
        morse_shifted(self, rho)
    }

    fn partner(&self, rho: f64) -> f64 {
        morse_partner(self, rho)
    }

    fn continuum_threshold(&self) -> f64 {
        self.a() * self.a()
    }

    fn analytic_levels(&self) -> Vec<f64> {
        let a = self.a();
        (0..)
            .map(|n| n as f64)
            .take_while(|&n| n < a)
            .map(|n| n * (2.0 * a - n))
            .collect()
    }

    fn table_domain(&self) -> (f64, f64) {
        // Left: 2λe^{−ρ} alone exceeds the underflow bound.
        let lo = math::ln(2.0 * self.lambda / -LOG_UNDERFLOW).max(-TABLE_CAP);
        let hi = (-LOG_UNDERFLOW / (2.0 * self.a())).min(TABLE_CAP);
        (lo.min(-1.0), hi.max(1.0))
    }
}

impl Family for PtParams {
    const NAME: &'static str = "pt";

    fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.mu, gamma)
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn w_prime(&self, rho: f64) -> f64 {
        self.mu * math::tanh(rho)
    }

    fn w_second(&self, rho: f64) -> f64 {
        let c = math::cosh(rho);
        self.mu / (c * c)
    }

    fn log_weight(&self, rho: f64) -> f64 {
        -2.0 * self.mu * math::ln_cosh(rho)
    }

    fn shifted(&self, rho: f64) -> f64 {
        pt_shifted(self, rho)
    }

    fn partner(&self, rho: f64) -> f64 {
        pt_partner(self, rho)
    }

    fn continuum_threshold(&self) -> f64 {
        self.mu * self.mu
    }

    fn analytic_levels(&self) -> Vec<f64> {
        let mu = self.mu;
        (0..)
            .map(|n| n as f64)
            .take_while(|&n| n < mu)
            .map(|n| n * (2.0 * mu - n))
            .collect()
    }

    fn table_domain(&self) -> (f64, f64) {
        let half = (-LOG_UNDERFLOW / (2.0 * self.mu) + 1.0).min(TABLE_CAP);
        (-half, half)
    }
}

/// Cumulative `D(ρ) = Γ + ∫₀^ρ e^{−2W}` on a uniform table.
#[derive(Debug, Clone)]
struct DenominatorTable {
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl DenominatorTable {
    fn build<F: Family>(family: &F, lo: f64, hi: f64) -> Result<Self> {
        let step = 1.0 / TABLE_DENSITY;
        let below = math::ceil(-lo * TABLE_DENSITY) as usize;
        let above = math::ceil(hi * TABLE_DENSITY) as usize;
        let lo = -(below as f64) * step;
        let weight = |r: f64| math::exp(family.log_weight(r));
        let mut values = alloc::vec![0.0; below + above + 1];
        values[below] = family.gamma();
        for i in below + 1..values.len() {
            let a = lo + (i - 1) as f64 * step;
            let (v, _) = gauss_kronrod_15(&weight, a, a + step)?;
            values[i] = values[i - 1] + v;
        }
        for i in (0..below).rev() {
            let a = lo + i as f64 * step;
            let (v, _) = gauss_kronrod_15(&weight, a, a + step)?;
            values[i] = values[i + 1] - v;
        }
        Ok(Self { lo, step, values })
    }

    fn hi(&self) -> f64 {
        self.lo + (self.values.len() - 1) as f64 * self.step
    }
}

/// Γ-deformed member of a family, with its denominator table cached.
///
/// Immutable after construction; all evaluations are read-only.
#[derive(Debug, Clone)]
pub struct Generalized<F: Family> {
    family: F,
    table: DenominatorTable,
    rho_min: Option<f64>,
}

pub type GeneralizedMorse = Generalized<MorseParams>;
pub type GeneralizedPt = Generalized<PtParams>;

impl<F: Family> Generalized<F> {
    pub fn new(family: F) -> Result<Self> {
        let (lo, hi) = family.table_domain();
        let table = DenominatorTable::build(&family, lo, hi)?;
        let mut gen = Self {
            family,
            table,
            rho_min: None,
        };
        gen.rho_min = gen.locate_rho_min();
        Ok(gen)
    }

    pub fn family(&self) -> &F {
        &self.family
    }

    /// Left edge of the region where the denominator stays positive, if
    /// the denominator vanishes inside the table domain.
    pub fn rho_min(&self) -> Option<f64> {
        self.rho_min
    }

    fn locate_rho_min(&self) -> Option<f64> {
        let t = &self.table;
        if t.values[0] > 0.0 {
            return None;
        }
        // D is increasing (D' = e^{−2W} > 0): bracket the last sign change.
        let i = t.values.iter().rposition(|&v| v <= 0.0)?;
        let (mut lo, mut hi) = (t.lo + i as f64 * t.step, t.lo + (i + 1) as f64 * t.step);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.denominator(mid).unwrap_or(-1.0) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// `e^{−2W(ρ)}`.
    pub fn numerator(&self, rho: f64) -> f64 {
        math::exp(self.family.log_weight(rho))
    }

    /// `Γ + ∫₀^ρ e^{−2W}`: cubic Hermite between table nodes (the
    /// derivative is the numerator itself), adaptive quadrature beyond.
    pub fn denominator(&self, rho: f64) -> Result<f64> {
        if !rho.is_finite() {
            return Err(Error::Domain(format!("rho = {rho} is not finite")));
        }
        let t = &self.table;
        let hi = t.hi();
        let weight = |r: f64| self.numerator(r);
        if rho < t.lo {
            let tail = integrate_adaptive(weight, rho, t.lo, 1e-15)?;
            return Ok(t.values[0] - tail.value);
        }
        if rho > hi {
            let tail = integrate_adaptive(weight, hi, rho, 1e-15)?;
            return Ok(t.values[t.values.len() - 1] + tail.value);
        }
        let pos = (rho - t.lo) / t.step;
        let i = (math::floor(pos) as usize).min(t.values.len() - 2);
        let s = pos - i as f64;
        let x0 = t.lo + i as f64 * t.step;
        let (d0, d1) = (t.values[i], t.values[i + 1]);
        let (m0, m1) = (weight(x0) * t.step, weight(x0 + t.step) * t.step);
        let s2 = s * s;
        let s3 = s2 * s;
        Ok((2.0 * s3 - 3.0 * s2 + 1.0) * d0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * d1
            + (s3 - s2) * m1)
    }

    /// The Γ-dependent term `q(ρ) = e^{−2W} / D(ρ)`.
    pub fn q(&self, rho: f64) -> Result<f64> {
        let d = self.denominator(rho)?;
        if !(d > 0.0) {
            return Err(Error::SingularConfiguration { rho, denominator: d });
        }
        Ok(self.numerator(rho) / d)
    }

    /// `q'(ρ) = −2W'(ρ) q − q²`.
    pub fn q_derivative(&self, rho: f64) -> Result<f64> {
        let q = self.q(rho)?;
        Ok(-2.0 * self.family.w_prime(rho) * q - q * q)
    }

    /// Generalized potential `shifted(ρ) − 2 q'(ρ)`.
    pub fn potential(&self, rho: f64) -> Result<f64> {
        Ok(self.family.shifted(rho) - 2.0 * self.q_derivative(rho)?)
    }

    /// General Riccati solution `f(ρ) = W'(ρ) + q(ρ)`.
    pub fn superpotential(&self, rho: f64) -> Result<f64> {
        Ok(self.family.w_prime(rho) + self.q(rho)?)
    }
}

/// Potential sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCurve {
    grid: Grid,
    values: Vec<f64>,
}

impl PotentialCurve {
    pub fn sample<V: Fn(f64) -> Result<f64>>(grid: Grid, potential: V) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for (i, rho) in grid.nodes().enumerate() {
            let v = potential(rho)?;
            if !v.is_finite() {
                return Err(Error::Discretization { node: i, rho, value: v });
            }
            values.push(v);
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `max |f' + f² − W'² − W''|` over the interior nodes of `grid`.
///
/// `f'` uses the fourth-order central difference with the grid spacing.
pub fn riccati_residual<F, Wp, Ws>(f: F, w_prime: Wp, w_second: Ws, grid: &Grid) -> Result<f64>
where
    F: Fn(f64) -> f64,
    Wp: Fn(f64) -> f64,
    Ws: Fn(f64) -> f64,
{
    if grid.len() < 3 {
        return Err(Error::Domain(format!(
            "riccati residual needs >= 3 nodes, got {}",
            grid.len()
        )));
    }
    let h = grid.spacing();
    let mut worst: f64 = 0.0;
    for rho in grid.nodes().skip(1).take(grid.len() - 2) {
        let df = (-f(rho + 2.0 * h) + 8.0 * f(rho + h) - 8.0 * f(rho - h) + f(rho - 2.0 * h))
            / (12.0 * h);
        let fv = f(rho);
        let wp = w_prime(rho);
        let r = df + fv * fv - wp * wp - w_second(rho);
        if !r.is_finite() {
            return Err(Error::Domain(format!("riccati residual is {r} at rho = {rho}")));
        }
        worst = worst.max(math::abs(r));
    }
    Ok(worst)
}
