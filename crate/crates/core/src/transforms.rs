//! Fourier-Bessel machinery linking the Morse radial problem to the
//! Pöschl-Teller problem on the plane `(t′, Φ′)`.
//!
//! Hankel integrals of decaying samples are brute-force trapezoid sums on
//! a dense uniform `t` grid. Non-decaying integrands go through
//! [`integrate_oscillatory_bessel`] instead.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::coordinates::{rho_from_t_morse, rho_from_t_pt, t_morse_from_rho, t_pt_from_rho};
use crate::eigensolver::{trapezoid, SampledFunction};
use crate::math;
use crate::numerics::{bessel_j, integrate_oscillatory_bessel};
use crate::potentials::{GeneralizedMorse, GeneralizedPt, MorseParams, PtParams};
use crate::{Error, Result};

pub const DEFAULT_T_MAX: f64 = 40.0;
pub const DEFAULT_PLAN_NODES: usize = 16384;
/// `|g(t_max)·t_max|` above this raises the truncation warning.
pub const TRUNCATION_TOLERANCE: f64 = 1e-8;

/// Uniform trapezoid rule on `(0, t_max]` for `∫₀^{t_max} t g(t) J_m(t t′) dt`.
///
/// The node at `t = 0` is dropped: the `t` factor kills it.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelPlan {
    order: u32,
    t_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl HankelPlan {
    pub fn new(order: u32, t_max: f64, n: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t_max",
                value: t_max,
                reason: "must be finite and > 0",
            });
        }
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "nodes",
                value: n as f64,
                reason: "need at least 2 nodes",
            });
        }
        let dt = t_max / n as f64;
        let nodes: Vec<f64> = (1..=n).map(|i| if i == n { t_max } else { i as f64 * dt }).collect();
        let mut weights = alloc::vec![dt; n];
        weights[n - 1] = 0.5 * dt;
        Ok(Self {
            order,
            t_max,
            nodes,
            weights,
        })
    }

    pub fn with_defaults(order: u32) -> Self {
        Self::new(order, DEFAULT_T_MAX, DEFAULT_PLAN_NODES).expect("default plan is valid")
    }

    /// Same nodes, different Bessel order.
    pub fn with_order(&self, order: u32) -> Self {
        Self { order, ..self.clone() }
    }

    /// Same `t_max` with twice as many nodes.
    pub fn refined(&self) -> Self {
        Self::new(self.order, self.t_max, 2 * self.nodes.len()).expect("refinement of a valid plan")
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Samples `g` on the plan nodes.
    pub fn tabulate<G: Fn(f64) -> f64>(&self, g: G) -> Result<SampledFunction> {
        SampledFunction::tabulate(self.nodes.clone(), g)
    }

    fn check(&self, g: &SampledFunction) -> Result<()> {
        if g.nodes() != self.nodes.as_slice() {
            return Err(Error::Domain(format!(
                "hankel: function has {} nodes, not the plan's {} nodes",
                g.len(),
                self.nodes.len()
            )));
        }
        Ok(())
    }

    /// `w_i t_i g_i`, the part of each term that does not depend on `t′`.
    fn weighted(&self, g: &SampledFunction) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(g.values())
            .map(|((t, w), v)| t * w * v)
            .collect()
    }

    fn sum(&self, weighted: &[f64], t_prime: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (t, c) in self.nodes.iter().zip(weighted) {
            if *c != 0.0 {
                acc += c * bessel_j(self.order, t * t_prime)?;
            }
        }
        Ok(acc)
    }
}

/// Hankel integral with the truncation diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelValue {
    pub value: f64,
    pub truncation_warning: bool,
}

fn truncated(g: &SampledFunction, t_max: f64) -> bool {
    let last = g.values().last().copied().unwrap_or(0.0);
    math::abs(last * t_max) > TRUNCATION_TOLERANCE
}

/// `∫₀^{t_max} t g(t) J_m(t t′) dt` with `g` sampled on the plan nodes.
pub fn hankel(g: &SampledFunction, plan: &HankelPlan, t_prime: f64) -> Result<HankelValue> {
    plan.check(g)?;
    check_t_prime(t_prime)?;
    let value = plan.sum(&plan.weighted(g), t_prime)?;
    Ok(HankelValue {
        value,
        truncation_warning: truncated(g, plan.t_max),
    })
}

/// [`hankel`] at many `t′`, sharing the weighted samples.
pub fn hankel_many(g: &SampledFunction, plan: &HankelPlan, t_primes: &[f64]) -> Result<(Vec<f64>, bool)> {
    plan.check(g)?;
    let weighted = plan.weighted(g);
    let mut out = Vec::with_capacity(t_primes.len());
    for &tp in t_primes {
        check_t_prime(tp)?;
        out.push(plan.sum(&weighted, tp)?);
    }
    Ok((out, truncated(g, plan.t_max)))
}

fn check_t_prime(t_prime: f64) -> Result<()> {
    if !(t_prime >= 0.0) || !t_prime.is_finite() {
        return Err(Error::Domain(format!("hankel: t' = {t_prime} must be finite and >= 0")));
    }
    Ok(())
}

/// `∫₀^∞ t g(t) J_m(t t′) dt` for an analytic `g` whose tail need not decay,
/// by zero-to-zero panels and extrapolation.
pub fn hankel_oscillatory<G: Fn(f64) -> f64>(g: G, m: u32, t_prime: f64, tol: f64) -> Result<f64> {
    Ok(integrate_oscillatory_bessel(|t| t * g(t), m, t_prime, tol)?.value)
}

/// `∫₀^∞ J_ν(p x) dx`, which should equal `1/p`.
pub fn bessel_integral(nu: u32, p: f64, tol: f64) -> Result<f64> {
    Ok(integrate_oscillatory_bessel(|_| 1.0, nu, p, tol)?.value)
}

/// A power of `i`, stored as `k` with the value `i^k`, `k ∈ {0,1,2,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuarterTurns(u8);

impl QuarterTurns {
    pub fn new(k: i64) -> Self {
        Self(k.rem_euclid(4) as u8)
    }

    /// `(−i)^m = i^{−m}`.
    pub fn minus_i_pow(m: i64) -> Self {
        Self::new(-m)
    }

    pub fn count(self) -> u8 {
        self.0
    }

    pub fn compose(self, other: Self) -> Self {
        Self::new(self.0 as i64 + other.0 as i64)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

/// `∮₀^{2π} exp(−i x cos(Φ − Φ′) + i m Φ) dΦ` by the periodic trapezoid rule.
///
/// The point count exceeds the bandwidth of the integrand (`|m| + x`) with
/// margin, so the rule is exact to rounding.
pub fn angular_phase_integral(x: f64, m: i32, phi_prime: f64) -> Result<Complex64> {
    if !x.is_finite() || !phi_prime.is_finite() {
        return Err(Error::Domain(format!(
            "angular integral: x = {x}, phi' = {phi_prime} must be finite"
        )));
    }
    let n = 2 * (math::ceil(math::abs(x)) as usize + m.unsigned_abs() as usize) + 64;
    let step = 2.0 * PI / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let phi = k as f64 * step;
        let arg = -x * math::cos(phi - phi_prime) + m as f64 * phi;
        acc += Complex64::new(math::cos(arg), math::sin(arg));
    }
    Ok(acc * step)
}

/// `2π (−i)^m e^{imΦ′} J_m(x)`, the closed form of [`angular_phase_integral`].
pub fn angular_phase_closed_form(x: f64, m: i32, phi_prime: f64) -> Result<Complex64> {
    let j = crate::numerics::bessel_j_signed(m, x)?;
    let rot = Complex64::new(math::cos(m as f64 * phi_prime), math::sin(m as f64 * phi_prime));
    Ok(QuarterTurns::minus_i_pow(m as i64).to_complex() * rot * (2.0 * PI * j))
}

/// Bessel order paired with Morse level `n`: `m = a − n`, `a = λ − 1/2`.
///
/// Only integer `a` and `n < a` give an integer `m ≥ 1`.
pub fn state_order(lambda: f64, n: usize) -> Result<u32> {
    let a = lambda - 0.5;
    if !(a > 0.0) || math::abs(a - math::floor(a + 0.5)) > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "lambda - 1/2 must be a positive integer",
        });
    }
    let a = math::floor(a + 0.5) as usize;
    if n >= a {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n as f64,
            reason: "level index must be below lambda - 1/2",
        });
    }
    Ok((a - n) as u32)
}

/// Morse eigenfunction `ψ(ρ)` read off at the plan nodes via `ρ = ln(λ/t)`.
///
/// Nodes whose `ρ` falls outside the sampled range get zero.
pub fn morse_radial_on_plan(psi: &SampledFunction, lambda: f64, plan: &HankelPlan) -> Result<SampledFunction> {
    plan.tabulate(|t| psi.interpolate(rho_from_t_morse(lambda, t)).unwrap_or(0.0))
}

/// Output of [`wavefunction_map`]: `U(t′)` with the phase `(−i)^m` factored out.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedWavefunction {
    pub values: SampledFunction,
    pub phase: QuarterTurns,
    pub truncation_warning: bool,
}

/// `U(t′) = 2π (−i)^m (1 + t′²)^{3/2} ∫₀^∞ t R(t) J_m(t t′) dt`.
///
/// `r` must be sampled on the plan nodes; the plan's order is replaced
/// by `m`.
pub fn wavefunction_map(
    r: &SampledFunction,
    m: u32,
    plan: &HankelPlan,
    t_prime_nodes: Vec<f64>,
) -> Result<MappedWavefunction> {
    let plan = plan.with_order(m);
    let (h, truncation_warning) = hankel_many(r, &plan, &t_prime_nodes)?;
    let values = t_prime_nodes
        .iter()
        .zip(h)
        .map(|(tp, v)| 2.0 * PI * math::powf(1.0 + tp * tp, 1.5) * v)
        .collect();
    Ok(MappedWavefunction {
        values: SampledFunction::new(t_prime_nodes, values)?,
        phase: QuarterTurns::minus_i_pow(m as i64),
        truncation_warning,
    })
}

/// Comparison of two shapes on a common `ρ′` window.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeComparison {
    pub rho: Vec<f64>,
    /// Unit-norm mapped function.
    pub mapped: Vec<f64>,
    /// Unit-norm reference, multiplied by `sign`.
    pub reference: Vec<f64>,
    pub sign: f64,
    /// `‖mapped − sign·reference‖` in the `ρ′` measure.
    pub discrepancy: f64,
}

/// Normalizes both functions over `rho_window`, aligns signs, and returns
/// the L² distance.
pub fn compare_shapes<A, B>(mapped: A, reference: B, rho_window: &[f64]) -> Result<ShapeComparison>
where
    A: Fn(f64) -> Option<f64>,
    B: Fn(f64) -> Option<f64>,
{
    let sample = |f: &dyn Fn(f64) -> Option<f64>| -> Result<Vec<f64>> {
        rho_window
            .iter()
            .map(|&r| f(r).ok_or_else(|| Error::Domain(format!("comparison: rho' = {r} outside the sampled range"))))
            .collect()
    };
    let mut u = sample(&mapped)?;
    let mut v = sample(&reference)?;
    for w in [&mut u, &mut v] {
        let norm = math::sqrt(trapezoid(rho_window, |i| w[i] * w[i]));
        if !(norm > 0.0) {
            return Err(Error::Domain("comparison: function vanishes on the window".into()));
        }
        w.iter_mut().for_each(|x| *x /= norm);
    }
    let overlap = trapezoid(rho_window, |i| u[i] * v[i]);
    let sign = if overlap < 0.0 { -1.0 } else { 1.0 };
    v.iter_mut().for_each(|x| *x *= sign);
    let discrepancy = math::sqrt(trapezoid(rho_window, |i| (u[i] - v[i]) * (u[i] - v[i])));
    Ok(ShapeComparison {
        rho: rho_window.to_vec(),
        mapped: u,
        reference: v,
        sign,
        discrepancy,
    })
}

/// Result of mapping one Morse state and comparing it with a PT state.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionConnection {
    pub order: u32,
    pub comparison: ShapeComparison,
    pub phase: QuarterTurns,
    pub truncation_warning: bool,
}

/// Maps the Morse state `morse_psi(ρ)` through [`wavefunction_map`] and
/// compares it with `pt_psi(ρ′)` at `t′ = e^{−ρ′}`.
pub fn wavefunction_connection(
    morse_psi: &SampledFunction,
    pt_psi: &SampledFunction,
    lambda: f64,
    m: u32,
    plan: &HankelPlan,
    rho_window: &[f64],
) -> Result<WavefunctionConnection> {
    let r = morse_radial_on_plan(morse_psi, lambda, plan)?;
    let mut t_prime: Vec<f64> = rho_window.iter().map(|&r| t_pt_from_rho(r)).collect();
    t_prime.reverse();
    let mapped = wavefunction_map(&r, m, plan, t_prime)?;
    let n = rho_window.len();
    let values = mapped.values.values();
    let lookup = |rho: f64| rho_window.iter().position(|&x| x == rho).map(|i| values[n - 1 - i]);
    let comparison = compare_shapes(lookup, |rho| pt_psi.interpolate(rho), rho_window)?;
    Ok(WavefunctionConnection {
        order: m,
        comparison,
        phase: mapped.phase,
        truncation_warning: mapped.truncation_warning,
    })
}

fn check_pairing(morse: &MorseParams, pt: &PtParams) -> Result<()> {
    if math::abs(pt.mu() - (morse.lambda() - 0.5)) > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: pt.mu(),
            reason: "must equal lambda - 1/2",
        });
    }
    if pt.gamma() != morse.gamma() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: pt.gamma(),
            reason: "both families must share gamma",
        });
    }
    Ok(())
}

/// `∂_t q^{(M)}` with `t = λe^{−ρ}`: `−q′(ρ)/t`.
fn morse_q_dt(gen: &GeneralizedMorse, lambda: f64, t: f64) -> Result<f64> {
    Ok(-gen.q_derivative(rho_from_t_morse(lambda, t))? / t)
}

/// `∂_{t′} q^{(PT)}` with `t′ = e^{−ρ}`: `−q′(ρ)/t′`.
fn pt_q_dt(gen: &GeneralizedPt, t: f64) -> Result<f64> {
    Ok(-gen.q_derivative(rho_from_t_pt(t))? / t)
}

/// Max residual at one plan resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementStep {
    pub nodes: usize,
    pub max_residual: f64,
}

/// Pointwise comparison of the transformed q-terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTermReport {
    pub order: u32,
    pub t_prime: Vec<f64>,
    /// `Hankel_m[(1/t)∂_t q^{(M)}](t′)` on the finer plan.
    pub lhs: Vec<f64>,
    /// `(1/t′)∂_{t′} q^{(PT)}(t′)`.
    pub rhs: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Base plan, then the plan with twice the nodes.
    pub refinement: [RefinementStep; 2],
    /// `max |lhs_fine − lhs_coarse|`.
    pub lhs_change: f64,
    pub truncation_warning: bool,
}

/// Unsandwiched q-term relation at each `t′`.
///
/// Requires `μ = λ − 1/2` and a shared Γ.
pub fn potential_term_map(
    morse: MorseParams,
    pt: PtParams,
    m: u32,
    plan: &HankelPlan,
    t_prime_nodes: &[f64],
) -> Result<PotentialTermReport> {
    check_pairing(&morse, &pt)?;
    let gm = GeneralizedMorse::new(morse)?;
    let gp = GeneralizedPt::new(pt)?;
    let lambda = morse.lambda();

    let rhs = t_prime_nodes
        .iter()
        .map(|&tp| Ok(pt_q_dt(&gp, tp)? / tp))
        .collect::<Result<Vec<f64>>>()?;

    let transform = |plan: &HankelPlan| -> Result<(Vec<f64>, bool)> {
        let plan = plan.with_order(m);
        let dq = plan.nodes().iter().map(|&t| morse_q_dt(&gm, lambda, t)).collect::<Result<Vec<f64>>>()?;
        // Hankel_m[g] with g = (1/t)∂_t q.
        let g = SampledFunction::new(
            plan.nodes().to_vec(),
            plan.nodes().iter().zip(&dq).map(|(t, d)| d / t).collect(),
        )?;
        hankel_many(&g, &plan, t_prime_nodes)
    };
    let (coarse, warn_coarse) = transform(plan)?;
    let fine_plan = plan.refined();
    let (lhs, warn_fine) = transform(&fine_plan)?;

    let max_of = |l: &[f64]| l.iter().zip(&rhs).fold(0.0_f64, |a, (x, y)| a.max(math::abs(x - y)));
    let residuals: Vec<f64> = lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect();
    let lhs_change = lhs.iter().zip(&coarse).fold(0.0_f64, |a, (x, y)| a.max(math::abs(x - y)));
    Ok(PotentialTermReport {
        order: m,
        t_prime: t_prime_nodes.to_vec(),
        max_residual: max_of(&lhs),
        refinement: [
            RefinementStep {
                nodes: plan.len(),
                max_residual: max_of(&coarse),
            },
            RefinementStep {
                nodes: fine_plan.len(),
                max_residual: max_of(&lhs),
            },
        ],
        lhs,
        rhs,
        residuals,
        lhs_change,
        truncation_warning: warn_coarse || warn_fine,
    })
}

/// The q-term relation integrated against one bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichedTerm {
    pub order: u32,
    /// `∫ t R(t) Hankel_m[(1/t′)∂_{t′} q^{(M)}](t) dt`.
    pub lhs: f64,
    /// `∫ R(t) ∂_t q^{(PT)}(t) dt`.
    pub rhs: f64,
    /// `|lhs − rhs| / |rhs|`.
    pub relative_error: f64,
}

/// Sandwiched q-term relation for the Morse state `psi(ρ)` with order `m`.
///
/// Both integrals run over the state's `ρ` grid through `t = λe^{−ρ}`,
/// `dt = −t dρ`. Nodes where the state is negligible are skipped.
pub fn sandwiched_potential_term(
    morse: MorseParams,
    pt: PtParams,
    psi: &SampledFunction,
    m: u32,
    plan: &HankelPlan,
) -> Result<SandwichedTerm> {
    check_pairing(&morse, &pt)?;
    let gm = GeneralizedMorse::new(morse)?;
    let gp = GeneralizedPt::new(pt)?;
    let lambda = morse.lambda();
    let plan = plan.with_order(m);

    // Hankel_m[(1/t′)∂q](t) = ∫ ∂_{t′}q(t′) J_m(t t′) dt′.
    let g = plan.tabulate(|t| morse_q_dt(&gm, lambda, t).map(|d| d / t).unwrap_or(f64::NAN))?;
    let weighted = plan.weighted(&g);

    let peak = psi.max_abs();
    let rho = psi.nodes();
    let mut inner = Vec::with_capacity(rho.len());
    let mut direct = Vec::with_capacity(rho.len());
    for (&r, &v) in rho.iter().zip(psi.values()) {
        if math::abs(v) <= 1e-14 * peak {
            inner.push(0.0);
            direct.push(0.0);
            continue;
        }
        let t = t_morse_from_rho(lambda, r);
        let h = if t <= plan.t_max() { plan.sum(&weighted, t)? } else { 0.0 };
        inner.push(t * v * h * t);
        direct.push(v * pt_q_dt(&gp, t)? * t);
    }
    let lhs = trapezoid(rho, |i| inner[i]);
    let rhs = trapezoid(rho, |i| direct[i]);
    Ok(SandwichedTerm {
        order: m,
        lhs,
        rhs,
        relative_error: math::abs(lhs - rhs) / math::abs(rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{shifted_spectrum, Grid};

    // The endpoint error at t′ = 0 is dt²/12 since (t g)′(0) = 1.
    fn gaussian_plan() -> HankelPlan {
        HankelPlan::with_defaults(0)
    }

    #[test]
    fn plan_invariants() {
        let p = HankelPlan::new(2, 10.0, 100).unwrap();
        assert!(p.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(p.nodes()[0] > 0.0 && *p.nodes().last().unwrap() == 10.0);
        assert!(p.weights().iter().all(|w| *w > 0.0));
        assert!((p.weights().iter().sum::<f64>() - 9.95).abs() < 1e-12);
        assert!(HankelPlan::new(0, 0.0, 10).is_err());
        assert!(HankelPlan::new(0, 1.0, 1).is_err());
    }

    #[test]
    fn gaussian_is_self_reciprocal() {
        let plan = gaussian_plan();
        let g = plan.tabulate(|t| (-0.5 * t * t).exp()).unwrap();
        for i in 0..=50 {
            let tp = 0.1 * i as f64;
            let h = hankel(&g, &plan, tp).unwrap();
            assert!(!h.truncation_warning);
            assert!((h.value - (-0.5 * tp * tp).exp()).abs() < 1e-6, "t'={tp}");
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let plan = gaussian_plan();
        let g = plan.tabulate(|_| 0.0).unwrap();
        assert_eq!(hankel(&g, &plan, 1.3).unwrap().value, 0.0);
        let u = wavefunction_map(&g, 3, &plan, alloc::vec![0.5, 1.0, 2.0]).unwrap();
        assert!(u.values.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn slow_tail_raises_warning() {
        let plan = HankelPlan::new(0, 10.0, 1000).unwrap();
        let g = plan.tabulate(|t| 1.0 / (1.0 + t)).unwrap();
        assert!(hankel(&g, &plan, 1.0).unwrap().truncation_warning);
    }

    #[test]
    fn mismatched_nodes_rejected() {
        let plan = HankelPlan::new(0, 10.0, 100).unwrap();
        let other = HankelPlan::new(0, 10.0, 101).unwrap();
        let g = other.tabulate(|t| (-t).exp()).unwrap();
        assert!(hankel(&g, &plan, 1.0).is_err());
    }

    #[test]
    fn reciprocal_via_oscillatory_path() {
        for tp in [0.5, 1.0, 2.0, 5.0] {
            let v = hankel_oscillatory(|t| 1.0 / t, 0, tp, 1e-10).unwrap();
            assert!((v * tp - 1.0).abs() < 1e-6, "t'={tp}: {v}");
        }
    }

    #[test]
    fn bessel_integral_identity() {
        for nu in 0..=2 {
            for p in [0.5, 1.0, 2.0, 5.0] {
                let v = bessel_integral(nu, p, 1e-10).unwrap();
                assert!((p * v - 1.0).abs() < 1e-6, "nu={nu} p={p}: {v}");
            }
        }
    }

    fn parseval(g: impl Fn(f64) -> f64, t_max: f64, tp_max: f64) {
        let plan = HankelPlan::new(0, t_max, 4096).unwrap();
        let f = plan.tabulate(&g).unwrap();
        let out = HankelPlan::new(0, tp_max, 4096).unwrap();
        let (h, _) = hankel_many(&f, &plan, out.nodes()).unwrap();
        let left: f64 = plan.nodes().iter().zip(plan.weights()).zip(f.values()).map(|((t, w), v)| w * t * v * v).sum();
        let right: f64 = out.nodes().iter().zip(out.weights()).zip(&h).map(|((t, w), v)| w * t * v * v).sum();
        assert!(((left - right) / left).abs() < 1e-5, "{left} vs {right}");
    }

    #[test]
    fn parseval_gaussian() {
        parseval(|t| (-0.5 * t * t).exp(), 12.0, 12.0);
    }

    #[test]
    fn parseval_compact_support() {
        parseval(|t| if t < 1.0 { (1.0 - t * t).powi(8) } else { 0.0 }, 1.0, 60.0);
    }

    #[test]
    fn wavefunction_map_gaussian_norm() {
        // Dividing out 2π(1+t′²)^{3/2} leaves the order-0 transform,
        // which preserves the t-weighted norm.
        let plan = HankelPlan::new(0, 12.0, 4096).unwrap();
        let r = plan.tabulate(|t| (-0.5 * t * t).exp()).unwrap();
        let out = HankelPlan::new(0, 12.0, 4096).unwrap();
        let u = wavefunction_map(&r, 0, &plan, out.nodes().to_vec()).unwrap();
        assert_eq!(u.phase, QuarterTurns::new(0));
        let norm_in: f64 = plan.nodes().iter().zip(plan.weights()).zip(r.values()).map(|((t, w), v)| w * t * v * v).sum();
        let norm_out: f64 = out
            .nodes()
            .iter()
            .zip(out.weights())
            .zip(u.values.values())
            .map(|((t, w), v)| {
                let h = v / (2.0 * PI * (1.0 + t * t).powf(1.5));
                w * t * h * h
            })
            .sum();
        assert!(((norm_in - norm_out) / norm_in).abs() < 1e-5);
    }

    #[test]
    fn angular_examples() {
        let z = angular_phase_integral(0.0, 0, 0.7).unwrap();
        assert!((z.re - 2.0 * PI).abs() < 1e-12 && z.im.abs() < 1e-12);
        let z = angular_phase_integral(0.0, 1, 2.1).unwrap();
        assert!(z.norm() < 1e-12);
        let z = angular_phase_integral(1.0, 1, 0.0).unwrap();
        // J₁(1) = 0.44005058574493351596 (series oracle).
        assert!(z.re.abs() < 1e-12);
        assert!((z.im + 2.0 * PI * 0.440_050_585_744_933_5).abs() < 1e-12);
    }

    #[test]
    fn angular_matches_closed_form() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        for _ in 0..16 {
            let phi_p = rng.gen_range(0.0..2.0 * PI);
            for m in -8..=8 {
                for k in 0..=40 {
                    let x = 0.5 * k as f64;
                    let q = angular_phase_integral(x, m, phi_p).unwrap();
                    let c = angular_phase_closed_form(x, m, phi_p).unwrap();
                    assert!((q - c).norm() < 1e-9, "x={x} m={m}");
                }
            }
        }
    }

    #[test]
    fn quarter_turns() {
        assert_eq!(QuarterTurns::minus_i_pow(1).to_complex(), Complex64::new(0.0, -1.0));
        assert_eq!(QuarterTurns::minus_i_pow(4).count(), 0);
        assert_eq!(QuarterTurns::minus_i_pow(-1).to_complex(), Complex64::new(0.0, 1.0));
        assert_eq!(QuarterTurns::new(3).compose(QuarterTurns::new(2)).count(), 1);
    }

    #[test]
    fn state_orders() {
        assert_eq!(state_order(4.5, 0).unwrap(), 4);
        assert_eq!(state_order(4.5, 3).unwrap(), 1);
        assert!(state_order(4.5, 4).is_err());
        assert!(state_order(4.2, 0).is_err());
    }

    #[test]
    fn potential_terms_vanish_without_deformation() {
        let morse = MorseParams::new(4.5, 1e12).unwrap();
        let pt = PtParams::new(4.0, 1e12).unwrap();
        let plan = HankelPlan::new(4, 40.0, 4096).unwrap();
        let tp: Vec<f64> = (1..=30).map(|i| i as f64 / 10.0).collect();
        let rep = potential_term_map(morse, pt, 4, &plan, &tp).unwrap();
        assert!(rep.max_residual < 1e-8, "{}", rep.max_residual);
    }

    #[test]
    fn potential_term_pairing_enforced() {
        let morse = MorseParams::new(4.5, 1.0).unwrap();
        let plan = HankelPlan::new(4, 40.0, 64).unwrap();
        let bad_mu = PtParams::new(3.0, 1.0).unwrap();
        assert!(potential_term_map(morse, bad_mu, 4, &plan, &[1.0]).is_err());
        let bad_gamma = PtParams::new(4.0, 2.0).unwrap();
        assert!(potential_term_map(morse, bad_gamma, 4, &plan, &[1.0]).is_err());
    }

    #[test]
    fn potential_term_truncation_adequate() {
        let morse = MorseParams::new(4.5, 1.0).unwrap();
        let pt = PtParams::new(4.0, 1.0).unwrap();
        let tp = [0.1, 0.5, 1.0, 2.0, 3.0];
        let a = potential_term_map(morse, pt, 4, &HankelPlan::new(4, 40.0, 8192).unwrap(), &tp).unwrap();
        let b = potential_term_map(morse, pt, 4, &HankelPlan::new(4, 80.0, 16384).unwrap(), &tp).unwrap();
        for (x, y) in a.lhs.iter().zip(&b.lhs) {
            assert!((x - y).abs() < 1e-6);
        }
        assert_eq!(a.refinement[1].nodes, 16384);
    }

    #[test]
    fn mapped_ground_state_matches_pt() {
        let morse = MorseParams::new(4.5, 1.0).unwrap();
        let pt = PtParams::new(4.0, 1.0).unwrap();
        let sm = shifted_spectrum(&morse, Grid::morse_default(None)).unwrap();
        let sp = shifted_spectrum(&pt, Grid::pt_default()).unwrap();
        let plan = HankelPlan::new(0, 40.0, 8192).unwrap();
        let window: Vec<f64> = (0..=100).map(|i| -5.0 + 0.1 * i as f64).collect();
        let c = wavefunction_connection(&sm.eigenfunctions[0], &sp.eigenfunctions[0], 4.5, 4, &plan, &window).unwrap();
        assert!(c.comparison.discrepancy < 1e-3, "{}", c.comparison.discrepancy);
    }
}
