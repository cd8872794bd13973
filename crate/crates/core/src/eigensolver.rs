//! Bound states of `H = −∂²_ρ + V(ρ)` on a truncated Dirichlet box.
//!
//! The Laplacian uses the three-point stencil; the lowest eigenpairs of the
//! resulting symmetric tridiagonal matrix come from
//! [`tridiag_eigen`](crate::numerics::tridiag_eigen).

use alloc::format;
use alloc::vec::Vec;

use crate::math;
use crate::numerics::{sturm_count, tridiag_eigen, TridiagonalMatrix};
use crate::potentials::{Family, Generalized, PotentialCurve};
use crate::{Error, Result};

/// Default node count for the family grids.
pub const DEFAULT_NODES: usize = 4001;
/// Eigenvalues closer than this to the threshold count as continuum.
pub const EDGE_TOLERANCE: f64 = 1e-3;
/// Largest allowed `|ψ(boundary)| / max |ψ|`.
pub const BOUNDARY_DECAY: f64 = 1e-6;

const MIN_NODES: usize = 16;

/// Uniform grid `min, min + h, …, max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    min: f64,
    max: f64,
    n: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || !(max > min) {
            return Err(Error::Domain(format!("grid bounds [{min}, {max}] must be finite with max > min")));
        }
        if n < MIN_NODES {
            return Err(Error::Domain(format!("grid needs at least {MIN_NODES} nodes, got {n}")));
        }
        Ok(Self { min, max, n })
    }

    /// Morse default: `ρ ∈ [max(ρ_min + 0.5, −2), 25]`.
    pub fn morse_default(rho_min: Option<f64>) -> Self {
        let lo = rho_min.map_or(-2.0, |r| (r + 0.5).max(-2.0));
        Self::new(lo, 25.0, DEFAULT_NODES).expect("default Morse grid is valid")
    }

    /// Pöschl-Teller default: `ρ ∈ [−15, 15]`.
    pub fn pt_default() -> Self {
        Self::new(-15.0, 15.0, DEFAULT_NODES).expect("default PT grid is valid")
    }

    /// Pöschl-Teller grid kept `0.5` clear of a singular point:
    /// `ρ ∈ [max(ρ_min + 0.5, −15), 15]`.
    pub fn pt_restricted(rho_min: Option<f64>) -> Self {
        let lo = rho_min.map_or(-15.0, |r| (r + 0.5).max(-15.0));
        Self::new(lo, 15.0, DEFAULT_NODES).expect("restricted PT grid is valid")
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }
}

/// Real function tabulated on strictly increasing nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::Domain(format!(
                "sampled function has {} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("sample nodes must be strictly increasing".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("sample {i} is not finite")));
        }
        Ok(Self { nodes, values })
    }

    pub fn on_grid(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid.nodes().collect(), values)
    }

    pub fn tabulate<F: Fn(f64) -> f64>(nodes: Vec<f64>, f: F) -> Result<Self> {
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes, values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Four-point Lagrange interpolation; `None` outside the node range.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let n = self.nodes.len();
        if n == 0 || !(x >= self.nodes[0] && x <= self.nodes[n - 1]) {
            return None;
        }
        if n < 4 {
            let i = self.nodes.partition_point(|&v| v <= x).clamp(1, n - 1);
            let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
            let s = (x - x0) / (x1 - x0);
            return Some(self.values[i - 1] * (1.0 - s) + self.values[i] * s);
        }
        let i = self.nodes.partition_point(|&v| v <= x).clamp(1, n - 1);
        let start = (i as isize - 2).clamp(0, n as isize - 4) as usize;
        let xs = &self.nodes[start..start + 4];
        let ys = &self.values[start..start + 4];
        let mut acc = 0.0;
        for j in 0..4 {
            let mut w = 1.0;
            for k in 0..4 {
                if k != j {
                    w *= (x - xs[k]) / (xs[j] - xs[k]);
                }
            }
            acc += w * ys[j];
        }
        Some(acc)
    }

    /// Trapezoid `∫ f g` over the shared nodes.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.nodes != other.nodes {
            return Err(Error::Domain("inner product needs identical nodes".into()));
        }
        Ok(trapezoid(&self.nodes, |i| self.values[i] * other.values[i]))
    }

    /// Trapezoid L² norm.
    pub fn norm(&self) -> f64 {
        math::sqrt(trapezoid(&self.nodes, |i| self.values[i] * self.values[i]))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(math::abs(*v)))
    }
}

pub(crate) fn trapezoid<F: Fn(usize) -> f64>(nodes: &[f64], f: F) -> f64 {
    let mut s = 0.0;
    for i in 1..nodes.len() {
        s += 0.5 * (nodes[i] - nodes[i - 1]) * (f(i) + f(i - 1));
    }
    s
}

/// Bound-state spectrum of a discretized Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Unit trapezoid norm, boundary nodes zero.
    pub eigenfunctions: Vec<SampledFunction>,
    pub continuum_threshold: f64,
    pub bound_count: usize,
}

impl Spectrum {
    pub fn empty(continuum_threshold: f64) -> Self {
        Self {
            eigenvalues: Vec::new(),
            eigenfunctions: Vec::new(),
            continuum_threshold,
            bound_count: 0,
        }
    }
}

/// Three-point finite-difference Hamiltonian over interior samples.
pub fn discretize_samples(interior: &[f64], h: f64) -> Result<TridiagonalMatrix> {
    if let Some(i) = interior.iter().position(|v| !v.is_finite()) {
        return Err(Error::Discretization {
            node: i + 1,
            rho: f64::NAN,
            value: interior[i],
        });
    }
    let inv_h2 = 1.0 / (h * h);
    let diag = interior.iter().map(|v| 2.0 * inv_h2 + v).collect();
    let offdiag = alloc::vec![-inv_h2; interior.len().saturating_sub(1)];
    TridiagonalMatrix::new(diag, offdiag)
}

/// Hamiltonian matrix on the interior nodes of the curve's grid
/// (the boundary nodes carry the Dirichlet condition).
pub fn discretize(curve: &PotentialCurve) -> Result<TridiagonalMatrix> {
    let grid = curve.grid();
    let v = curve.values();
    discretize_samples(&v[1..v.len() - 1], grid.spacing())
}

/// All eigenpairs below `threshold − EDGE_TOLERANCE`.
///
/// Eigenfunctions are normalized under trapezoid weights and signed so
/// their first significant lobe is positive. A retained state that does
/// not decay at the box edges is reported as [`Error::GridTooSmall`].
pub fn solve_bound_states(curve: &PotentialCurve, threshold: f64) -> Result<Spectrum> {
    let grid = curve.grid();
    let matrix = discretize(curve)?;
    let count = sturm_count(&matrix, threshold - EDGE_TOLERANCE);
    if count == 0 {
        return Ok(Spectrum::empty(threshold));
    }
    let pairs = tridiag_eigen(&matrix, count)?;
    let h = grid.spacing();
    let n = grid.len();
    let mut eigenvalues = Vec::with_capacity(count);
    let mut eigenfunctions = Vec::with_capacity(count);
    for (state, pair) in pairs.into_iter().enumerate() {
        let mut values = alloc::vec![0.0; n];
        values[1..n - 1].copy_from_slice(&pair.vector);
        let scale = 1.0 / math::sqrt(h * pair.vector.iter().map(|v| v * v).sum::<f64>());
        let peak = pair.vector.iter().fold(0.0_f64, |a, v| a.max(math::abs(*v)));
        let first = values.iter().find(|v| math::abs(**v) > 1e-3 * peak).copied().unwrap_or(1.0);
        let sign = if first < 0.0 { -scale } else { scale };
        values.iter_mut().for_each(|v| *v *= sign);

        let edge = math::abs(values[1]).max(math::abs(values[n - 2]));
        let ratio = edge / (peak * scale);
        if ratio >= BOUNDARY_DECAY {
            return Err(Error::GridTooSmall { state, ratio });
        }
        eigenvalues.push(pair.value);
        eigenfunctions.push(SampledFunction::on_grid(grid, values)?);
    }
    Ok(Spectrum {
        bound_count: eigenvalues.len(),
        eigenvalues,
        eigenfunctions,
        continuum_threshold: threshold,
    })
}

/// Spectrum of the shifted base potential of a family.
pub fn shifted_spectrum<F: Family>(family: &F, grid: Grid) -> Result<Spectrum> {
    let curve = PotentialCurve::sample(grid, |r| Ok(family.shifted(r)))?;
    solve_bound_states(&curve, family.continuum_threshold())
}

/// Spectrum of the supersymmetric partner potential.
pub fn partner_spectrum<F: Family>(family: &F, grid: Grid) -> Result<Spectrum> {
    let curve = PotentialCurve::sample(grid, |r| Ok(family.partner(r)))?;
    solve_bound_states(&curve, family.continuum_threshold())
}

/// Spectrum of the Γ-deformed potential.
pub fn generalized_spectrum<F: Family>(gen: &Generalized<F>, grid: Grid) -> Result<Spectrum> {
    let curve = PotentialCurve::sample(grid, |r| gen.potential(r))?;
    solve_bound_states(&curve, gen.family().continuum_threshold())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{MorseParams, PtParams};

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 1.0, 15).is_err());
        assert!(Grid::new(1.0, 1.0, 100).is_err());
        assert!(Grid::new(0.0, f64::INFINITY, 100).is_err());
        let g = Grid::new(-1.0, 1.0, 21).unwrap();
        assert!((g.spacing() - 0.1).abs() < 1e-15);
        assert_eq!(g.node(20), 1.0);
        assert_eq!(g.nodes().count(), 21);
    }

    #[test]
    fn free_stencil() {
        let m = discretize_samples(&[0.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(m.diag(), &[2.0, 2.0, 2.0]);
        assert_eq!(m.offdiag(), &[-1.0, -1.0]);
    }

    #[test]
    fn constant_shift_moves_every_level() {
        let grid = Grid::new(0.0, 1.0, 101).unwrap();
        let flat = PotentialCurve::sample(grid, |_| Ok(0.0)).unwrap();
        let raised = PotentialCurve::sample(grid, |_| Ok(3.25)).unwrap();
        let a = tridiag_eigen(&discretize(&flat).unwrap(), 5).unwrap();
        let b = tridiag_eigen(&discretize(&raised).unwrap(), 5).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((y.value - x.value - 3.25).abs() < 1e-9);
        }
    }

    #[test]
    fn harmonic_oscillator_levels() {
        let grid = Grid::new(-10.0, 10.0, 2001).unwrap();
        let curve = PotentialCurve::sample(grid, |x| Ok(x * x)).unwrap();
        let s = solve_bound_states(&curve, 7.0).unwrap();
        assert_eq!(s.bound_count, 3);
        for (n, e) in s.eigenvalues.iter().enumerate() {
            assert!((e - (2 * n + 1) as f64).abs() < 1e-3, "n={n}: {e}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let err = |n: usize| {
            let grid = Grid::new(-10.0, 10.0, n).unwrap();
            let curve = PotentialCurve::sample(grid, |x| Ok(x * x)).unwrap();
            let s = solve_bound_states(&curve, 4.0).unwrap();
            (s.eigenvalues[1] - 3.0).abs()
        };
        let coarse = err(1001);
        let fine = err(2001);
        let ratio = coarse / fine;
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn no_bound_states_is_empty() {
        let grid = Grid::new(-5.0, 5.0, 201).unwrap();
        let curve = PotentialCurve::sample(grid, |_| Ok(1.0)).unwrap();
        let s = solve_bound_states(&curve, 0.0).unwrap();
        assert_eq!(s.bound_count, 0);
        assert!(s.eigenvalues.is_empty());
    }

    #[test]
    fn narrow_box_is_rejected() {
        let grid = Grid::new(-1.5, 1.5, 301).unwrap();
        let p = PtParams::new(4.0, 1.0).unwrap();
        let err = shifted_spectrum(&p, grid).unwrap_err();
        assert!(matches!(err, Error::GridTooSmall { .. }), "{err:?}");
    }

    #[test]
    fn non_finite_potential_names_node() {
        let grid = Grid::new(0.0, 1.0, 101).unwrap();
        let err = PotentialCurve::sample(grid, |x| Ok(if x > 0.5 { f64::NAN } else { 0.0 })).unwrap_err();
        assert!(matches!(err, Error::Discretization { node: 51, .. }), "{err:?}");
    }

    #[test]
    fn morse_levels_on_default_grid() {
        let p = MorseParams::new(4.5, 1.0).unwrap();
        let s = shifted_spectrum(&p, Grid::morse_default(None)).unwrap();
        assert_eq!(s.bound_count, 4);
        for (e, exact) in s.eigenvalues.iter().zip(p.analytic_levels()) {
            assert!((e - exact).abs() < 2e-3, "{e} vs {exact}");
        }
    }

    #[test]
    fn eigenfunctions_are_orthonormal() {
        let p = PtParams::new(4.0, 1.0).unwrap();
        let s = shifted_spectrum(&p, Grid::pt_default()).unwrap();
        for i in 0..s.bound_count {
            for j in 0..s.bound_count {
                let g = s.eigenfunctions[i].inner(&s.eigenfunctions[j]).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g - expect).abs() < 1e-6, "({i},{j}) = {g}");
            }
        }
    }

    #[test]
    fn interpolation_reproduces_cubics() {
        let nodes: Vec<f64> = (0..20).map(|i| (i as f64 * 0.3).powf(1.2)).collect();
        let f = SampledFunction::tabulate(nodes, |x| 2.0 * x * x * x - x + 0.5).unwrap();
        for &x in &[0.05, 1.3, 4.4, 7.0] {
            let v = f.interpolate(x).unwrap();
            assert!((v - (2.0 * x * x * x - x + 0.5)).abs() < 1e-10);
        }
        assert!(f.interpolate(-1.0).is_none());
    }
}
