//! Lowest eigenpairs of a real symmetric tridiagonal matrix.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from
//! inverse iteration on a partially pivoted LU factorization, with
//! reorthogonalization inside clusters.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

const INVERSE_ITERATIONS: usize = 4;
const BISECTION_LIMIT: usize = 200;

/// Symmetric tridiagonal matrix, single off-diagonal stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.len() < 2 {
            return Err(Error::Domain(format!(
                "tridiagonal matrix needs n >= 2, got {}",
                diag.len()
            )));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "off-diagonal length {} does not match n - 1 = {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Infinity norm (equal to the 1-norm by symmetry).
    pub fn norm(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = math::abs(self.diag[i]);
                if i > 0 {
                    s += math::abs(self.offdiag[i - 1]);
                }
                if i + 1 < n {
                    s += math::abs(self.offdiag[i]);
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// `y = M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.offdiag[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += math::abs(self.offdiag[i - 1]);
            }
            if i + 1 < n {
                r += math::abs(self.offdiag[i]);
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }
}

/// One eigenvalue with its unit-norm eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Number of eigenvalues of `m` strictly below `x`.
///
/// Counts negative pivots of the `LDLᵀ` factorization of `m - x I`.
pub fn sturm_count(m: &TridiagonalMatrix, x: f64) -> usize {
    let guard = f64::MIN_POSITIVE.sqrt() * (1.0 + m.norm());
    let mut count = 0;
    let mut q = m.diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..m.dim() {
        let safe = if math::abs(q) < guard {
            if q < 0.0 {
                -guard
            } else {
                guard
            }
        } else {
            q
        };
        let e = m.offdiag[i - 1];
        q = (m.diag[i] - x) - e * e / safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` algebraically smallest eigenpairs, eigenvalues nondecreasing.
pub fn tridiag_eigen(m: &TridiagonalMatrix, k: usize) -> Result<Vec<EigenPair>> {
    let n = m.dim();
    if k > n {
        return Err(Error::Domain(format!(
            "requested {k} eigenpairs from a {n}x{n} matrix"
        )));
    }
    let norm = m.norm();
    let (glo, ghi) = m.gershgorin();
    let values: Vec<f64> = (0..k).map(|j| bisect(m, j, glo, ghi, norm)).collect();

    let cluster_gap = 1e-3 * norm;
    let mut pairs: Vec<EigenPair> = Vec::with_capacity(k);
    for (j, &value) in values.iter().enumerate() {
        let cluster_start = pairs
            .iter()
            .rposition(|p| value - p.value > cluster_gap)
            .map_or(0, |i| i + 1);
        let vector = inverse_iteration(m, value, norm, j, &pairs[cluster_start..]);
        pairs.push(EigenPair { value, vector });
    }
    Ok(pairs)
}

fn bisect(m: &TridiagonalMatrix, index: usize, lo: f64, hi: f64, norm: f64) -> f64 {
    let (mut lo, mut hi) = (lo - f64::EPSILON * norm, hi + f64::EPSILON * norm);
    for _ in 0..BISECTION_LIMIT {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(m, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
        let width = hi - lo;
        if width <= 2.0 * f64::EPSILON * (math::abs(lo) + math::abs(hi)) {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn inverse_iteration(
    m: &TridiagonalMatrix,
    shift: f64,
    norm: f64,
    seed: usize,
    cluster: &[EigenPair],
) -> Vec<f64> {
    let n = m.dim();
    let lu = ShiftedLu::factor(m, shift, norm);
    // Deterministic, non-degenerate start vector.
    let mut x: Vec<f64> = (0..n)
        .map(|i| {
            let h = ((i as u64 + 1) * 2654435761 + seed as u64 * 40503) % 1_000_003;
            0.5 + h as f64 / 1_000_003.0
        })
        .collect();
    normalize(&mut x);
    for _ in 0..INVERSE_ITERATIONS {
        lu.solve(&mut x);
        orthogonalize(&mut x, cluster);
        normalize(&mut x);
    }
    x
}

fn orthogonalize(x: &mut [f64], against: &[EigenPair]) {
    for p in against {
        let dot: f64 = x.iter().zip(&p.vector).map(|(a, b)| a * b).sum();
        for (xi, vi) in x.iter_mut().zip(&p.vector) {
            *xi -= dot * vi;
        }
    }
}

fn normalize(x: &mut [f64]) {
    let s = math::sqrt(x.iter().map(|v| v * v).sum::<f64>());
    if s > 0.0 && s.is_finite() {
        x.iter_mut().for_each(|v| *v /= s);
    }
}

/// `LU` of `M - σ I` with partial pivoting (LAPACK `dgttrf` layout).
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(m: &TridiagonalMatrix, shift: f64, norm: f64) -> Self {
        let n = m.dim();
        let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
        let mut d: Vec<f64> = m.diag.iter().map(|v| v - shift).collect();
        let mut dl = m.offdiag.clone();
        let mut du = m.offdiag.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if math::abs(d[i]) >= math::abs(dl[i]) {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for v in d.iter_mut() {
            if math::abs(*v) < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        Self { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        // Rescale to keep repeated solves near a singular shift finite.
        let big = b.iter().fold(0.0_f64, |a, v| a.max(math::abs(*v)));
        if big > 1e150 {
            b.iter_mut().for_each(|v| *v /= big);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> TridiagonalMatrix {
        TridiagonalMatrix::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    fn residual(m: &TridiagonalMatrix, p: &EigenPair) -> f64 {
        let mv = m.mul_vec(&p.vector);
        mv.iter()
            .zip(&p.vector)
            .map(|(a, v)| (a - p.value * v).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = TridiagonalMatrix::new(vec![2.0, 2.0], vec![-1.0]).unwrap();
        let pairs = tridiag_eigen(&m, 2).unwrap();
        assert!((pairs[0].value - 1.0).abs() < 1e-14);
        assert!((pairs[1].value - 3.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_multiple_of_identity() {
        let m = TridiagonalMatrix::new(vec![5.0; 3], vec![0.0; 2]).unwrap();
        let pairs = tridiag_eigen(&m, 3).unwrap();
        for p in &pairs {
            assert!((p.value - 5.0).abs() < 1e-14);
            assert!(residual(&m, p) < 1e-12);
        }
        // Degenerate eigenvectors still come out orthonormal.
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = pairs[i].vector.iter().zip(&pairs[j].vector).map(|(a, b)| a * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 200;
        let m = laplacian(n);
        let pairs = tridiag_eigen(&m, 12).unwrap();
        for (j, p) in pairs.iter().enumerate() {
            let expect = 2.0 - 2.0 * (((j + 1) as f64) * core::f64::consts::PI / (n + 1) as f64).cos();
            assert!((p.value - expect).abs() < 1e-13, "j={j}");
            assert!(residual(&m, p) <= 1e-10 * m.norm());
            let norm: f64 = p.vector.iter().map(|v| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sturm_count_brackets() {
        let m = laplacian(10);
        assert_eq!(sturm_count(&m, -1.0), 0);
        assert_eq!(sturm_count(&m, 5.0), 10);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(TridiagonalMatrix::new(vec![1.0], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![1.0, 2.0], vec![]).is_err());
        let m = laplacian(4);
        assert!(matches!(tridiag_eigen(&m, 5), Err(Error::Domain(_))));
        assert!(tridiag_eigen(&m, 0).unwrap().is_empty());
    }
}
