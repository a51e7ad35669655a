//! Hermitian eigendecomposition and the spectral helpers built on it.
//!
//! [`eigh`] is a cyclic complex Jacobi iteration. Each rotation first removes the
//! phase of the pivot `a_pq` with a diagonal unitary and then applies the usual
//! real symmetric rotation, so the combined 2×2 transform is
//!
//! ```text
//! G = [[ c,            s           ],
//!      [ -s·e^{-iφ},   c·e^{-iφ}   ]]      a_pq = |a_pq|·e^{iφ}
//! ```
//!
//! Iteration stops once the off-diagonal Frobenius norm is at most
//! `1e-13·‖A‖_F`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};

pub const MAX_SWEEPS: usize = 100;
pub const CONVERGENCE_FACTOR: f64 = 1e-13;
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
pub const PROJECTION_TOL: f64 = 1e-9;

/// Eigenvalues in ascending order with a unitary whose columns are the
/// corresponding eigenvectors. The first component of modulus above `1e-10`
/// in each column is real and nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub unitary: ComplexMatrix,
    pub source_dim: usize,
}

impl SpectralDecomposition {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `U diag(f(λ)) U*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        HermitianMatrix::from_spectrum(&self.unitary, &values)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }
}

pub fn eigh(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    eigh_with_sweeps(a, MAX_SWEEPS)
}

pub fn eigh_with_sweeps(a: &HermitianMatrix, max_sweeps: usize) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = CONVERGENCE_FACTOR * m.frobenius_norm();

    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= threshold {
            break;
        }
        if sweep == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps: max_sweeps,
                residual: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweep += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut unitary = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let phase = (0..n)
            .map(|i| v[(i, src)])
            .find(|z| z.norm() > 1e-10)
            .map_or(Complex64::new(1.0, 0.0), |z| z.conj() / z.norm());
        for i in 0..n {
            unitary[(i, dst)] = v[(i, src)] * phase;
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        unitary,
        source_dim: n,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = m.rows();
    let b = m[(p, q)];
    let beta = b.norm();
    if beta == 0.0 {
        return;
    }
    let a_pp = m[(p, p)].re;
    let a_qq = m[(q, q)].re;
    let phase_conj = b.conj() / beta;

    let theta = (a_qq - a_pp) / (2.0 * beta);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase_conj * (-s);
    let g_qq = phase_conj * c;

    for i in 0..n {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = x * g_pp + y * g_qp;
        m[(i, q)] = x * g_pq + y * g_qq;
    }
    for j in 0..n {
        let (x, y) = (m[(p, j)], m[(q, j)]);
        m[(p, j)] = g_pp.conj() * x + g_qp.conj() * y;
        m[(q, j)] = g_pq.conj() * x + g_qq.conj() * y;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(a_pp - t * beta, 0.0);
    m[(q, q)] = Complex64::new(a_qq + t * beta, 0.0);

    for i in 0..n {
        let (x, y) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = x * g_pp + y * g_qp;
        v[(i, q)] = x * g_pq + y * g_qq;
    }
}

pub fn min_eigenvalue(a: &HermitianMatrix) -> Result<f64> {
    Ok(eigh(a)?.min())
}

/// Operator 2-norm of a Hermitian matrix, `max |λ|`.
pub fn spectral_norm(a: &HermitianMatrix) -> Result<f64> {
    let d = eigh(a)?;
    Ok(d.min().abs().max(d.max().abs()))
}

/// Smallest eigenvalue of `Y − X`. A margin `≥ −tol` reads as `X ≤ Y`.
pub fn loewner_margin(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    y.check_dim(x.dim())?;
    min_eigenvalue(&(y - x))
}

/// Default Loewner tolerance `1e-9·(1 + max ‖·‖_max)` over the given operands.
pub fn psd_tol(operands: &[&HermitianMatrix]) -> f64 {
    1e-9 * (1.0 + operands.iter().map(|m| m.max_norm()).fold(0.0, f64::max))
}

/// Number of eigenvalues strictly below `sigma`, from the signs of the pivots
/// of an unpivoted `LDL*` factorization of `A − σI` (Sylvester inertia).
pub fn count_eigenvalues_below(a: &HermitianMatrix, sigma: f64) -> usize {
    let n = a.dim();
    let mut w = a.shift(-sigma).into_matrix();
    let pivmin = f64::EPSILON * (1.0 + a.max_norm() + sigma.abs()) * 1e-3;
    let mut negatives = 0;
    for k in 0..n {
        let mut d = w[(k, k)].re;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            negatives += 1;
        }
        for i in (k + 1)..n {
            let l = w[(i, k)] / d;
            if l.re == 0.0 && l.im == 0.0 {
                continue;
            }
            for j in (k + 1)..n {
                let upd = l * w[(k, j)];
                w[(i, j)] -= upd;
            }
        }
    }
    negatives
}

/// Smallest eigenvalue by bisection on the inertia count. Shares nothing with
/// the Jacobi path, so it serves as an independent re-check of margins.
pub fn min_eigenvalue_by_bisection(a: &HermitianMatrix, abs_tol: f64) -> f64 {
    let n = a.dim();
    let m = a.as_matrix();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].norm()).sum();
        lo = lo.min(m[(i, i)].re - radius);
        hi = hi.max(m[(i, i)].re + radius);
    }
    lo -= abs_tol;
    hi += abs_tol;
    for _ in 0..200 {
        if hi - lo <= abs_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if count_eigenvalues_below(a, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mutually orthogonal orthogonal projections summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionFamily {
    dim: usize,
    projections: Vec<HermitianMatrix>,
}

impl ProjectionFamily {
    pub fn new(projections: Vec<HermitianMatrix>) -> Result<Self> {
        Self::with_tolerance(projections, PROJECTION_TOL)
    }

    pub fn with_tolerance(projections: Vec<HermitianMatrix>, tol: f64) -> Result<Self> {
        let dim = projections
            .first()
            .ok_or_else(|| Error::InvalidProjectionFamily("empty family".into()))?
            .dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, p) in projections.iter().enumerate() {
            p.check_dim(dim)?;
            let pm = p.as_matrix();
            let idem = (&(pm * pm) - pm).max_norm();
            if idem > tol {
                return Err(Error::InvalidProjectionFamily(format!(
                    "P_{i} is not idempotent (residual {idem:e})"
                )));
            }
            for (j, other) in projections.iter().enumerate().skip(i + 1) {
                let cross = (pm * other.as_matrix()).max_norm();
                if cross > tol {
                    return Err(Error::InvalidProjectionFamily(format!(
                        "P_{i} P_{j} = {cross:e} is not zero"
                    )));
                }
            }
            sum = &sum + pm;
        }
        let resid = (&sum - &ComplexMatrix::identity(dim)).max_norm();
        if resid > tol {
            return Err(Error::InvalidProjectionFamily(format!(
                "projections sum to I only within {resid:e}"
            )));
        }
        Ok(Self { dim, projections })
    }

    /// The single-element family `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            projections: vec![HermitianMatrix::identity(dim)],
        }
    }

    /// Family of diagonal coordinate projections, one per block of `sizes`.
    pub fn coordinate_blocks(sizes: &[usize]) -> Result<Self> {
        let dim: usize = sizes.iter().sum();
        let mut start = 0;
        let mut projections = Vec::with_capacity(sizes.len());
        for &s in sizes {
            if s == 0 {
                return Err(Error::InvalidProjectionFamily("empty block".into()));
            }
            let diag: Vec<f64> = (0..dim)
                .map(|i| {
                    if i >= start && i < start + s {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            projections.push(HermitianMatrix::diagonal(&diag));
            start += s;
        }
        Self::new(projections)
    }

    pub(crate) fn from_parts(dim: usize, projections: Vec<HermitianMatrix>) -> Self {
        Self { dim, projections }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn projections(&self) -> &[HermitianMatrix] {
        &self.projections
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HermitianMatrix> {
        self.projections.iter()
    }

    /// Ranks as rounded traces.
    pub fn ranks(&self) -> Vec<usize> {
        self.projections
            .iter()
            .map(|p| p.trace().round() as usize)
            .collect()
    }
}

/// Spectral clusters of a Hermitian matrix: mean eigenvalue, spread of the
/// member eigenvalues, and the projection onto their eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusteredSpectrum {
    pub values: Vec<f64>,
    pub spans: Vec<f64>,
    pub family: ProjectionFamily,
}

pub fn clustered_spectrum(a: &HermitianMatrix, cluster_tol: f64) -> Result<ClusteredSpectrum> {
    if !(cluster_tol > 0.0) || !cluster_tol.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "cluster tolerance must be positive, got {cluster_tol}"
        )));
    }
    let dec = eigh(a)?;
    let clusters = cluster_indices(&dec.eigenvalues, cluster_tol);
    let n = a.dim();
    let mut values = Vec::with_capacity(clusters.len());
    let mut spans = Vec::with_capacity(clusters.len());
    let mut projections = Vec::with_capacity(clusters.len());
    for cluster in &clusters {
        let members: Vec<f64> = cluster.iter().map(|&i| dec.eigenvalues[i]).collect();
        values.push(members.iter().sum::<f64>() / members.len() as f64);
        spans.push(members[members.len() - 1] - members[0]);
        let p = ComplexMatrix::from_fn(n, n, |r, c| {
            cluster
                .iter()
                .map(|&k| dec.unitary[(r, k)] * dec.unitary[(c, k)].conj())
                .sum()
        });
        projections.push(HermitianMatrix::hermitian_part(&p));
    }
    Ok(ClusteredSpectrum {
        values,
        spans,
        family: ProjectionFamily::from_parts(n, projections),
    })
}

/// Groups eigenvalues by single linkage (consecutive gap `≤ cluster_tol`) and
/// returns each cluster's mean eigenvalue with its spectral projection.
pub fn spectral_projections(
    a: &HermitianMatrix,
    cluster_tol: f64,
) -> Result<(Vec<f64>, ProjectionFamily)> {
    let c = clustered_spectrum(a, cluster_tol)?;
    Ok((c.values, c.family))
}

/// Index groups of an ascending slice, split wherever the gap exceeds `tol`.
pub(crate) fn cluster_indices(sorted: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in sorted.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if l - sorted[*last.last().unwrap()] <= tol => last.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    clusters
}
