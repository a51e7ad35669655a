//! Individual inequality and identity checks.
//!
//! Every inequality check builds its two sides and reports the smallest
//! eigenvalue of `RHS − LHS` as the margin. Identity checks report minus the
//! largest entry of `|LHS − RHS|`. When a combined operator (e.g.
//! `C*AC + D*BD`) leaves the map's domain the check is [`Error::Inconclusive`]
//! rather than failed.

use serde::Serialize;

use crate::constructs::{pinch, ContractionPair, PAIR_TOL};
use crate::eigen::{clustered_spectrum, loewner_margin};
use crate::error::{Error, Result};
use crate::functions::{ConvexityTag, ScalarFunction};
use crate::maps::{representing_function_value, MapKind, OperatorMap};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::verify::report::{CheckReport, InputDigest};

/// Residual above which a unitary input is rejected.
pub const UNITARY_INPUT_TOL: f64 = 1e-8;

/// Both sides of an operator inequality `LHS ≤ RHS`.
#[derive(Clone, Debug)]
pub struct Sides {
    pub lhs: HermitianMatrix,
    pub rhs: HermitianMatrix,
}

impl Sides {
    pub fn margin(&self) -> Result<f64> {
        loewner_margin(&self.lhs, &self.rhs)
    }

    pub fn difference(&self) -> HermitianMatrix {
        &self.rhs - &self.lhs
    }
}

fn evaluate_combined(map: &OperatorMap, m: &HermitianMatrix) -> Result<HermitianMatrix> {
    map.evaluate(m).map_err(|e| match e {
        Error::DomainViolation {
            offending, domain, ..
        } => Error::Inconclusive(format!(
            "combined operator left the domain {domain}: eigenvalues {offending:?}"
        )),
        other => other,
    })
}

fn convex_expectation(map: &OperatorMap) -> Option<bool> {
    match map.kind() {
        MapKind::Spectral(f) if f.convexity() == ConvexityTag::OperatorConvexClaimed => Some(true),
        MapKind::Trace | MapKind::Affine { .. } => Some(true),
        _ => None,
    }
}

fn invariant_expectation(map: &OperatorMap) -> Option<bool> {
    match map.kind() {
        MapKind::Custom(_) => None,
        _ => Some(true),
    }
}

pub fn jensen_sides(
    map: &OperatorMap,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    pair: &ContractionPair,
) -> Result<Sides> {
    b.check_dim(a.dim())?;
    a.check_dim(pair.dim())?;
    let fa = map.evaluate(a)?;
    let fb = map.evaluate(b)?;
    let combined = &a.congruence(pair.c()) + &b.congruence(pair.d());
    let lhs = evaluate_combined(map, &combined)?;
    let rhs = &fa.congruence(pair.c()) + &fb.congruence(pair.d());
    Ok(Sides { lhs, rhs })
}

/// `Φ(C*AC + D*BD) ≤ C*Φ(A)C + D*Φ(B)D`.
pub fn check_jensen(
    map: &OperatorMap,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    pair: &ContractionPair,
    tol: f64,
) -> Result<CheckReport> {
    let sides = jensen_sides(map, a, b, pair)?;
    let digest = InputDigest::new("jensen")
        .text(&map.to_string())
        .hermitian(a)
        .hermitian(b)
        .matrix(pair.c())
        .matrix(pair.d())
        .finish();
    Ok(
        CheckReport::new("jensen", sides.margin()?, tol, a.dim(), digest)
            .with_expected(map.jensen_expectation(a.dim())),
    )
}

pub fn convexity_sides(
    map: &OperatorMap,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
) -> Result<Sides> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!(
            "lambda {lambda} is not in [0, 1]"
        )));
    }
    b.check_dim(a.dim())?;
    let fa = map.evaluate(a)?;
    let fb = map.evaluate(b)?;
    let mix = &a.scale(lambda) + &b.scale(1.0 - lambda);
    let lhs = evaluate_combined(map, &mix)?;
    let rhs = &fa.scale(lambda) + &fb.scale(1.0 - lambda);
    Ok(Sides { lhs, rhs })
}

/// `f(λA + (1−λ)B) ≤ λf(A) + (1−λ)f(B)`.
pub fn check_operator_convexity(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    tol: f64,
) -> Result<CheckReport> {
    check_map_convexity(&OperatorMap::spectral(f.clone()), a, b, lambda, tol)
}

/// Convexity of a general map along the segment from `B` to `A`.
pub fn check_map_convexity(
    map: &OperatorMap,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    tol: f64,
) -> Result<CheckReport> {
    let sides = convexity_sides(map, a, b, lambda)?;
    let digest = InputDigest::new("convexity")
        .text(&map.to_string())
        .hermitian(a)
        .hermitian(b)
        .scalar(lambda)
        .finish();
    Ok(
        CheckReport::new("convexity", sides.margin()?, tol, a.dim(), digest)
            .with_expected(convex_expectation(map)),
    )
}

pub fn hp_sides(
    map: &OperatorMap,
    operands: &[HermitianMatrix],
    weights: &[ComplexMatrix],
) -> Result<Sides> {
    if operands.is_empty() || operands.len() != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "need the same positive number of operators and weights, got {} and {}",
            operands.len(),
            weights.len()
        )));
    }
    let n = operands[0].dim();
    let mut weight_sum = ComplexMatrix::zeros(n, n);
    for (a, c) in operands.iter().zip(weights) {
        a.check_dim(n)?;
        if !c.is_square() || c.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.rows(),
            });
        }
        weight_sum = &weight_sum + &(&c.adjoint() * c);
    }
    let residual = (&weight_sum - &ComplexMatrix::identity(n)).max_norm();
    if residual > PAIR_TOL {
        return Err(Error::InvalidContractionPair { residual });
    }
    let mut combined = HermitianMatrix::zeros(n);
    let mut rhs = HermitianMatrix::zeros(n);
    for (a, c) in operands.iter().zip(weights) {
        combined = &combined + &a.congruence(c);
        rhs = &rhs + &map.evaluate(a)?.congruence(c);
    }
    let lhs = evaluate_combined(map, &combined)?;
    Ok(Sides { lhs, rhs })
}

/// `f(Σ C_i* A_i C_i) ≤ Σ C_i* f(A_i) C_i` with `Σ C_i* C_i = I`.
pub fn check_hp_k_term(
    f: &ScalarFunction,
    operands: &[HermitianMatrix],
    weights: &[ComplexMatrix],
    tol: f64,
) -> Result<CheckReport> {
    check_hp_k_term_map(&OperatorMap::spectral(f.clone()), operands, weights, tol)
}

pub fn check_hp_k_term_map(
    map: &OperatorMap,
    operands: &[HermitianMatrix],
    weights: &[ComplexMatrix],
    tol: f64,
) -> Result<CheckReport> {
    let sides = hp_sides(map, operands, weights)?;
    let mut digest = InputDigest::new("hp").text(&map.to_string());
    for (a, c) in operands.iter().zip(weights) {
        digest = digest.hermitian(a).matrix(c);
    }
    let dim = operands[0].dim();
    Ok(
        CheckReport::new("hp", sides.margin()?, tol, dim, digest.finish())
            .with_expected(map.jensen_expectation(dim)),
    )
}

pub fn pinching_sides(
    map: &OperatorMap,
    x: &HermitianMatrix,
    family: &crate::eigen::ProjectionFamily,
) -> Result<Sides> {
    let pinched = pinch(x, family)?;
    let fx = map.evaluate(x)?;
    let lhs = evaluate_combined(map, &pinched)?;
    let rhs = pinch(&fx, family)?;
    Ok(Sides { lhs, rhs })
}

/// `Φ(Σ P_j X P_j) ≤ Σ P_j Φ(X) P_j`.
pub fn check_pinching_inequality(
    map: &OperatorMap,
    x: &HermitianMatrix,
    family: &crate::eigen::ProjectionFamily,
    tol: f64,
) -> Result<CheckReport> {
    let sides = pinching_sides(map, x, family)?;
    let digest = family_digest("pinch", map, x, family);
    Ok(
        CheckReport::new("pinch", sides.margin()?, tol, x.dim(), digest)
            .with_expected(convex_expectation(map)),
    )
}

fn family_digest(
    check: &str,
    map: &OperatorMap,
    x: &HermitianMatrix,
    family: &crate::eigen::ProjectionFamily,
) -> String {
    family
        .iter()
        .fold(
            InputDigest::new(check).text(&map.to_string()).hermitian(x),
            |d, p| d.hermitian(p),
        )
        .finish()
}

/// `Φ(X̃) = Σ P_j Φ(X̃) P_j` for the pinched `X̃ = Σ P_i X P_i`.
pub fn check_pinching_commutation(
    map: &OperatorMap,
    x: &HermitianMatrix,
    family: &crate::eigen::ProjectionFamily,
    tol: f64,
) -> Result<CheckReport> {
    let pinched = pinch(x, family)?;
    let lhs = evaluate_combined(map, &pinched)?;
    let rhs = pinch(&lhs, family)?;
    let residual = (&lhs - &rhs).max_norm();
    let digest = family_digest("pinch-commute", map, x, family);
    Ok(
        CheckReport::new("pinch-commute", -residual, tol, x.dim(), digest)
            .with_expected(invariant_expectation(map)),
    )
}

fn checked_clusters(
    x: &HermitianMatrix,
    cluster_tol: f64,
) -> Result<crate::eigen::ClusteredSpectrum> {
    let clusters = clustered_spectrum(x, cluster_tol)?;
    let scale = clusters.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let limit = 1e-6 * (1.0 + scale);
    if let Some(&span) = clusters.spans.iter().find(|&&s| s > limit) {
        return Err(Error::DegenerateClustering { span, limit });
    }
    Ok(clusters)
}

/// `P Φ(X) P = f̂(λ) P` for every eigenvalue `λ` of `X` with eigenprojection `P`.
pub fn check_eigenprojection_compression(
    map: &OperatorMap,
    x: &HermitianMatrix,
    cluster_tol: f64,
    tol: f64,
) -> Result<CheckReport> {
    let clusters = checked_clusters(x, cluster_tol)?;
    let fx = map.evaluate(x)?;
    let n = x.dim();
    let mut worst: f64 = 0.0;
    for (&lambda, p) in clusters.values.iter().zip(clusters.family.iter()) {
        let f_hat = representing_function_value(map, lambda, n)?;
        let compressed = fx.congruence(p.as_matrix());
        worst = worst.max((&compressed - &p.scale(f_hat)).max_norm());
    }
    let digest = InputDigest::new("compression")
        .text(&map.to_string())
        .hermitian(x)
        .scalar(cluster_tol)
        .finish();
    Ok(CheckReport::new("compression", -worst, tol, n, digest)
        .with_expected(map.reconstruction_expectation(n)))
}

/// `Φ(U*AU) = U*Φ(A)U`.
pub fn check_unitary_invariance(
    map: &OperatorMap,
    a: &HermitianMatrix,
    u: &ComplexMatrix,
    tol: f64,
) -> Result<CheckReport> {
    if u.rows() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: u.rows(),
        });
    }
    let residual = u.unitarity_residual();
    if residual > UNITARY_INPUT_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let lhs = map.evaluate(&a.congruence(u))?;
    let rhs = map.evaluate(a)?.congruence(u);
    let residual = (&lhs - &rhs).max_norm();
    let digest = InputDigest::new("invariance")
        .text(&map.to_string())
        .hermitian(a)
        .matrix(u)
        .finish();
    Ok(
        CheckReport::new("invariance", -residual, tol, a.dim(), digest)
            .with_expected(invariant_expectation(map)),
    )
}

/// If `XY = YX` then `Φ(X)Y = YΦ(X)`. Non-commuting inputs are a precondition
/// error, not a failed check.
pub fn check_commutation(
    map: &OperatorMap,
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    tol: f64,
) -> Result<CheckReport> {
    y.check_dim(x.dim())?;
    let input_commutator = x.commutator_norm(y.as_matrix());
    if input_commutator > tol {
        return Err(Error::Precondition(format!(
            "X and Y do not commute (‖XY − YX‖ = {input_commutator:e})"
        )));
    }
    let fx = map.evaluate(x)?;
    let residual = fx.commutator_norm(y.as_matrix());
    let digest = InputDigest::new("commutation")
        .text(&map.to_string())
        .hermitian(x)
        .hermitian(y)
        .finish();
    Ok(
        CheckReport::new("commutation", -residual, tol, x.dim(), digest)
            .with_expected(invariant_expectation(map)),
    )
}

/// `Φ(A) = f̂(A)` where `f̂` is read off `Φ(tI)` at each spectral cluster.
pub fn check_reconstruction(
    map: &OperatorMap,
    a: &HermitianMatrix,
    cluster_tol: f64,
    tol: f64,
) -> Result<CheckReport> {
    let clusters = checked_clusters(a, cluster_tol)?;
    let n = a.dim();
    let mut rebuilt = HermitianMatrix::zeros(n);
    for (&lambda, p) in clusters.values.iter().zip(clusters.family.iter()) {
        let f_hat = representing_function_value(map, lambda, n)?;
        rebuilt = &rebuilt + &p.scale(f_hat);
    }
    let residual = (&map.evaluate(a)? - &rebuilt).max_norm();
    let digest = InputDigest::new("reconstruct")
        .text(&map.to_string())
        .hermitian(a)
        .scalar(cluster_tol)
        .finish();
    Ok(CheckReport::new("reconstruct", -residual, tol, n, digest)
        .with_expected(map.reconstruction_expectation(n)))
}

/// Samples of `f̂(t)` from `Φ(tI) = f̂(t)·I`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepresentingTable {
    pub map: String,
    pub dim: usize,
    pub points: Vec<[f64; 2]>,
    /// `max_i f̂(t_i) − (f̂(t_{i−1}) + f̂(t_{i+1}))/2` over interior points of a
    /// uniform grid; positive values indicate non-convexity. Absent for
    /// non-uniform grids or fewer than three points.
    pub convexity_diagnostic: Option<f64>,
}

pub fn extract_representing_function(
    map: &OperatorMap,
    grid: &[f64],
    dim: usize,
) -> Result<RepresentingTable> {
    let points = grid
        .iter()
        .map(|&t| Ok([t, representing_function_value(map, t, dim)?]))
        .collect::<Result<Vec<_>>>()?;
    let convexity_diagnostic = if grid.len() >= 3 && is_uniform(grid) {
        points
            .windows(3)
            .map(|w| w[1][1] - 0.5 * (w[0][1] + w[2][1]))
            .reduce(f64::max)
    } else {
        None
    };
    Ok(RepresentingTable {
        map: map.to_string(),
        dim,
        points,
        convexity_diagnostic,
    })
}

fn is_uniform(grid: &[f64]) -> bool {
    let h = grid[1] - grid[0];
    if !(h > 0.0) {
        return false;
    }
    grid.windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1.0))
}
