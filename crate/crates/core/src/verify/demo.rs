//! Tabulated demonstrations of the constructions: pinching as an average of
//! conjugations, the contraction-pair decomposition, and step approximants.

use serde::Serialize;

use crate::constructs::{
    average_conjugations, decompose_below, pinch, pinching_unitary, ContractionPair,
};
use crate::eigen::{loewner_margin, spectral_norm, ProjectionFamily};
use crate::error::{Error, Result};
use crate::functions::{apply, step_approximant, ScalarFunction, Side};
use crate::interval::Interval;
use crate::matrix::{ComplexMatrix, HermitianMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct PinchDemo {
    pub k: usize,
    pub ranks: Vec<usize>,
    pub unitary: ComplexMatrix,
    pub pinched: HermitianMatrix,
    pub averaged: HermitianMatrix,
    /// `‖pinch − average‖_max`.
    pub deviation: f64,
    /// `‖pinch − average‖_max / (1 + ‖X‖_max)`.
    pub relative_deviation: f64,
}

/// Compares `Σ P_j X P_j` with `(1/k) Σ_m U^{−m} X U^m` for the root-of-unity
/// unitary `U = Σ θ^j P_j`.
pub fn demo_pinch(x: &HermitianMatrix, family: &ProjectionFamily) -> Result<PinchDemo> {
    let unitary = pinching_unitary(family);
    let pinched = pinch(x, family)?;
    let averaged = average_conjugations(x, &unitary, family.len())?;
    let deviation = (&pinched - &averaged).max_norm();
    Ok(PinchDemo {
        k: family.len(),
        ranks: family.ranks(),
        unitary,
        pinched,
        averaged,
        deviation,
        relative_deviation: deviation / (1.0 + x.max_norm()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposeDemo {
    pub alpha: f64,
    pub pair: ContractionPair,
    /// `‖C*YC + α D*D − A‖_max`.
    pub reconstruction_residual: f64,
    /// `‖C*C + D*D − I‖_max`.
    pub pair_residual: f64,
}

/// Writes `A = C*YC + α D*D` for `α < A ≤ Y`.
pub fn demo_decompose(
    a: &HermitianMatrix,
    y: &HermitianMatrix,
    alpha: f64,
) -> Result<DecomposeDemo> {
    let pair = decompose_below(a, y, alpha)?;
    let n = a.dim();
    let rebuilt = &y.congruence(pair.c())
        + &HermitianMatrix::identity(n)
            .scale(alpha)
            .congruence(pair.d());
    Ok(DecomposeDemo {
        alpha,
        reconstruction_residual: (&rebuilt - a).max_norm(),
        pair_residual: pair.residual(),
        pair,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproximationRow {
    pub mesh: f64,
    /// `‖Y − A‖₂` for the upper approximant `Y`.
    pub upper_error: f64,
    /// `‖Z − A‖₂` for the lower approximant `Z`.
    pub lower_error: f64,
    /// `‖f(Y) − f(A)‖₂`.
    pub upper_value_error: f64,
    /// `‖f(Z) − f(A)‖₂`.
    pub lower_value_error: f64,
    /// Loewner margin of `A ≤ Y`.
    pub upper_margin: f64,
    /// Loewner margin of `Z ≤ A`.
    pub lower_margin: f64,
}

/// Convergence table of the upper and lower step approximants of `A` on `J`.
pub fn demo_approximation(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    meshes: &[f64],
    j: &Interval,
) -> Result<Vec<ApproximationRow>> {
    let f = f.restricted_to(j)?;
    let fa = apply(&f, a)?;
    let (lo, hi) = j.effective_bounds();
    meshes
        .iter()
        .map(|&mesh| {
            if !(mesh > 0.0) || mesh > hi - lo {
                return Err(Error::InvalidArgument(format!(
                    "mesh {mesh} must be positive and at most the width of {j}"
                )));
            }
            let y = step_approximant(a, mesh, Side::Upper, j)?;
            let z = step_approximant(a, mesh, Side::Lower, j)?;
            Ok(ApproximationRow {
                mesh,
                upper_error: spectral_norm(&(&y - a))?,
                lower_error: spectral_norm(&(&z - a))?,
                upper_value_error: spectral_norm(&(&apply(&f, &y)? - &fa))?,
                lower_value_error: spectral_norm(&(&apply(&f, &z)? - &fa))?,
                upper_margin: loewner_margin(a, &y)?,
                lower_margin: loewner_margin(&z, a)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::make_function;
    use crate::random::{random_hermitian_in, random_projection_family};

    #[test]
    fn pinch_demo_agrees() {
        let j = Interval::new(-2.0, 2.0).unwrap();
        let x = random_hermitian_in(&j, 5, 3).unwrap();
        let d = demo_pinch(&x, &random_projection_family(5, 3, 1).unwrap()).unwrap();
        assert!(d.relative_deviation < 1e-12);
        assert_eq!(d.ranks.iter().sum::<usize>(), 5);
    }

    #[test]
    fn decompose_demo_closes() {
        let a = HermitianMatrix::diagonal(&[0.5, 1.0]);
        let y = HermitianMatrix::diagonal(&[1.5, 1.0]);
        let d = demo_decompose(&a, &y, 0.0).unwrap();
        assert!(d.reconstruction_residual < 1e-12);
        assert!(d.pair_residual < 1e-12);
    }

    #[test]
    fn identity_function_errors_match_the_approximants() {
        let j = Interval::new(0.0, 2.0).unwrap();
        let a = random_hermitian_in(&j, 4, 8).unwrap();
        let id = make_function("identity", &[]).unwrap();
        for row in demo_approximation(&id, &a, &[0.4, 0.1], &j).unwrap() {
            assert!(row.upper_error <= row.mesh + 1e-10);
            assert!((row.upper_value_error - row.upper_error).abs() < 1e-12);
            assert!(row.upper_margin >= -1e-12 && row.lower_margin >= -1e-12);
        }
        let scalar = HermitianMatrix::scalar(3, 0.7);
        let rows = demo_approximation(&id, &scalar, &[0.5], &j).unwrap();
        assert_eq!(rows[0].upper_error, 0.0);
        assert!(demo_approximation(&id, &a, &[5.0], &j).is_err());
    }
}
