//! Numerical toolkit for operator inequalities on finite-dimensional Hermitian
//! matrices: a Jacobi eigensolver, functional calculus, pinchings, contraction
//! pairs, operator maps, and seeded checks and counterexample search for
//! Jensen-type inequalities.

// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructs;
pub mod eigen;
pub mod error;
pub mod functions;
pub mod interval;
pub mod json;
pub mod maps;
pub mod matrix;
pub mod random;
pub mod verify;

pub use constructs::{ContractionPair, PairMode};
pub use eigen::{
    eigh, loewner_margin, psd_tol, spectral_projections, ProjectionFamily, SpectralDecomposition,
};
pub use error::{Error, Result};
pub use functions::{apply, make_function, step_approximant, ConvexityTag, ScalarFunction, Side};
pub use interval::Interval;
pub use maps::{representing_function_value, MapKind, OperatorMap};
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use num_complex::Complex64;
pub use verify::{CheckKind, CheckReport, FalsificationResult};
