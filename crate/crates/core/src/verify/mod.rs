//! Checks of operator inequalities and identities, batch runs and the
//! randomized falsifier.

pub mod batch;
pub mod checks;
pub mod demo;
pub mod falsify;
pub mod report;
pub mod sampling;

pub use batch::{run_batch, BatchConfig, BatchResult, BatchSummary};
pub use checks::{
    check_commutation, check_eigenprojection_compression, check_hp_k_term, check_hp_k_term_map,
    check_jensen, check_map_convexity, check_operator_convexity, check_pinching_commutation,
    check_pinching_inequality, check_reconstruction, check_unitary_invariance,
    extract_representing_function, RepresentingTable, Sides,
};
pub use demo::{
    demo_approximation, demo_decompose, demo_pinch, ApproximationRow, DecomposeDemo, PinchDemo,
};
pub use falsify::{falsify, falsify_sweep, FalsificationResult, FalsifyTarget, SweepRow, Witness};
pub use report::{CheckReport, InputDigest};
pub use sampling::{sample_instance, CheckKind, Instance, Strategy};
