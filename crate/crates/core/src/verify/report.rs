use serde::Serialize;
use sha2::{Digest as _, Sha256};

use crate::matrix::{ComplexMatrix, HermitianMatrix};

/// Outcome of one inequality or identity check.
///
/// For inequalities `margin` is the smallest eigenvalue of `RHS − LHS`; for
/// identities it is minus the largest entry of `|LHS − RHS|`. `pass` is
/// exactly `margin >= -tol`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub margin: f64,
    pub tol: f64,
    pub pass: bool,
    pub seed: Option<u64>,
    pub dims: usize,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    /// Known expected outcome for this map kind, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<bool>,
}

impl CheckReport {
    pub fn new(check: &str, margin: f64, tol: f64, dims: usize, digest: String) -> Self {
        Self {
            check: check.to_string(),
            margin,
            tol,
            pass: margin >= -tol,
            seed: None,
            dims,
            digest,
            trial: None,
            expected: None,
        }
    }

    pub fn with_seed(mut self, seed: u64, trial: usize) -> Self {
        self.seed = Some(seed);
        self.trial = Some(trial);
        self
    }

    pub fn with_expected(mut self, expected: Option<bool>) -> Self {
        self.expected = expected;
        self
    }

    /// `Some(true)` when the outcome matches the recorded expectation.
    pub fn as_expected(&self) -> Option<bool> {
        self.expected.map(|e| e == self.pass)
    }
}

/// SHA-256 over the canonical JSON of each input, hex encoded.
#[derive(Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(check: &str) -> Self {
        let mut h = Sha256::new();
        h.update(check.as_bytes());
        Self(h)
    }

    pub fn hermitian(mut self, m: &HermitianMatrix) -> Self {
        self.feed(m.as_matrix());
        self
    }

    pub fn matrix(mut self, m: &ComplexMatrix) -> Self {
        self.feed(m);
        self
    }

    pub fn scalar(mut self, x: f64) -> Self {
        self.0.update(b"|s|");
        self.0.update(x.to_le_bytes());
        self
    }

    pub fn text(mut self, s: &str) -> Self {
        self.0.update(b"|t|");
        self.0.update(s.as_bytes());
        self
    }

    fn feed(&mut self, m: &ComplexMatrix) {
        self.0.update(b"|m|");
        self.0
            .update(serde_json::to_vec(m).expect("matrix serialization is infallible"));
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}
