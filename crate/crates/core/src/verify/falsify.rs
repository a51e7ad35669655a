//! Seeded counterexample search for the inequality checks.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::{min_eigenvalue_by_bisection, DEFAULT_CLUSTER_TOL};
use crate::error::{Error, Result};
use crate::maps::OperatorMap;
use crate::random::rng_for;
use crate::verify::sampling::{sample_instance, CheckKind, Instance, Strategy};

/// Trials evaluated together before scanning for a witness.
const CHUNK: usize = 64;

/// Stream offset separating falsifier trials from other samplers.
const FALSIFY_STREAM_BASE: u64 = 2 << 32;

/// Largest disagreement allowed between a witness margin and its
/// re-verification, for witnesses whose difference matrix has max-norm ≤ 1.
pub const REVERIFY_TOL: f64 = 1e-9;

/// What to search: an inequality check of a map, with spectra drawn from the
/// map's domain.
#[derive(Clone, Debug)]
pub struct FalsifyTarget {
    pub map: OperatorMap,
    pub check: CheckKind,
    /// Number of terms (hp) or projections (pinch); defaults to 2.
    pub k: Option<usize>,
}

impl FalsifyTarget {
    pub fn new(map: OperatorMap, check: CheckKind) -> Self {
        Self {
            map,
            check,
            k: None,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub strategy: Strategy,
    #[serde(flatten)]
    pub instance: Instance,
}

#[derive(Clone, Debug, Serialize)]
pub struct FalsificationResult {
    pub found: bool,
    pub trials_used: usize,
    /// Witness margin when found, otherwise the smallest margin seen.
    /// `null` when every trial was inconclusive.
    pub margin: Option<f64>,
    pub witness: Option<Witness>,
    pub check: CheckKind,
    pub map: String,
    pub dims: usize,
    pub seed: u64,
    /// Fixed tolerance, or `null` when each trial used its own default.
    pub tol: Option<f64>,
    /// Trials whose combined operator left the domain.
    pub inconclusive: usize,
    /// Trials whose apparent violation did not survive re-verification.
    pub rejected: usize,
    /// Witness margin recomputed by inertia bisection.
    pub reverified_margin: Option<f64>,
}

enum Outcome {
    Margin {
        margin: f64,
        violated: bool,
        instance: Instance,
        strategy: Strategy,
        reverified: Option<f64>,
    },
    Inconclusive,
}

/// Runs up to `trials` seeded instances and reports the lowest-index instance
/// whose margin is below `−tol` and re-verifies. Trials are evaluated in
/// parallel but each derives its randomness from `(seed, trial)` only, so the
/// result does not depend on scheduling.
pub fn falsify(
    target: &FalsifyTarget,
    dim: usize,
    trials: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<FalsificationResult> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    if !target.check.is_inequality() {
        return Err(Error::InvalidArgument(format!(
            "the falsifier searches inequality checks (jensen, convexity, hp, pinch), not `{}`",
            target.check
        )));
    }
    if let Some(t) = tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {t}"
            )));
        }
    }
    let k = target.k.unwrap_or(2);
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }

    let mut result = FalsificationResult {
        found: false,
        trials_used: trials,
        margin: None,
        witness: None,
        check: target.check,
        map: target.map.to_string(),
        dims: dim,
        seed,
        tol,
        inconclusive: 0,
        rejected: 0,
        reverified_margin: None,
    };

    let mut start = 0;
    while start < trials {
        let end = (start + CHUNK).min(trials);
        let outcomes: Vec<Outcome> = (start..end)
            .into_par_iter()
            .map(|trial| run_trial(target, dim, k, seed, trial, tol))
            .collect::<Result<_>>()?;
        for (offset, outcome) in outcomes.into_iter().enumerate() {
            match outcome {
                Outcome::Inconclusive => result.inconclusive += 1,
                Outcome::Margin {
                    margin,
                    violated,
                    instance,
                    strategy,
                    reverified,
                } => {
                    if violated && reverified.is_none() {
                        result.rejected += 1;
                        continue;
                    }
                    result.margin = Some(result.margin.map_or(margin, |m: f64| m.min(margin)));
                    if violated {
                        let trial = start + offset;
                        result.found = true;
                        result.trials_used = trial + 1;
                        result.margin = Some(margin);
                        result.reverified_margin = reverified;
                        result.witness = Some(Witness {
                            trial,
                            strategy,
                            instance,
                        });
                        return Ok(result);
                    }
                }
            }
        }
        start = end;
    }
    Ok(result)
}

fn run_trial(
    target: &FalsifyTarget,
    dim: usize,
    k: usize,
    seed: u64,
    trial: usize,
    tol: Option<f64>,
) -> Result<Outcome> {
    let strategy = Strategy::for_trial(trial);
    let mut rng = rng_for(seed, FALSIFY_STREAM_BASE + trial as u64);
    let instance = sample_instance(target.check, &target.map, dim, k, strategy, &mut rng)?;
    let tol = tol.unwrap_or_else(|| instance.default_tol());
    let report = match instance.check(&target.map, tol, DEFAULT_CLUSTER_TOL) {
        Ok(r) => r,
        Err(Error::Inconclusive(_)) | Err(Error::DomainViolation { .. }) => {
            return Ok(Outcome::Inconclusive)
        }
        Err(e) => return Err(e),
    };
    let violated = !report.pass;
    let reverified = if violated {
        reverify(&target.map, &instance, report.margin)?
    } else {
        None
    };
    Ok(Outcome::Margin {
        margin: report.margin,
        violated,
        instance,
        strategy,
        reverified,
    })
}

/// Rebuilds both sides from the stored inputs and recomputes the smallest
/// eigenvalue of their difference by inertia bisection, an evaluation path that
/// shares nothing with the Jacobi solver. Returns the recomputed margin when it
/// agrees with `margin`.
fn reverify(map: &OperatorMap, instance: &Instance, margin: f64) -> Result<Option<f64>> {
    let sides = match instance.sides(map) {
        Some(Ok(s)) => s,
        Some(Err(Error::Inconclusive(_))) | Some(Err(Error::DomainViolation { .. })) => {
            return Ok(None)
        }
        Some(Err(e)) => return Err(e),
        None => return Ok(None),
    };
    let diff = sides.difference();
    let scale = diff.max_norm().max(1.0);
    let again = min_eigenvalue_by_bisection(&diff, 1e-3 * REVERIFY_TOL * scale);
    Ok(((again - margin).abs() <= REVERIFY_TOL * scale).then_some(again))
}

/// One row of a dimension sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub dim: usize,
    pub result: FalsificationResult,
}

/// Runs the same search at several dimensions. This is an exploratory mode;
/// no outcome is asserted.
pub fn falsify_sweep(
    target: &FalsifyTarget,
    dims: &[usize],
    trials: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<Vec<SweepRow>> {
    dims.iter()
        .map(|&dim| {
            Ok(SweepRow {
                dim,
                result: falsify(target, dim, trials, seed, tol)?,
            })
        })
        .collect()
}
