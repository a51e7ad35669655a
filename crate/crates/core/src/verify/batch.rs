//! Batches of seeded random checks of one kind.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::OperatorMap;
use crate::random::rng_for;
use crate::verify::report::CheckReport;
use crate::verify::sampling::{sample_instance, CheckKind, Strategy};

const BATCH_STREAM_BASE: u64 = 1 << 32;

#[derive(Clone, Debug)]
pub struct BatchConfig {
    pub check: CheckKind,
    pub map: OperatorMap,
    pub dim: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    /// Fixed tolerance; `None` uses each input's default.
    pub tol: Option<f64>,
    pub cluster_tol: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BatchSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    /// Failures of checks whose recorded expectation is a pass, plus passes of
    /// checks expected to fail.
    pub unexpected: usize,
    pub min_margin: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchResult {
    pub summary: BatchSummary,
    pub reports: Vec<CheckReport>,
    /// Trial indices whose combined operator left the domain.
    pub inconclusive_trials: Vec<usize>,
}

impl BatchResult {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Trial `i` draws its input from `(seed, i)` alone; reports come back in trial
/// order.
pub fn run_batch(cfg: &BatchConfig) -> Result<BatchResult> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let outcomes: Vec<Option<CheckReport>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_for(cfg.seed, BATCH_STREAM_BASE + trial as u64);
            let inst = sample_instance(
                cfg.check,
                &cfg.map,
                cfg.dim,
                cfg.k,
                Strategy::Random,
                &mut rng,
            )?;
            let tol = cfg.tol.unwrap_or_else(|| inst.default_tol());
            match inst.check(&cfg.map, tol, cfg.cluster_tol) {
                Ok(r) => Ok(Some(r.with_seed(cfg.seed, trial))),
                Err(Error::Inconclusive(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut summary = BatchSummary {
        total: cfg.trials,
        ..Default::default()
    };
    let mut reports = Vec::with_capacity(outcomes.len());
    let mut inconclusive_trials = Vec::new();
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            None => {
                summary.inconclusive += 1;
                inconclusive_trials.push(trial);
            }
            Some(r) => {
                if r.pass {
                    summary.passed += 1;
                } else {
                    summary.failed += 1;
                }
                if r.as_expected() == Some(false) {
                    summary.unexpected += 1;
                }
                summary.min_margin = Some(
                    summary
                        .min_margin
                        .map_or(r.margin, |m: f64| m.min(r.margin)),
                );
                reports.push(r);
            }
        }
    }
    Ok(BatchResult {
        summary,
        reports,
        inconclusive_trials,
    })
}
