//! Random inputs for every check kind, and dispatch from an input to its check.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::constructs::{contraction_pair_from_rng, ContractionPair, PairMode};
use crate::eigen::{psd_tol, ProjectionFamily};
use crate::error::{Error, Result};
use crate::maps::OperatorMap;
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::random::{
    gapped_hermitian_from_rng, hermitian_in_from_rng, projection_family_from_rng,
    projection_from_rng, unitary_from_rng,
};
use crate::verify::checks::{self, Sides};
use crate::verify::report::CheckReport;

/// Smallest eigenvalue gap of matrices sampled for the compression check.
pub const COMPRESSION_MIN_GAP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Jensen,
    Convexity,
    Hp,
    Pinch,
    PinchCommute,
    Compression,
    Invariance,
    Commutation,
    Reconstruct,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Jensen,
        CheckKind::Convexity,
        CheckKind::Hp,
        CheckKind::Pinch,
        CheckKind::PinchCommute,
        CheckKind::Compression,
        CheckKind::Invariance,
        CheckKind::Commutation,
        CheckKind::Reconstruct,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Jensen => "jensen",
            CheckKind::Convexity => "convexity",
            CheckKind::Hp => "hp",
            CheckKind::Pinch => "pinch",
            CheckKind::PinchCommute => "pinch-commute",
            CheckKind::Compression => "compression",
            CheckKind::Invariance => "invariance",
            CheckKind::Commutation => "commutation",
            CheckKind::Reconstruct => "reconstruct",
        }
    }

    /// Inequality checks, the ones the falsifier searches.
    pub fn is_inequality(self) -> bool {
        matches!(
            self,
            CheckKind::Jensen | CheckKind::Convexity | CheckKind::Hp | CheckKind::Pinch
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let alias = match s {
            "operator_convexity" | "operator-convexity" => Some(CheckKind::Convexity),
            "hp_k_term" | "hp-k-term" => Some(CheckKind::Hp),
            "pinching" => Some(CheckKind::Pinch),
            _ => None,
        };
        alias
            .or_else(|| CheckKind::ALL.into_iter().find(|k| k.as_str() == s))
            .ok_or_else(|| Error::Parse(format!("unknown check `{s}`")))
    }
}

/// How an input is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Independent random operands and a general contraction pair.
    Random,
    /// Random operands with weights `C = P`, `D = I − P` for a random projection.
    ProjectionPair,
    /// `A` a scaled projection near the top of the interval, `B` near its
    /// floor, weights built from the same projection.
    Structured,
}

impl Strategy {
    /// Falsifier schedule: blocks of eight trials cycling through the strategies.
    pub fn for_trial(trial: usize) -> Self {
        match (trial / 8) % 3 {
            0 => Strategy::Random,
            1 => Strategy::ProjectionPair,
            _ => Strategy::Structured,
        }
    }
}

/// Concrete inputs of one check.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Instance {
    Jensen {
        a: HermitianMatrix,
        b: HermitianMatrix,
        pair: ContractionPair,
    },
    Convexity {
        a: HermitianMatrix,
        b: HermitianMatrix,
        lambda: f64,
    },
    Hp {
        operands: Vec<HermitianMatrix>,
        weights: Vec<ComplexMatrix>,
    },
    Pinch {
        x: HermitianMatrix,
        family: ProjectionFamily,
    },
    PinchCommute {
        x: HermitianMatrix,
        family: ProjectionFamily,
    },
    Compression {
        x: HermitianMatrix,
    },
    Invariance {
        a: HermitianMatrix,
        u: ComplexMatrix,
    },
    Commutation {
        x: HermitianMatrix,
        y: HermitianMatrix,
    },
    Reconstruct {
        a: HermitianMatrix,
    },
}

impl Instance {
    pub fn kind(&self) -> CheckKind {
        match self {
            Instance::Jensen { .. } => CheckKind::Jensen,
            Instance::Convexity { .. } => CheckKind::Convexity,
            Instance::Hp { .. } => CheckKind::Hp,
            Instance::Pinch { .. } => CheckKind::Pinch,
            Instance::PinchCommute { .. } => CheckKind::PinchCommute,
            Instance::Compression { .. } => CheckKind::Compression,
            Instance::Invariance { .. } => CheckKind::Invariance,
            Instance::Commutation { .. } => CheckKind::Commutation,
            Instance::Reconstruct { .. } => CheckKind::Reconstruct,
        }
    }

    fn hermitian_inputs(&self) -> Vec<&HermitianMatrix> {
        match self {
            Instance::Jensen { a, b, .. } | Instance::Convexity { a, b, .. } => vec![a, b],
            Instance::Hp { operands, .. } => operands.iter().collect(),
            Instance::Pinch { x, .. }
            | Instance::PinchCommute { x, .. }
            | Instance::Compression { x } => vec![x],
            Instance::Invariance { a, .. } | Instance::Reconstruct { a } => vec![a],
            Instance::Commutation { x, y } => vec![x, y],
        }
    }

    /// `1e-9·(1 + largest input max-norm)`.
    pub fn default_tol(&self) -> f64 {
        psd_tol(&self.hermitian_inputs())
    }

    /// Runs the matching check.
    pub fn check(&self, map: &OperatorMap, tol: f64, cluster_tol: f64) -> Result<CheckReport> {
        match self {
            Instance::Jensen { a, b, pair } => checks::check_jensen(map, a, b, pair, tol),
            Instance::Convexity { a, b, lambda } => {
                checks::check_map_convexity(map, a, b, *lambda, tol)
            }
            Instance::Hp { operands, weights } => {
                checks::check_hp_k_term_map(map, operands, weights, tol)
            }
            Instance::Pinch { x, family } => checks::check_pinching_inequality(map, x, family, tol),
            Instance::PinchCommute { x, family } => {
                checks::check_pinching_commutation(map, x, family, tol)
            }
            Instance::Compression { x } => {
                checks::check_eigenprojection_compression(map, x, cluster_tol, tol)
            }
            Instance::Invariance { a, u } => checks::check_unitary_invariance(map, a, u, tol),
            Instance::Commutation { x, y } => checks::check_commutation(map, x, y, tol),
            Instance::Reconstruct { a } => checks::check_reconstruction(map, a, cluster_tol, tol),
        }
    }

    /// Both sides of an inequality instance; `None` for identity checks.
    pub fn sides(&self, map: &OperatorMap) -> Option<Result<Sides>> {
        match self {
            Instance::Jensen { a, b, pair } => Some(checks::jensen_sides(map, a, b, pair)),
            Instance::Convexity { a, b, lambda } => {
                Some(checks::convexity_sides(map, a, b, *lambda))
            }
            Instance::Hp { operands, weights } => Some(checks::hp_sides(map, operands, weights)),
            Instance::Pinch { x, family } => Some(checks::pinching_sides(map, x, family)),
            _ => None,
        }
    }
}

/// Draws one instance of `kind` for `map` with operands in the map's domain.
/// `k` is the number of terms for `hp` and of projections for the pinching
/// checks (clamped to `dim` for projections).
pub fn sample_instance<R: Rng + ?Sized>(
    kind: CheckKind,
    map: &OperatorMap,
    dim: usize,
    k: usize,
    strategy: Strategy,
    rng: &mut R,
) -> Result<Instance> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let j = map.domain();
    let (lo, hi) = j.sampling_range();
    let random = |rng: &mut R| hermitian_in_from_rng(&j, dim, rng);
    let structured_top = |rng: &mut R| {
        let p = projection_from_rng(dim, random_rank(dim, rng), rng);
        let t = rng.gen_range(0.5..=1.0);
        (p.scale(t * (hi - lo)).shift(lo), p)
    };
    let structured_floor = |rng: &mut R| {
        let floor =
            crate::interval::Interval::new(lo, lo + 0.05 * (hi - lo)).expect("nonempty range");
        hermitian_in_from_rng(&floor, dim, rng)
    };

    Ok(match kind {
        CheckKind::Jensen => match strategy {
            Strategy::Random => Instance::Jensen {
                a: random(rng),
                b: random(rng),
                pair: contraction_pair_from_rng(dim, PairMode::General, rng),
            },
            Strategy::ProjectionPair => {
                let (a, b) = (random(rng), random(rng));
                let p = projection_from_rng(dim, random_rank(dim, rng), rng);
                Instance::Jensen {
                    a,
                    b,
                    pair: ContractionPair::from_projection(&p)?,
                }
            }
            Strategy::Structured => {
                let (a, p) = structured_top(rng);
                let b = structured_floor(rng);
                Instance::Jensen {
                    a,
                    b,
                    pair: ContractionPair::from_projection(&p)?,
                }
            }
        },
        CheckKind::Convexity => {
            let (a, b) = match strategy {
                Strategy::Random => (random(rng), random(rng)),
                Strategy::ProjectionPair => (structured_top(rng).0, structured_top(rng).0),
                Strategy::Structured => (structured_top(rng).0, structured_floor(rng)),
            };
            Instance::Convexity {
                a,
                b,
                lambda: rng.gen_range(0.0..=1.0),
            }
        }
        CheckKind::Hp => {
            let operands: Vec<HermitianMatrix> = match strategy {
                Strategy::Structured => (0..k)
                    .map(|i| {
                        if i % 2 == 0 {
                            structured_top(rng).0
                        } else {
                            structured_floor(rng)
                        }
                    })
                    .collect(),
                _ => (0..k).map(|_| random(rng)).collect(),
            };
            let weights = match strategy {
                Strategy::Random => isometry_blocks(dim, k, rng),
                _ if k == 1 => vec![ComplexMatrix::identity(dim)],
                _ if k <= dim => projection_family_from_rng(dim, k, rng)?
                    .iter()
                    .map(|p| p.as_matrix().clone())
                    .collect(),
                _ => isometry_blocks(dim, k, rng),
            };
            Instance::Hp { operands, weights }
        }
        CheckKind::Pinch | CheckKind::PinchCommute => {
            let x = match strategy {
                Strategy::Structured => structured_top(rng).0,
                _ => random(rng),
            };
            let family = projection_family_from_rng(dim, k.min(dim), rng)?;
            if kind == CheckKind::Pinch {
                Instance::Pinch { x, family }
            } else {
                Instance::PinchCommute { x, family }
            }
        }
        CheckKind::Compression => Instance::Compression {
            x: gapped_hermitian_from_rng(&j, dim, COMPRESSION_MIN_GAP, rng)?,
        },
        CheckKind::Invariance => Instance::Invariance {
            a: random(rng),
            u: unitary_from_rng(dim, rng),
        },
        CheckKind::Commutation => {
            let x = random(rng);
            let c: f64 = rng.gen_range(-1.0..=1.0);
            let y = HermitianMatrix::hermitian_part(
                &(&(x.as_matrix() * x.as_matrix()) + &x.as_matrix().scale(c)),
            );
            Instance::Commutation { x, y }
        }
        CheckKind::Reconstruct => Instance::Reconstruct { a: random(rng) },
    })
}

fn random_rank<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> usize {
    if dim == 1 {
        1
    } else {
        rng.gen_range(1..dim)
    }
}

/// `k` blocks `C_i` (each `dim × dim`) of a random isometry, so `Σ C_i*C_i = I`.
fn isometry_blocks<R: Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> Vec<ComplexMatrix> {
    let v = unitary_from_rng(k * dim, rng);
    (0..k)
        .map(|i| ComplexMatrix::from_fn(dim, dim, |r, c| v[(i * dim + r, c)]))
        .collect()
}
