//! Operator maps `Φ` on Hermitian matrices with spectrum in an interval.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::functions::{ConvexityTag, ScalarFunction};
use crate::interval::Interval;
use crate::matrix::HermitianMatrix;

/// Largest `‖Φ(tI) − f̂(t)·I‖_max` accepted when reading off `f̂(t)`.
pub const SCALAR_TOL: f64 = 1e-9;

type CustomEval = dyn Fn(&HermitianMatrix) -> Result<HermitianMatrix> + Send + Sync;

/// Caller-supplied map. It must be pure and reentrant; checks treat it as opaque.
#[derive(Clone)]
pub struct CustomMap {
    name: String,
    eval: Arc<CustomEval>,
}

impl fmt::Debug for CustomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomMap")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum MapKind {
    /// `Φ(A) = f(A)`.
    Spectral(ScalarFunction),
    /// `Φ(A) = tr(A)·I`.
    Trace,
    /// `Φ(A) = c·A + d·tr(A)·I`.
    Affine {
        c: f64,
        d: f64,
    },
    Custom(CustomMap),
}

#[derive(Clone, Debug)]
pub struct OperatorMap {
    kind: MapKind,
    domain: Interval,
}

impl OperatorMap {
    pub fn spectral(f: ScalarFunction) -> Self {
        let domain = f.domain();
        Self {
            kind: MapKind::Spectral(f),
            domain,
        }
    }

    pub fn trace() -> Self {
        Self {
            kind: MapKind::Trace,
            domain: Interval::real_line(),
        }
    }

    pub fn affine(c: f64, d: f64) -> Result<Self> {
        if !c.is_finite() || !d.is_finite() {
            return Err(Error::InvalidParameters {
                name: "affine".into(),
                reason: "coefficients must be finite".into(),
            });
        }
        Ok(Self {
            kind: MapKind::Affine { c, d },
            domain: Interval::real_line(),
        })
    }

    pub fn custom<F>(name: &str, domain: Interval, eval: F) -> Self
    where
        F: Fn(&HermitianMatrix) -> Result<HermitianMatrix> + Send + Sync + 'static,
    {
        Self {
            kind: MapKind::Custom(CustomMap {
                name: name.to_string(),
                eval: Arc::new(eval),
            }),
            domain,
        }
    }

    /// Restricts the map to `j`, which must lie inside the current domain.
    pub fn with_domain(&self, j: Interval) -> Result<Self> {
        let kind = match &self.kind {
            MapKind::Spectral(f) => MapKind::Spectral(f.restricted_to(&j)?),
            other => {
                if !self.domain.contains_interval(&j) {
                    return Err(Error::InvalidArgument(format!(
                        "{j} is not inside the domain {} of {self}",
                        self.domain
                    )));
                }
                other.clone()
            }
        };
        Ok(Self { kind, domain: j })
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn function(&self) -> Option<&ScalarFunction> {
        match &self.kind {
            MapKind::Spectral(f) => Some(f),
            _ => None,
        }
    }

    /// Whether the Jensen inequality is expected to hold at dimension `dim`,
    /// when the kind tells. Spectral maps of functions tagged operator convex and
    /// affine maps without trace term hold; the trace term breaks it from
    /// dimension 2 on.
    pub fn jensen_expectation(&self, dim: usize) -> Option<bool> {
        match &self.kind {
            MapKind::Spectral(f) => match f.convexity() {
                ConvexityTag::OperatorConvexClaimed => Some(true),
                _ => None,
            },
            MapKind::Affine { d, .. } if *d == 0.0 => Some(true),
            MapKind::Trace | MapKind::Affine { .. } => Some(dim < 2),
            MapKind::Custom(_) => None,
        }
    }

    /// Whether `Φ(A) = f̂(A)` with `f̂(t)` read off `Φ(tI)` is expected.
    pub fn reconstruction_expectation(&self, dim: usize) -> Option<bool> {
        match &self.kind {
            MapKind::Spectral(_) => Some(true),
            MapKind::Affine { d, .. } if *d == 0.0 => Some(true),
            MapKind::Trace | MapKind::Affine { .. } => Some(dim < 2),
            MapKind::Custom(_) => None,
        }
    }

    pub fn evaluate(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        match &self.kind {
            MapKind::Spectral(f) => crate::functions::apply(f, a),
            MapKind::Trace => {
                self.check_domain(a)?;
                Ok(HermitianMatrix::scalar(a.dim(), a.trace()))
            }
            MapKind::Affine { c, d } => {
                self.check_domain(a)?;
                Ok(a.scale(*c).shift(d * a.trace()))
            }
            MapKind::Custom(m) => {
                self.check_domain(a)?;
                let out = (m.eval)(a)?;
                out.check_dim(a.dim())?;
                Ok(out)
            }
        }
    }

    fn check_domain(&self, a: &HermitianMatrix) -> Result<()> {
        if self.domain == Interval::real_line() {
            return Ok(());
        }
        let offending: Vec<f64> = eigh(a)?
            .eigenvalues
            .into_iter()
            .filter(|&l| !self.domain.contains(l))
            .collect();
        if offending.is_empty() {
            Ok(())
        } else {
            Err(Error::DomainViolation {
                name: self.to_string(),
                domain: self.domain.to_string(),
                offending,
            })
        }
    }
}

/// `f̂(t)` defined by `Φ(t·I) = f̂(t)·I` at dimension `dim`.
pub fn representing_function_value(map: &OperatorMap, t: f64, dim: usize) -> Result<f64> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    if !map.domain().contains(t) {
        return Err(Error::DomainViolation {
            name: map.to_string(),
            domain: map.domain().to_string(),
            offending: vec![t],
        });
    }
    let out = map.evaluate(&HermitianMatrix::scalar(dim, t))?;
    let s = out.trace() / dim as f64;
    let residual = (&out - &HermitianMatrix::scalar(dim, s)).max_norm();
    if residual > SCALAR_TOL {
        return Err(Error::NotScalar { residual });
    }
    Ok(s)
}

impl fmt::Display for OperatorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MapKind::Spectral(func) => write!(f, "spectral:{func}"),
            MapKind::Trace => f.write_str("trace"),
            MapKind::Affine { c, d } => write!(f, "affine:{c},{d}"),
            MapKind::Custom(m) => write!(f, "custom:{}", m.name),
        }
    }
}

/// Parses `spectral:<function-spec>`, `trace` or `affine:<c>,<d>`.
impl FromStr for OperatorMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "trace" {
            return Ok(Self::trace());
        }
        if let Some(func) = s.strip_prefix("spectral:") {
            return Ok(Self::spectral(func.parse()?));
        }
        if let Some(coeffs) = s.strip_prefix("affine:") {
            let (c, d) = coeffs
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("affine map needs `c,d`, got `{coeffs}`")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad affine coefficient `{x}`")))
            };
            return Self::affine(parse(c)?, parse(d)?);
        }
        Err(Error::Parse(format!("unknown map spec `{s}`")))
    }
}

impl Serialize for OperatorMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
