//! Scalar test functions, the functional calculus `f(A) = U f(Λ) U*`, and the
//! upper/lower step approximants of a Hermitian matrix.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::eigen::{eigh, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::HermitianMatrix;

/// What is claimed about a function's convexity. Checks never trust it; it only
/// labels expected outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexityTag {
    OperatorConvexClaimed,
    ConvexOnly,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Identity,
    Constant(f64),
    Affine(f64, f64),
    Square,
    Cube,
    Power(f64),
    Inverse,
    NegLog,
    Entropy,
    NegSqrt,
    Abs,
}

pub const BUILTIN_NAMES: &[&str] = &[
    "identity", "constant", "affine", "square", "cube", "power", "inverse", "neg_log", "entropy",
    "neg_sqrt", "abs",
];

/// A real function on an open interval.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarFunction {
    name: String,
    params: Vec<f64>,
    domain: Interval,
    convexity: ConvexityTag,
    kind: Kind,
}

/// Builds one of the builtin functions. `constant` takes `c`, `affine` takes
/// `a,b` for `a·t + b`, and `power` takes the exponent.
pub fn make_function(name: &str, params: &[f64]) -> Result<ScalarFunction> {
    let arity = match name {
        "constant" | "power" => 1,
        "affine" => 2,
        n if BUILTIN_NAMES.contains(&n) => 0,
        _ => return Err(Error::UnknownFunction(name.to_string())),
    };
    if params.len() != arity {
        return Err(Error::InvalidParameters {
            name: name.to_string(),
            reason: format!("expected {arity} parameter(s), got {}", params.len()),
        });
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidParameters {
            name: name.to_string(),
            reason: "parameters must be finite".into(),
        });
    }
    use ConvexityTag::*;
    let (kind, domain, convexity) = match name {
        "identity" => (Kind::Identity, Interval::real_line(), OperatorConvexClaimed),
        "constant" => (
            Kind::Constant(params[0]),
            Interval::real_line(),
            OperatorConvexClaimed,
        ),
        "affine" => (
            Kind::Affine(params[0], params[1]),
            Interval::real_line(),
            OperatorConvexClaimed,
        ),
        "square" => (Kind::Square, Interval::real_line(), OperatorConvexClaimed),
        "cube" => (Kind::Cube, Interval::real_line(), None),
        "power" => {
            let p = params[0];
            let tag = if (1.0..=2.0).contains(&p) || (-1.0..=0.0).contains(&p) {
                OperatorConvexClaimed
            } else if !(-1.0..=2.0).contains(&p) {
                ConvexOnly
            } else {
                None
            };
            (Kind::Power(p), Interval::positive(), tag)
        }
        "inverse" => (Kind::Inverse, Interval::positive(), OperatorConvexClaimed),
        "neg_log" => (Kind::NegLog, Interval::positive(), OperatorConvexClaimed),
        "entropy" => (Kind::Entropy, Interval::positive(), OperatorConvexClaimed),
        "neg_sqrt" => (Kind::NegSqrt, Interval::positive(), OperatorConvexClaimed),
        "abs" => (Kind::Abs, Interval::real_line(), ConvexOnly),
        _ => unreachable!("arity match covers every builtin"),
    };
    Ok(ScalarFunction {
        name: name.to_string(),
        params: params.to_vec(),
        domain,
        convexity,
        kind,
    })
}

impl ScalarFunction {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn convexity(&self) -> ConvexityTag {
        self.convexity
    }

    /// Same function restricted to a sub-interval of its natural domain.
    pub fn restricted_to(&self, j: &Interval) -> Result<ScalarFunction> {
        if !self.domain.contains_interval(j) {
            return Err(Error::InvalidArgument(format!(
                "{j} is not inside the domain {} of {}",
                self.domain, self.name
            )));
        }
        Ok(ScalarFunction {
            domain: *j,
            ..self.clone()
        })
    }

    /// Value at `t`; `t` must lie in the open domain and the value must be finite.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !self.domain.contains(t) {
            return Err(self.domain_error(vec![t]));
        }
        let v = self.raw(t);
        if !v.is_finite() {
            return Err(self.domain_error(vec![t]));
        }
        Ok(v)
    }

    fn raw(&self, t: f64) -> f64 {
        match self.kind {
            Kind::Identity => t,
            Kind::Constant(c) => c,
            Kind::Affine(a, b) => a * t + b,
            Kind::Square => t * t,
            Kind::Cube => t * t * t,
            Kind::Power(p) => t.powf(p),
            Kind::Inverse => 1.0 / t,
            Kind::NegLog => -t.ln(),
            Kind::Entropy => t * t.ln(),
            Kind::NegSqrt => -t.sqrt(),
            Kind::Abs => t.abs(),
        }
    }

    fn domain_error(&self, offending: Vec<f64>) -> Error {
        Error::DomainViolation {
            name: self.to_string(),
            domain: self.domain.to_string(),
            offending,
        }
    }

    /// `f(A)` from an existing decomposition of `A`.
    pub fn apply_decomposed(&self, dec: &SpectralDecomposition) -> Result<HermitianMatrix> {
        let offending: Vec<f64> = dec
            .eigenvalues
            .iter()
            .copied()
            .filter(|&l| !self.domain.contains(l) || !self.raw(l).is_finite())
            .collect();
        if !offending.is_empty() {
            return Err(self.domain_error(offending));
        }
        Ok(dec.map(|l| self.raw(l)))
    }
}

/// Functional calculus `f(A) = U f(Λ) U*`.
pub fn apply(f: &ScalarFunction, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    f.apply_decomposed(&eigh(a)?)
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, ":{}", ps.join(","))?;
        }
        Ok(())
    }
}

/// Parses `"name"` or `"name:p1,p2"`.
impl FromStr for ScalarFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (s.trim(), None),
        };
        let params = match rest {
            None => Vec::new(),
            Some(r) => r
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad parameter `{p}` in `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        make_function(name, &params)
    }
}

impl Serialize for ScalarFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// Piecewise constant function on a uniform subdivision `t_0 < … < t_m`.
///
/// Upper sums send `[t_i, t_{i+1})` to `t_{i+1}` and close the last piece at
/// `t_m`; lower sums send `(t_i, t_{i+1}]` to `t_i` and close the first piece at
/// `t_0`. So a tie at a breakpoint rounds up for upper sums and down for lower.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub side: Side,
}

impl StepFunction {
    /// Subdivides `[lo, hi]` at `lo, lo + mesh, lo + 2·mesh, …` and closes it
    /// at `hi`, so only the last piece may be shorter than `mesh`. Halving the
    /// mesh refines the subdivision: every breakpoint stays a breakpoint.
    pub fn on_hull(lo: f64, hi: f64, mesh: f64, side: Side) -> Result<Self> {
        if !(mesh > 0.0) || !mesh.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "mesh must be positive, got {mesh}"
            )));
        }
        if !(hi >= lo) {
            return Err(Error::InvalidArgument(format!("empty hull [{lo}, {hi}]")));
        }
        // A breakpoint within this distance of `hi` is merged into it.
        let merge = 1e-12 * mesh.max(hi - lo);
        let mut breakpoints = vec![lo];
        let mut i = 1u64;
        loop {
            let t = lo + i as f64 * mesh;
            if t >= hi - merge {
                break;
            }
            breakpoints.push(t);
            i += 1;
        }
        breakpoints.push(hi);
        let pieces = breakpoints.len() - 1;
        let values = match side {
            Side::Upper => breakpoints[1..].to_vec(),
            Side::Lower => breakpoints[..pieces].to_vec(),
        };
        Ok(Self {
            breakpoints,
            values,
            side,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let last = self.breakpoints.len() - 1;
        match self.side {
            Side::Upper => {
                if t >= self.breakpoints[last] {
                    return self.breakpoints[last];
                }
                let i = self
                    .breakpoints
                    .partition_point(|&b| b <= t)
                    .saturating_sub(1);
                self.values[i.min(self.values.len() - 1)]
            }
            Side::Lower => {
                if t <= self.breakpoints[0] {
                    return self.breakpoints[0];
                }
                let i = self
                    .breakpoints
                    .partition_point(|&b| b < t)
                    .saturating_sub(1);
                self.values[i.min(self.values.len() - 1)]
            }
        }
    }
}

/// Upper (`A ≤ Y`) or lower (`Z ≤ A`) step approximant of `A` with subdivision
/// fineness at most `mesh` over the convex hull of the spectrum.
///
/// Every new eigenvalue is a breakpoint inside the hull, so the result keeps its
/// spectrum in `J` whenever `A` does.
pub fn step_approximant(
    a: &HermitianMatrix,
    mesh: f64,
    side: Side,
    j: &Interval,
) -> Result<HermitianMatrix> {
    if !(mesh > 0.0) || !mesh.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mesh must be positive, got {mesh}"
        )));
    }
    let dec = eigh(a)?;
    let outside: Vec<f64> = dec
        .eigenvalues
        .iter()
        .copied()
        .filter(|&l| !j.contains(l))
        .collect();
    if !outside.is_empty() {
        return Err(Error::DomainViolation {
            name: "step approximant".into(),
            domain: j.to_string(),
            offending: outside,
        });
    }
    if dec.max() <= dec.min() {
        return Ok(a.clone());
    }
    let step = StepFunction::on_hull(dec.min(), dec.max(), mesh, side)?;
    Ok(dec.map(|l| step.eval(l)))
}
