use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite stand-in for an infinite interval end when sampling.
pub const EFFECTIVE_BOUND: f64 = 1e3;

/// Relative (or, for truncated ends, absolute) distance kept between sampled
/// spectra and the interval ends.
pub const INTERIOR_MARGIN_FRACTION: f64 = 1e-3;

/// Open real interval `(lo, hi)`; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    #[serde(serialize_with = "ser_end")]
    lo: f64,
    #[serde(serialize_with = "ser_end")]
    hi: f64,
}

#[derive(Deserialize)]
struct RawInterval {
    #[serde(deserialize_with = "de_end")]
    lo: f64,
    #[serde(deserialize_with = "de_end")]
    hi: f64,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;

    fn try_from(raw: RawInterval) -> Result<Self> {
        Interval::new(raw.lo, raw.hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn positive() -> Self {
        Self {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Open-interval membership.
    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.lo >= self.lo && other.hi <= self.hi
    }

    /// Infinite ends replaced by `∓EFFECTIVE_BOUND`. A finite end beyond the
    /// bound on the same side is kept as is.
    pub fn effective_bounds(&self) -> (f64, f64) {
        let lo = if self.lo.is_finite() {
            self.lo
        } else {
            (-EFFECTIVE_BOUND).min(self.hi - EFFECTIVE_BOUND)
        };
        let hi = if self.hi.is_finite() {
            self.hi
        } else {
            EFFECTIVE_BOUND.max(self.lo + EFFECTIVE_BOUND)
        };
        (lo, hi)
    }

    pub fn interior_margin(&self) -> f64 {
        if self.is_bounded() {
            INTERIOR_MARGIN_FRACTION * (self.hi - self.lo)
        } else {
            INTERIOR_MARGIN_FRACTION
        }
    }

    /// Closed sampling range `[lo_eff + margin, hi_eff − margin]`.
    pub fn sampling_range(&self) -> (f64, f64) {
        let (lo, hi) = self.effective_bounds();
        let m = self.interior_margin();
        (lo + m, hi - m)
    }

    pub fn intersect(&self, other: &Interval) -> Result<Interval> {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            end_to_string(self.lo),
            end_to_string(self.hi)
        )
    }
}

/// Parses `"lo,hi"` where each end is a number or `-inf` / `+inf` / `inf`.
impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("interval `{s}` is not of the form lo,hi")))?;
        Interval::new(parse_end(lo)?, parse_end(hi)?)
    }
}

fn parse_end(s: &str) -> Result<f64> {
    match s.trim() {
        "-inf" => Ok(f64::NEG_INFINITY),
        "+inf" | "inf" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Parse(format!("bad interval end `{other}`"))),
    }
}

fn end_to_string(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == f64::INFINITY {
        "+inf".to_string()
    } else {
        x.to_string()
    }
}

fn ser_end<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&end_to_string(*x))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum End {
    Num(f64),
    Text(String),
}

fn de_end<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    match End::deserialize(d)? {
        End::Num(x) => Ok(x),
        End::Text(t) => parse_end(&t).map_err(de::Error::custom),
    }
}
