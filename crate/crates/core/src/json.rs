//! The shared matrix JSON format:
//! `{"dim": n, "entries": [[[re, im], ...], ...]}` with one inner array per row.
//! Non-square matrices use `"rows"` and `"cols"` instead of `"dim"`.

use num_complex::Complex64;
use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::constructs::ContractionPair;
use crate::eigen::ProjectionFamily;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    cols: Option<usize>,
    entries: Vec<Vec<[f64; 2]>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let entries = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect();
        if m.is_square() {
            Self {
                dim: Some(m.rows()),
                rows: None,
                cols: None,
                entries,
            }
        } else {
            Self {
                dim: None,
                rows: Some(m.rows()),
                cols: Some(m.cols()),
                entries,
            }
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let rows = j.dim.or(j.rows).unwrap_or(j.entries.len());
        let cols = j
            .dim
            .or(j.cols)
            .unwrap_or_else(|| j.entries.first().map_or(0, Vec::len));
        if j.entries.len() != rows || j.entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!(
                "matrix entries do not form a {rows}x{cols} array"
            )));
        }
        let data = j
            .entries
            .into_iter()
            .flatten()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(rows, cols, data)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        ComplexMatrix::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_matrix().serialize(s)
    }
}

/// Hermiticity is validated on load.
impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        HermitianMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// Written as `{"c": <matrix>, "d": <matrix>}`.
impl Serialize for ContractionPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pair<'a> {
            c: &'a ComplexMatrix,
            d: &'a ComplexMatrix,
        }
        Pair {
            c: self.c(),
            d: self.d(),
        }
        .serialize(s)
    }
}

/// Written as the list of its projections.
impl Serialize for ProjectionFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.projections().serialize(s)
    }
}

pub fn hermitian_from_json(text: &str) -> Result<HermitianMatrix> {
    let m: ComplexMatrix = serde_json::from_str(text)?;
    HermitianMatrix::new(m)
}

pub fn hermitian_to_json(m: &HermitianMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_the_documented_layout() {
        let text = r#"{"dim": 2, "entries": [[[1, 0], [0, 2]], [[0, -2], [3, 0]]]}"#;
        let h = hermitian_from_json(text).unwrap();
        assert_eq!(h.as_matrix()[(0, 1)], Complex64::new(0.0, 2.0));
        assert_eq!(h.as_matrix()[(1, 1)], Complex64::new(3.0, 0.0));
        let back = hermitian_from_json(&hermitian_to_json(&h)).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn rejects_non_hermitian_and_ragged() {
        let text = r#"{"dim": 2, "entries": [[[1, 0], [1, 0]], [[0, 0], [3, 0]]]}"#;
        assert!(matches!(
            hermitian_from_json(text),
            Err(Error::NotHermitian { .. })
        ));
        let ragged = r#"{"dim": 2, "entries": [[[1, 0]], [[0, 0], [3, 0]]]}"#;
        assert!(hermitian_from_json(ragged).is_err());
        assert!(hermitian_from_json("{").is_err());
    }

    #[test]
    fn non_square_uses_rows_and_cols() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 3.0]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(r#"{"rows":1,"cols":3"#));
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
