//! Matrix JSON: `{"dim": d, "entries": [[[re, im], ...], ...]}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix<f64>) -> Self {
        Self {
            dim: m.dim(),
            entries: m.rows().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix<f64>> {
        if self.entries.len() != self.dim {
            return Err(Error::Parse(format!(
                "dim is {} but {} rows were given",
                self.dim,
                self.entries.len()
            )));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|[re, im]| Complex::new(*re, *im)).collect())
            .collect();
        ComplexMatrix::from_rows(rows)
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix<f64>> {
    let raw: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.to_matrix()
}

pub fn matrix_to_json(m: &ComplexMatrix<f64>) -> String {
    serde_json::to_string_pretty(&MatrixJson::from_matrix(m)).expect("serializable")
}

/// Vector JSON: `[[re, im], ...]`.
pub fn parse_vector(value: &serde_json::Value) -> Result<ComplexVector<f64>> {
    let raw: Vec<[f64; 2]> = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let v = ComplexVector::from_vec(raw.into_iter().map(|[re, im]| Complex::new(re, im)).collect());
    v.check_finite()?;
    Ok(v)
}

pub fn vector_to_json(v: &ComplexVector<f64>) -> serde_json::Value {
    serde_json::to_value(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let m = ComplexMatrix::from_fn(2, |i, j| Complex::new(i as f64 + 0.5, -(j as f64)));
        assert_eq!(parse_matrix(&matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_ragged_and_bad_dim() {
        assert!(parse_matrix(r#"{"dim":2,"entries":[[[1,0],[0,0]],[[0,0]]]}"#).is_err());
        assert!(parse_matrix(r#"{"dim":3,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#).is_err());
        assert!(parse_matrix(r#"{"dim":1,"entries":[[[1e999,0]]]}"#).is_err());
        assert!(parse_matrix("not json").is_err());
    }
}
