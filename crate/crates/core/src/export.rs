//! JSON form of square exact matrices:
//! `{"type": "rational" | "gaussian", "dim": n, "entries": [...]}` with the
//! n² entries in row-major order, rationals as `"p/q"` strings and Gaussian
//! rationals as `{"re": "p/q", "im": "p/q"}`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{GaussianRational, Matrix, Rational, Scalar};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("only square matrices are exported ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected type `{expected}`, found `{found}`")]
    WrongType { expected: &'static str, found: String },
    #[error("dim {dim} needs {expected} entries, found {found}")]
    EntryCount { dim: usize, expected: usize, found: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub trait ExportScalar: Scalar + Serialize + DeserializeOwned {
    const TYPE_NAME: &'static str;
}

impl ExportScalar for Rational {
    const TYPE_NAME: &'static str = "rational";
}

impl ExportScalar for GaussianRational {
    const TYPE_NAME: &'static str = "gaussian";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixExport<T> {
    #[serde(rename = "type")]
    pub kind: String,
    pub dim: usize,
    pub entries: Vec<T>,
}

impl<T: ExportScalar> MatrixExport<T> {
    pub fn from_matrix(m: &Matrix<T>) -> Result<Self, ExportError> {
        if !m.is_square() {
            return Err(ExportError::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        Ok(Self { kind: T::TYPE_NAME.to_string(), dim: m.rows(), entries: m.entries().to_vec() })
    }

    pub fn to_matrix(&self) -> Result<Matrix<T>, ExportError> {
        if self.kind != T::TYPE_NAME {
            return Err(ExportError::WrongType { expected: T::TYPE_NAME, found: self.kind.clone() });
        }
        let expected = self.dim * self.dim;
        if self.entries.len() != expected {
            return Err(ExportError::EntryCount { dim: self.dim, expected, found: self.entries.len() });
        }
        Ok(Matrix::from_fn(self.dim, self.dim, |i, j| self.entries[i * self.dim + j].clone()))
    }
}

pub fn matrix_to_json<T: ExportScalar>(m: &Matrix<T>) -> Result<serde_json::Value, ExportError> {
    Ok(serde_json::to_value(MatrixExport::from_matrix(m)?)?)
}

pub fn matrix_from_json<T: ExportScalar>(v: &serde_json::Value) -> Result<Matrix<T>, ExportError> {
    let kind = v.get("type").and_then(serde_json::Value::as_str).unwrap_or_default();
    if kind != T::TYPE_NAME {
        return Err(ExportError::WrongType { expected: T::TYPE_NAME, found: kind.to_string() });
    }
    MatrixExport::<T>::deserialize(v)?.to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{CMatrix, QMatrix};
    use proptest::prelude::*;
    use serde_json::json;

    #[test]
    fn rational_layout() {
        let m = QMatrix::from_rows(vec![
            vec![Rational::new(1, 2), Rational::from_integer(-3)],
            vec![Rational::zero(), Rational::new(7, 9)],
        ]);
        let v = matrix_to_json(&m).unwrap();
        assert_eq!(v, json!({"type": "rational", "dim": 2, "entries": ["1/2", "-3/1", "0/1", "7/9"]}));
        assert_eq!(matrix_from_json::<Rational>(&v).unwrap(), m);
    }

    #[test]
    fn gaussian_layout() {
        let m = CMatrix::scalar(1, GaussianRational::new(Rational::zero(), Rational::new(1, 2)));
        let v = matrix_to_json(&m).unwrap();
        assert_eq!(v["entries"][0], json!({"re": "0/1", "im": "1/2"}));
        assert_eq!(matrix_from_json::<GaussianRational>(&v).unwrap(), m);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            matrix_from_json::<GaussianRational>(&json!({"type": "rational", "dim": 1, "entries": ["1"]})),
            Err(ExportError::WrongType { .. })
        ));
        assert!(matches!(
            matrix_from_json::<Rational>(&json!({"type": "rational", "dim": 2, "entries": ["1"]})),
            Err(ExportError::EntryCount { .. })
        ));
        assert!(matches!(
            MatrixExport::from_matrix(&QMatrix::zeros(1, 2)),
            Err(ExportError::NotSquare { .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip(entries in prop::collection::vec((any::<i64>(), 1i64..i64::MAX), 9)) {
            let m = QMatrix::from_fn(3, 3, |i, j| {
                let (p, q) = entries[i * 3 + j];
                Rational::new(p, q)
            });
            let text = serde_json::to_string(&matrix_to_json(&m).unwrap()).unwrap();
            let back: serde_json::Value = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(matrix_from_json::<Rational>(&back).unwrap(), m);
        }
    }
}
