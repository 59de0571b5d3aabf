//! Matrix JSON format: `{"n": int, "re": [row-major], "im": [row-major]}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix<T: Real>(m: &Matrix<T>) -> Result<Self> {
        let n = m.square_dim()?;
        Ok(Self {
            n,
            re: m.as_slice().iter().map(|z| z.re.to_f64_lossy()).collect(),
            im: m.as_slice().iter().map(|z| z.im.to_f64_lossy()).collect(),
        })
    }

    pub fn to_matrix<T: Real>(&self) -> Result<Matrix<T>> {
        let len = self.n * self.n;
        for found in [self.re.len(), self.im.len()] {
            if found != len {
                return Err(Error::DimensionMismatch { expected: len, found });
            }
        }
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&r, &i)| Complex::new(T::lit(r), T::lit(i)))
            .collect();
        let m = Matrix::from_row_major(self.n, self.n, data)?;
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }
}

impl<T: Real> From<&Matrix<T>> for MatrixJson {
    /// Panics on non-square input; use [`MatrixJson::from_matrix`] to handle it.
    fn from(m: &Matrix<T>) -> Self {
        Self::from_matrix(m).expect("square matrix")
    }
}

pub fn matrix_to_json<T: Real>(m: &Matrix<T>) -> Result<String> {
    let j = MatrixJson::from_matrix(m)?;
    Ok(serde_json::to_string(&j).expect("plain data serializes"))
}

/// Parses the matrix JSON format. Syntax errors are reported separately
/// from shape errors so callers can map them to distinct exit codes.
pub fn matrix_from_json<T: Real>(s: &str) -> std::result::Result<Matrix<T>, MatrixParseError> {
    let j: MatrixJson = serde_json::from_str(s).map_err(|e| MatrixParseError::Syntax(e.to_string()))?;
    j.to_matrix().map_err(MatrixParseError::Shape)
}

impl<T: Real> Serialize for Matrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match MatrixJson::from_matrix(self) {
            Ok(j) => j.serialize(s),
            Err(_) => Err(serde::ser::Error::custom("only square matrices serialize")),
        }
    }
}

impl<'de, T: Real> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        j.to_matrix().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixParseError {
    #[error("malformed matrix JSON: {0}")]
    Syntax(String),
    #[error("{0}")]
    Shape(Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_format() {
        let m: Matrix<f64> = matrix_from_json(r#"{"n": 2, "re": [1, 0, 0, 0], "im": [0, 0, 0, -1]}"#).unwrap();
        assert_eq!(m[(0, 0)], Complex::new(1.0, 0.0));
        assert_eq!(m[(1, 1)], Complex::new(0.0, -1.0));
    }

    #[test]
    fn reports_syntax_and_shape_errors() {
        assert!(matches!(matrix_from_json::<f64>("{not json"), Err(MatrixParseError::Syntax(_))));
        assert!(matches!(
            matrix_from_json::<f64>(r#"{"n": 2, "re": [1, 0, 0], "im": [0, 0, 0, 0]}"#),
            Err(MatrixParseError::Shape(Error::DimensionMismatch { expected: 4, found: 3 }))
        ));
    }
}
