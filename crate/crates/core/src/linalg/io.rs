use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// On-disk matrix: `{"n": 2, "re": [[0, 2], [0, 0]], "im": [[0, 0], [0, 0]]}`.
/// `im` may be omitted for real matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        check_rows("re", &self.re, n)?;
        if let Some(im) = &self.im {
            check_rows("im", im, n)?;
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
                entries.push(Complex64::new(self.re[i][j], im));
            }
        }
        ComplexMatrix::new(n, entries)
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.n();
        let re = (0..n).map(|i| m.row(i).iter().map(|z| z.re).collect()).collect();
        let im = (0..n).map(|i| m.row(i).iter().map(|z| z.im).collect()).collect();
        Self { n, re, im: Some(im) }
    }

    pub fn parse(text: &str) -> Result<ComplexMatrix> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_matrix()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Canonical compact JSON, used for hashing.
    pub fn to_json(m: &ComplexMatrix) -> String {
        serde_json::to_string(&Self::from_matrix(m)).expect("matrix serializes")
    }
}

fn check_rows(name: &str, rows: &[Vec<f64>], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    if rows.len() != n {
        return Err(Error::Parse(format!("\"{name}\" has {} rows, expected {n}", rows.len())));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(Error::Parse(format!(
            "\"{name}\" row {i} has {} entries, expected {n}",
            rows[i].len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_real_only_file() {
        let m = MatrixFile::parse(r#"{"n": 2, "re": [[0, 2], [0, 0]]}"#).unwrap();
        assert_eq!(m, ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap());
    }

    #[test]
    fn parses_complex_file_and_round_trips() {
        let text = r#"{"n": 1, "re": [[1.5]], "im": [[-2]]}"#;
        let m = MatrixFile::parse(text).unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(1.5, -2.0));
        assert_eq!(MatrixFile::parse(&MatrixFile::to_json(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(MatrixFile::parse(r#"{"n": 2, "re": [[0, 2], [0]]}"#).is_err());
        assert!(MatrixFile::parse(r#"{"n": 2, "re": [[0, 2]]}"#).is_err());
        assert!(MatrixFile::parse(r#"{"n": 0, "re": []}"#).is_err());
        assert!(MatrixFile::parse("not json").is_err());
    }
}
