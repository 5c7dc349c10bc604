//! File formats: matrix files as JSON `{rows, cols, entries: [[re, im], ..]}`
//! in row-major order with full round-trip precision, plus the match-result
//! schema. Verification reports serialize straight from the library types.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use mpkit::matrix::{from_rows, to_rows};
use mpkit::CMatrix;

use crate::CliError;

/// Generation provenance carried inside matrix files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub n: usize,
    pub rank: usize,
    pub skew: f64,
    pub seed: u64,
    pub trial: usize,
}

/// On-disk matrix representation. `entries` is row-major `[re, im]` pairs;
/// serde_json emits shortest round-trip decimal forms, so write-then-read
/// reproduces every entry bit-exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix, provenance: Option<Provenance>) -> Self {
        MatrixFile {
            rows: m.nrows(),
            cols: m.ncols(),
            entries: to_rows(m),
            provenance,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        from_rows(self.rows, self.cols, &self.entries)
            .map_err(|e| CliError::input(format!("invalid matrix data: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::input(format!(
                "{}: parse error at line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_json(path, self)
    }
}

/// Output of `mpkit match`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatchOutput {
    pub input: String,
    pub formula: String,
    pub m: MatrixFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_formula: Option<BTreeMap<String, MatrixFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_pairwise_dev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proj_residual: Option<f64>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::input(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mpkit::matrix::cr;
    use mpkit::C64;

    #[test]
    fn bit_exact_round_trip() {
        let awkward = [
            (std::f64::consts::PI, 1.0 / 3.0),
            (f64::MIN_POSITIVE, -2.2250738585072014e-308),
            (1e300, -0.1),
            (0.0, -0.0),
        ];
        let m = CMatrix::from_fn(2, 2, |i, j| {
            let (re, im) = awkward[i * 2 + j];
            C64::new(re, im)
        });
        let file = MatrixFile::from_matrix(&m, None);
        let text = serde_json::to_string(&file).unwrap();
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        let m2 = back.to_matrix().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m[(i, j)].re.to_bits(), m2[(i, j)].re.to_bits());
                assert_eq!(m[(i, j)].im.to_bits(), m2[(i, j)].im.to_bits());
            }
        }
    }

    #[test]
    fn rejects_malformed_entries() {
        let file = MatrixFile {
            rows: 2,
            cols: 2,
            entries: vec![(1.0, 0.0)],
            provenance: None,
        };
        assert!(file.to_matrix().is_err());
        let file = MatrixFile {
            rows: 1,
            cols: 1,
            entries: vec![(f64::NAN, 0.0)],
            provenance: None,
        };
        assert!(file.to_matrix().is_err());
    }

    #[test]
    fn schema_shape() {
        let m = CMatrix::from_fn(1, 2, |_, j| cr(j as f64));
        let file = MatrixFile::from_matrix(&m, None);
        let value = serde_json::to_value(&file).unwrap();
        assert_eq!(value["rows"], 1);
        assert_eq!(value["cols"], 2);
        assert_eq!(value["entries"][1][0], 1.0);
        assert!(value.get("provenance").is_none());
    }
}
