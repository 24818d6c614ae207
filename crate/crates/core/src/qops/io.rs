use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BipartiteDims, CMatrix, HermitianOperator};
use crate::error::{Error, Result};

/// On-disk operator: local dimensions plus real and imaginary parts as row-major arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub n: usize,
    pub m: usize,
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
}

impl OperatorFile {
    pub fn from_operator(op: &HermitianOperator, dims: BipartiteDims) -> Self {
        let d = op.dim();
        let rows = |f: fn(&Complex64) -> f64| {
            (0..d).map(|i| (0..d).map(|j| f(&op.matrix()[(i, j)])).collect()).collect()
        };
        Self { n: dims.n, m: dims.m, real: rows(|z| z.re), imag: rows(|z| z.im) }
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        let dims = BipartiteDims::new(self.n, self.m)?;
        let d = dims.total();
        let well_shaped = |a: &Vec<Vec<f64>>| a.len() == d && a.iter().all(|row| row.len() == d);
        if !well_shaped(&self.real) || !well_shaped(&self.imag) {
            return Err(Error::DimensionMismatch(format!(
                "operator arrays must be {d}x{d} for n={}, m={}",
                self.n, self.m
            )));
        }
        let m = CMatrix::from_fn(d, d, |i, j| Complex64::new(self.real[i][j], self.imag[i][j]));
        HermitianOperator::with_dims(m, dims)
    }
}

pub fn parse_operator(text: &str) -> Result<HermitianOperator> {
    let file: OperatorFile = serde_json::from_str(text)?;
    file.to_operator()
}

pub fn load_operator(path: impl AsRef<Path>) -> Result<HermitianOperator> {
    parse_operator(&std::fs::read_to_string(path)?)
}

pub fn save_operator(path: impl AsRef<Path>, op: &HermitianOperator, dims: BipartiteDims) -> Result<()> {
    let text = serde_json::to_string_pretty(&OperatorFile::from_operator(op, dims))?;
    std::fs::write(path, text)?;
    Ok(())
}
