//! JSON interchange format for density matrices.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use nonclass::{ComplexMatrix, DensityOperator};

use crate::error::CliError;

/// `matrix[i][j] = [re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl StateFile {
    pub fn from_state(rho: &DensityOperator, metadata: BTreeMap<String, String>) -> Self {
        let m = rho.matrix();
        let matrix = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect();
        Self {
            dims: [rho.dim_a(), rho.dim_b()],
            matrix,
            metadata,
        }
    }

    pub fn to_state(&self) -> Result<DensityOperator, CliError> {
        let [m, n] = self.dims;
        let dim = m * n;
        if dim == 0 {
            return Err(CliError::InvalidState("dims must be positive".into()));
        }
        if self.matrix.len() != dim {
            return Err(CliError::InvalidState(format!(
                "matrix has {} rows, dims {m}x{n} need {dim}",
                self.matrix.len()
            )));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(CliError::InvalidState(format!(
                "row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        let mat = ComplexMatrix::from_fn(dim, dim, |i, j| {
            let [re, im] = self.matrix[i][j];
            Complex64::new(re, im)
        });
        DensityOperator::new(m, n, mat).map_err(|e| CliError::InvalidState(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::InvalidState(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::InvalidState(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }
}
