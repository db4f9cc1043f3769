//! Covariance/mean JSON interchange:
//! `{"modes": n, "mean": [...], "cov": [[...]]}` with the full row-major
//! matrix and values in shot-noise units (vacuum variance 1/4).

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use qndsim_core::GaussianState;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CovarianceFile {
    pub modes: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

impl CovarianceFile {
    pub fn from_state(state: &GaussianState) -> Self {
        Self {
            modes: state.num_modes(),
            mean: state.mean().iter().copied().collect(),
            cov: matrix_rows(state.cov()),
        }
    }

    /// Validates shape and physicality and returns the state.
    pub fn to_state(&self) -> Result<GaussianState> {
        let cov = self.matrix()?;
        let mean = DVector::from_row_slice(&self.mean);
        Ok(GaussianState::from_parts(mean, cov)?)
    }

    /// The covariance as a matrix, with shape checks only (no physicality).
    pub fn matrix(&self) -> Result<DMatrix<f64>> {
        let dim = 2 * self.modes;
        if self.mean.len() != dim {
            bail!("mean length {} does not match {} modes", self.mean.len(), self.modes);
        }
        if self.cov.len() != dim || self.cov.iter().any(|row| row.len() != dim) {
            bail!("cov must be a full {dim}x{dim} matrix");
        }
        let flat: Vec<f64> = self.cov.iter().flatten().copied().collect();
        Ok(DMatrix::from_row_slice(dim, dim, &flat))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading covariance file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing covariance file {}", path.display()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text + "\n")
            .with_context(|| format!("writing covariance file {}", path.display()))
    }
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
