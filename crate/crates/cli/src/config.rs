//! JSON run configuration for protocol simulations.
//!
//! ```json
//! {
//!   "resource_db": -4.0,
//!   "inputs": [{"type": "vacuum"}, {"type": "coherent", "means": [1.7, 0.0]}],
//!   "mode": "mc",
//!   "samples": 100000,
//!   "seed": 7,
//!   "imperfections": {"eta_paths": [1,1,1,1], "detector_eff": 0.99, "visibility": 0.97}
//! }
//! ```

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use qndsim_core::conventions::r_from_squeezing_db;
use qndsim_core::protocol::{ImperfectionConfig, RunMode};
use qndsim_core::GaussianState;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// Resource squeezing level in dB (≤ 0; −4.0 reproduces the experiment).
    pub resource_db: f64,
    /// Exactly two entries: Alice's input mode, then Bob's.
    pub inputs: Vec<InputSpec>,
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imperfections: Option<ImperfectionsFile>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Analytic,
    Mc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum InputSpec {
    Vacuum,
    /// Coherent state with mean quadratures `[x, p]`.
    Coherent { means: [f64; 2] },
}

/// Wire form of [`ImperfectionConfig`]; omitted knobs default to ideal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImperfectionsFile {
    /// Path transmissivities `[input A, input B, resource→Alice, resource→Bob]`.
    #[serde(default = "default_paths")]
    pub eta_paths: [f64; 4],
    #[serde(default = "default_unity")]
    pub detector_eff: f64,
    #[serde(default = "default_unity")]
    pub visibility: f64,
}

fn default_paths() -> [f64; 4] {
    [1.0; 4]
}

fn default_unity() -> f64 {
    1.0
}

impl From<&ImperfectionsFile> for ImperfectionConfig {
    fn from(file: &ImperfectionsFile) -> Self {
        ImperfectionConfig {
            path_transmissivities: file.eta_paths,
            detector_efficiency: file.detector_eff,
            visibility: file.visibility,
        }
    }
}

impl ImperfectionsFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading imperfections file {}", path.display()))?;
        let file: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing imperfections file {}", path.display()))?;
        ImperfectionConfig::from(&file).validate()?;
        Ok(file)
    }
}

impl RunConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.resource_db > 0.0 || !self.resource_db.is_finite() {
            bail!("resource_db must be a finite value ≤ 0, got {}", self.resource_db);
        }
        if self.inputs.len() != 2 {
            bail!("exactly two inputs required (Alice's and Bob's), got {}", self.inputs.len());
        }
        if self.mode == ModeName::Mc {
            if self.samples.is_none() {
                bail!("mc mode requires `samples`");
            }
            if self.seed.is_none() {
                bail!("mc mode requires an explicit `seed` for reproducibility");
            }
        }
        if let Some(imp) = &self.imperfections {
            ImperfectionConfig::from(imp).validate()?;
        }
        Ok(())
    }

    /// Squeezing parameter r of the resource.
    pub fn resource_r(&self) -> f64 {
        r_from_squeezing_db(self.resource_db)
    }

    /// Assembles the two-mode input state (Alice's mode first).
    pub fn input_state(&self) -> Result<GaussianState> {
        let mut means = [0.0; 4];
        for (k, input) in self.inputs.iter().enumerate() {
            if let InputSpec::Coherent { means: m } = input {
                means[2 * k] = m[0];
                means[2 * k + 1] = m[1];
            }
        }
        Ok(GaussianState::coherent(2, &means)?)
    }

    /// The core run mode, honoring CLI overrides for samples/seed.
    pub fn run_mode(&self, samples_override: Option<usize>, seed_override: Option<u64>) -> Result<RunMode> {
        match self.mode {
            ModeName::Analytic => Ok(RunMode::Analytic),
            ModeName::Mc => {
                let samples = samples_override
                    .or(self.samples)
                    .context("mc mode requires `samples`")?;
                let seed = seed_override.or(self.seed).context("mc mode requires `seed`")?;
                Ok(RunMode::MonteCarlo { seed, samples })
            }
        }
    }

    pub fn imperfection_config(&self) -> Option<ImperfectionConfig> {
        self.imperfections.as_ref().map(ImperfectionConfig::from)
    }
}
