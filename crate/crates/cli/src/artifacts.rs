//! Serializable report shapes and CSV writers for the CLI subcommands.

use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;

use qndsim_core::entanglement::{is_physical, log_negativity, TwoModeCovariance};
use qndsim_core::protocol::{
    ProtocolResult, ResourceLedger, RunMode, Scheme, SchemeComparison, TrajectorySample,
};

use crate::covio::CovarianceFile;

/// Output of `negativity`: the figures plus the physicality verdict.
#[derive(Debug, Clone, Serialize)]
pub struct NegativityReport {
    pub physical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_negativity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_tilde_minus: Option<f64>,
}

impl NegativityReport {
    pub fn from_covariance(file: &CovarianceFile) -> Result<Self> {
        let cov = file.matrix()?;
        if !is_physical(&cov, 1e-9) {
            return Ok(Self { physical: false, log_negativity: None, nu_tilde_minus: None });
        }
        let result = log_negativity(&TwoModeCovariance::from_matrix(cov)?)?;
        Ok(Self {
            physical: true,
            log_negativity: Some(result.log_negativity),
            nu_tilde_minus: Some(result.nu_tilde_minus),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerFile {
    pub epr_pairs_consumed: u32,
    pub classical_reals_sent: u32,
    pub communication_rounds: u32,
}

impl From<ResourceLedger> for LedgerFile {
    fn from(l: ResourceLedger) -> Self {
        Self {
            epr_pairs_consumed: l.epr_pairs_consumed,
            classical_reals_sent: l.classical_reals_sent,
            communication_rounds: l.communication_rounds,
        }
    }
}

/// Output of `compare`: both schemes' ledgers, entanglement, and added
/// noise (in the exact-QND frame) side by side.
#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub resource_db: f64,
    pub parallel: SchemeReport,
    pub sequential: SchemeReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemeReport {
    pub ledger: LedgerFile,
    pub log_negativity: f64,
    pub added_noise_variances: [f64; 4],
}

impl CompareReport {
    pub fn new(resource_db: f64, comparison: &SchemeComparison) -> Self {
        Self {
            resource_db,
            parallel: SchemeReport {
                ledger: comparison.parallel.ledger.into(),
                log_negativity: comparison.parallel.log_negativity,
                added_noise_variances: comparison.parallel.added_noise_variances,
            },
            sequential: SchemeReport {
                ledger: comparison.sequential.ledger.into(),
                log_negativity: comparison.sequential.log_negativity,
                added_noise_variances: comparison.sequential.added_noise_variances,
            },
        }
    }

    /// Human-readable table for stdout.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scheme      EPR  reals  rounds  E_N      added noise (x_a p_a x_b p_b)");
        for (name, s) in [("parallel", &self.parallel), ("sequential", &self.sequential)] {
            let _ = writeln!(
                out,
                "{name:<11} {:<4} {:<6} {:<7} {:<8.4} {:.4} {:.4} {:.4} {:.4}",
                s.ledger.epr_pairs_consumed,
                s.ledger.classical_reals_sent,
                s.ledger.communication_rounds,
                s.log_negativity,
                s.added_noise_variances[0],
                s.added_noise_variances[1],
                s.added_noise_variances[2],
                s.added_noise_variances[3],
            );
        }
        out
    }
}

/// Output of `run`: resources, run parameters, and the output moments.
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolResultFile {
    pub scheme: &'static str,
    pub mode: &'static str,
    pub resource_db: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub ledger: LedgerFile,
    pub output: CovarianceFile,
}

impl ProtocolResultFile {
    pub fn new(resource_db: f64, result: &ProtocolResult) -> Self {
        let (mode, seed, samples) = match result.mode {
            RunMode::Analytic => ("analytic", None, None),
            RunMode::MonteCarlo { seed, samples } => ("mc", Some(seed), Some(samples)),
        };
        Self {
            scheme: match result.scheme {
                Scheme::Parallel => "parallel",
                Scheme::Sequential => "sequential",
            },
            mode,
            resource_db,
            seed,
            samples,
            ledger: result.ledger.into(),
            output: CovarianceFile::from_state(&result.output),
        }
    }
}

/// Raw trajectories as CSV, one row per trajectory.
pub fn samples_csv(samples: &[TrajectorySample]) -> String {
    let mut out = String::from("trajectory,s_A,s_B,x_alpha,p_alpha,x_beta,p_beta\n");
    for (k, s) in samples.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            k,
            s.outcome_alice,
            s.outcome_bob,
            s.quadratures[0],
            s.quadratures[1],
            s.quadratures[2],
            s.quadratures[3]
        );
    }
    out
}
