//! `qndsim`: simulate the parallel nonlocal QND sum gate and regenerate
//! the published figures of merit.
//!
//! Exit codes: 0 success, 2 configuration/input error, 3 unphysical state
//! detected.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use qndsim_cli::artifacts::{samples_csv, CompareReport, NegativityReport, ProtocolResultFile};
use qndsim_cli::config::{ImperfectionsFile, RunConfig};
use qndsim_cli::covio::CovarianceFile;
use qndsim_cli::estimate::{estimate_covariance, estimate_from_matrix};
use qndsim_cli::fig3::{fig3_csv, fig3_table, Panel};
use qndsim_core::conventions::r_from_squeezing_db;
use qndsim_core::protocol::{compare_schemes, ImperfectionConfig};

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "QNDSIM_OUT";

#[derive(Parser)]
#[command(name = "qndsim", version, about = "Gaussian simulator of a two-node nonlocal QND sum gate")]
struct Cli {
    /// Output directory for generated files (default: $QNDSIM_OUT or `.`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Output-power table for one characterization panel (a..e)
    Fig3 {
        #[arg(long)]
        panel: String,
        /// Resource squeezing in dB (≤ 0), e.g. -4
        #[arg(long, allow_negative_numbers = true)]
        resource_db: f64,
        /// Optional imperfections JSON feeding the measured_db column
        #[arg(long)]
        imperfections: Option<PathBuf>,
    },
    /// Estimate the output covariance from a run config, or evaluate a
    /// covariance file directly
    Covmatrix {
        #[arg(long, conflicts_with = "cov")]
        config: Option<PathBuf>,
        #[arg(long)]
        cov: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Logarithmic negativity and physicality of a covariance file
    Negativity {
        #[arg(long)]
        cov: PathBuf,
    },
    /// Resource/noise/entanglement table: parallel vs sequential scheme
    Compare {
        #[arg(long, allow_negative_numbers = true)]
        resource_db: f64,
    },
    /// Run the protocol described by a config file
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// 3 for unphysical-state detection, 2 for everything else (config/IO).
fn classify(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<qndsim_core::Error>() {
            if matches!(
                core,
                qndsim_core::Error::Unphysical { .. }
                    | qndsim_core::Error::NotPositiveDefinite { .. }
            ) {
                return 3;
            }
        }
        if cause.to_string().starts_with("unphysical") {
            return 3;
        }
    }
    2
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn dispatch(cli: &Cli) -> Result<()> {
    let dir = out_dir(cli);
    match &cli.command {
        Command::Fig3 { panel, resource_db, imperfections } => {
            let panel: Panel = panel.parse()?;
            let imperfections: Option<ImperfectionConfig> = match imperfections {
                Some(path) => Some((&ImperfectionsFile::read(path)?).into()),
                None => None,
            };
            let rows = fig3_table(panel, *resource_db, imperfections.as_ref())?;
            let csv = fig3_csv(panel, *resource_db, &rows);
            let path =
                write_artifact(&dir, &format!("fig3_panel_{}.csv", panel.letter()), &csv)?;
            print!("{csv}");
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        Command::Covmatrix { config, cov, samples, seed } => {
            let (estimate, raw) = match (config, cov) {
                (Some(path), None) => {
                    let config = RunConfig::read(path)?;
                    estimate_covariance(&config, *samples, *seed)?
                }
                (None, Some(path)) => (estimate_from_matrix(&CovarianceFile::read(path)?)?, None),
                _ => anyhow::bail!("covmatrix needs exactly one of --config or --cov"),
            };
            let json = serde_json::to_string_pretty(&estimate)?;
            let path = write_artifact(&dir, "covariance_estimate.json", &(json.clone() + "\n"))?;
            println!("{json}");
            eprintln!("wrote {}", path.display());
            if let Some(raw) = raw {
                let csv_path = write_artifact(&dir, "covariance_samples.csv", &samples_csv(&raw))?;
                eprintln!("wrote {}", csv_path.display());
            }
            if !estimate.physical {
                anyhow::bail!("unphysical covariance estimate");
            }
            Ok(())
        }
        Command::Negativity { cov } => {
            let report = NegativityReport::from_covariance(&CovarianceFile::read(cov)?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.physical {
                anyhow::bail!("unphysical covariance: {}", cov.display());
            }
            Ok(())
        }
        Command::Compare { resource_db } => {
            anyhow::ensure!(
                *resource_db <= 0.0 && resource_db.is_finite(),
                "resource_db must be a finite value ≤ 0, got {resource_db}"
            );
            let input = qndsim_core::GaussianState::vacuum(2)?;
            let comparison = compare_schemes(&input, r_from_squeezing_db(*resource_db))?;
            let report = CompareReport::new(*resource_db, &comparison);
            print!("{}", report.table());
            let json = serde_json::to_string_pretty(&report)? + "\n";
            let path = write_artifact(&dir, "compare.json", &json)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        Command::Run { config, samples, seed } => {
            let config = RunConfig::read(config)?;
            let input = config.input_state()?;
            let imperfections = config.imperfection_config();
            let mode = config.run_mode(*samples, *seed)?;
            let result = qndsim_core::protocol::parallel_gate(
                &input,
                config.resource_r(),
                mode,
                imperfections.as_ref(),
            )?;
            let file = ProtocolResultFile::new(config.resource_db, &result);
            let json = serde_json::to_string_pretty(&file)?;
            let path = write_artifact(&dir, "protocol_result.json", &(json.clone() + "\n"))?;
            println!("{json}");
            eprintln!("wrote {}", path.display());
            if let Some(raw) = &result.samples {
                let csv_path = write_artifact(&dir, "protocol_samples.csv", &samples_csv(raw))?;
                eprintln!("wrote {}", csv_path.display());
            }
            Ok(())
        }
    }
}
