//! Output-power tables for the five gate characterization panels: vacuum
//! inputs plus a coherent amplitude injected into each of the four input
//! quadratures in turn (11.0 dB on Alice's side, 12.5 dB on Bob's).
//!
//! Each row carries the modelled power of one output quadrature together
//! with three theory references: the ideal gate (infinite resource
//! squeezing), the classical feed-forward-only gate (zero squeezing), and
//! the finite-resource prediction.

use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{bail, Result};
use serde::Serialize;

use qndsim_core::conventions::{coherent_amplitude_for_power_db, r_from_squeezing_db};
use qndsim_core::protocol::{parallel_gate, ImperfectionConfig, RunMode};
use qndsim_core::{GaussianState, Quadrature};

/// Input level injected on Alice's side (dB above shot noise).
pub const INPUT_A_DB: f64 = 11.0;
/// Input level injected on Bob's side.
pub const INPUT_B_DB: f64 = 12.5;

pub const QUADRATURE_LABELS: [&str; 4] = ["x_alpha", "p_alpha", "x_beta", "p_beta"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    A,
    B,
    C,
    D,
    E,
}

impl FromStr for Panel {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Panel::A),
            "b" | "B" => Ok(Panel::B),
            "c" | "C" => Ok(Panel::C),
            "d" | "D" => Ok(Panel::D),
            "e" | "E" => Ok(Panel::E),
            other => bail!("unknown panel `{other}` (expected a..e)"),
        }
    }
}

impl Panel {
    pub fn letter(self) -> char {
        match self {
            Panel::A => 'a',
            Panel::B => 'b',
            Panel::C => 'c',
            Panel::D => 'd',
            Panel::E => 'e',
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Panel::A => "vacuum inputs",
            Panel::B => "coherent amplitude in x_A (11.0 dB)",
            Panel::C => "coherent amplitude in p_A (11.0 dB)",
            Panel::D => "coherent amplitude in x_B (12.5 dB)",
            Panel::E => "coherent amplitude in p_B (12.5 dB)",
        }
    }

    /// The two-mode input state this panel drives the gate with.
    pub fn input_state(self) -> GaussianState {
        let a = coherent_amplitude_for_power_db(INPUT_A_DB);
        let b = coherent_amplitude_for_power_db(INPUT_B_DB);
        let means = match self {
            Panel::A => [0.0, 0.0, 0.0, 0.0],
            Panel::B => [a, 0.0, 0.0, 0.0],
            Panel::C => [0.0, a, 0.0, 0.0],
            Panel::D => [0.0, 0.0, b, 0.0],
            Panel::E => [0.0, 0.0, 0.0, b],
        };
        GaussianState::coherent(2, &means).expect("two-mode coherent state")
    }
}

/// One output quadrature's modelled and reference powers, in dB re SNL.
#[derive(Debug, Clone, Serialize)]
pub struct FigureRow {
    pub quadrature: &'static str,
    pub measured_db: f64,
    pub theory_ideal_db: f64,
    pub theory_classical_db: f64,
    pub theory_resource_db: f64,
}

fn output_powers(
    input: &GaussianState,
    r: f64,
    imperfections: Option<&ImperfectionConfig>,
) -> Result<[f64; 4]> {
    let run = parallel_gate(input, r, RunMode::Analytic, imperfections)?;
    Ok([
        run.output.power_db(0, Quadrature::X)?,
        run.output.power_db(0, Quadrature::P)?,
        run.output.power_db(1, Quadrature::X)?,
        run.output.power_db(1, Quadrature::P)?,
    ])
}

/// Computes the four rows of one panel at the given resource level.
/// `imperfections` feed only the `measured_db` column; the three theory
/// columns are always loss-free.
pub fn fig3_table(
    panel: Panel,
    resource_db: f64,
    imperfections: Option<&ImperfectionConfig>,
) -> Result<[FigureRow; 4]> {
    if resource_db > 0.0 || !resource_db.is_finite() {
        bail!("resource_db must be a finite value ≤ 0, got {resource_db}");
    }
    let input = panel.input_state();
    let r = r_from_squeezing_db(resource_db);
    let measured = output_powers(&input, r, imperfections)?;
    let resource = output_powers(&input, r, None)?;
    let ideal = output_powers(&input, f64::INFINITY, None)?;
    let classical = output_powers(&input, 0.0, None)?;

    let mut rows = Vec::with_capacity(4);
    for k in 0..4 {
        rows.push(FigureRow {
            quadrature: QUADRATURE_LABELS[k],
            measured_db: measured[k],
            theory_ideal_db: ideal[k],
            theory_classical_db: classical[k],
            theory_resource_db: resource[k],
        });
    }
    Ok(rows.try_into().expect("four rows"))
}

/// CSV rendering with a documented header; values keep full precision
/// (rounding happens only at display time, never in stored artifacts).
pub fn fig3_csv(panel: Panel, resource_db: f64, rows: &[FigureRow; 4]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# output quadrature powers in dB relative to the shot noise level (SNL = 1/4)"
    );
    let _ = writeln!(
        out,
        "# panel {}: {}; resource squeezing {} dB",
        panel.letter(),
        panel.description(),
        resource_db
    );
    let _ = writeln!(
        out,
        "quadrature,measured_db,theory_ideal_db,theory_classical_db,theory_resource_db"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.quadrature,
            row.measured_db,
            row.theory_ideal_db,
            row.theory_classical_db,
            row.theory_resource_db
        );
    }
    out
}
