//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for unreadable or invalid input, 3 when the
//! input is valid but the kinematics problem has no solution.

pub mod files;
pub mod output;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::fk_nonsingular::fk_solve;
use crate::fk_singular::{build_singular_system, sweep, Parameterization};
use crate::ik::leg_lengths;
use output::{
    format_number, recomputed_residual, round_all, round_sig, ConicOut, FkReport, LengthsOut,
    SolutionOut, SweepReport,
};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

/// Header of the sweep CSV.
pub const CSV_HEADER: &str = "w1,branch_rot,branch_pos,q0,q1,q2,q3,x,y,z,feasible,residual";

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl ToString) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    pub fn infeasible(message: impl ToString) -> Self {
        CliError {
            code: EXIT_INFEASIBLE,
            message: message.to_string(),
        }
    }

    fn from_solver(e: Error) -> Self {
        if e.is_infeasibility() {
            Self::infeasible(e)
        } else {
            Self::input(e)
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

/// Kinematics of a Stewart platform whose top plate is a rotated,
/// contracted copy of its base.
///
/// Geometry files hold either `base` (six [x, y] pairs) or `circle_angles`
/// (six angles in radians on the unit circle; rescale lengths for other
/// radii), an optional 3x3 orthogonal `A` (default identity) and a
/// required `mu` in (0, 1).
#[derive(Debug, Parser)]
#[command(name = "stewart", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leg lengths of a pose.
    Ik {
        #[arg(long)]
        geom: PathBuf,
        #[arg(long)]
        pose: PathBuf,
    },
    /// All poses matching a set of leg lengths (base not on a conic).
    Fk {
        #[arg(long)]
        geom: PathBuf,
        #[arg(long)]
        legs: PathBuf,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Sample the self-motion family of a conic base into a CSV file.
    Sweep {
        #[arg(long)]
        geom: PathBuf,
        #[arg(long)]
        legs: PathBuf,
        #[arg(long = "w1-min", allow_hyphen_values = true)]
        w1_min: f64,
        #[arg(long = "w1-max", allow_hyphen_values = true)]
        w1_max: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Test whether the base vertices share a conic.
    Check {
        #[arg(long)]
        geom: PathBuf,
    },
}

/// Runs one command and returns what it prints on standard output.
pub fn run(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Ik { geom, pose } => cmd_ik(geom, pose),
        Command::Fk { geom, legs, timing } => cmd_fk(geom, legs, *timing),
        Command::Sweep {
            geom,
            legs,
            w1_min,
            w1_max,
            samples,
            out,
            timing,
        } => cmd_sweep(geom, legs, *w1_min, *w1_max, *samples, out, *timing),
        Command::Check { geom } => cmd_check(geom),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn elapsed(start: Instant, enabled: bool) -> Option<f64> {
    enabled.then(|| start.elapsed().as_secs_f64() * 1e3)
}

pub fn cmd_ik(geom: &Path, pose: &Path) -> Result<String, CliError> {
    let geom = files::load_geometry(geom)?;
    let pose = files::load_pose(pose)?;
    let lengths = leg_lengths(&geom, &pose).map_err(CliError::input)?;
    Ok(to_json(&LengthsOut {
        l: round_all(lengths.0),
    }))
}

pub fn cmd_fk(geom: &Path, legs: &Path, timing: bool) -> Result<String, CliError> {
    let start = Instant::now();
    let geom = files::load_geometry(geom)?;
    let lengths = files::load_lengths(legs)?;
    let report = geom.conic_check();
    let conic = ConicOut::from(&report);

    match report.numerical_rank {
        6 => {}
        5 => {
            build_singular_system(&geom, &lengths).map_err(CliError::from_solver)?;
            return Ok(to_json(&FkReport {
                command: "fk",
                conic,
                mode: "singular",
                message: Some(
                    "base lies on a conic: the leg lengths admit a one-parameter family of poses; use sweep"
                        .to_string(),
                ),
                solutions: None,
                max_residual: None,
                elapsed_ms: elapsed(start, timing),
            }));
        }
        rank => return Err(CliError::from_solver(Error::DegenerateBase { rank })),
    }

    let solutions = fk_solve(&geom, &lengths).map_err(CliError::from_solver)?;
    if solutions.is_empty() {
        return Err(CliError::infeasible("no pose reproduces the leg lengths"));
    }
    let out: Vec<SolutionOut> = solutions
        .iter()
        .map(|s| SolutionOut::new(&geom, &lengths, s))
        .collect();
    let max_residual = out.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(to_json(&FkReport {
        command: "fk",
        conic,
        mode: "nonsingular",
        message: None,
        solutions: Some(out),
        max_residual: Some(max_residual),
        elapsed_ms: elapsed(start, timing),
    }))
}

pub fn cmd_sweep(
    geom_path: &Path,
    legs: &Path,
    w1_min: f64,
    w1_max: f64,
    samples: usize,
    out: &Path,
    timing: bool,
) -> Result<String, CliError> {
    let start = Instant::now();
    let geom = files::load_geometry(geom_path)?;
    let lengths = files::load_lengths(legs)?;
    let report = geom.conic_check();
    if report.numerical_rank == 6 {
        return Err(CliError::infeasible("base not on a conic; use fk"));
    }
    let system = build_singular_system(&geom, &lengths).map_err(CliError::from_solver)?;
    let curve = sweep(&system, &geom, w1_min, w1_max, samples).map_err(CliError::input)?;

    let mut csv = String::with_capacity(64 * samples);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    let mut rows = 0;
    let mut feasible = 0;
    let mut max_residual: Option<f64> = None;
    for sample in &curve {
        let parameter = format_number(sample.parameter);
        if !sample.feasible {
            writeln!(csv, "{parameter},,,,,,,,,,0,").expect("write to string");
            rows += 1;
            continue;
        }
        feasible += 1;
        for s in &sample.poses {
            let residual = round_sig(recomputed_residual(&geom, &lengths, s));
            max_residual = Some(max_residual.map_or(residual, |m| m.max(residual)));
            let [q0, q1, q2, q3] = s.pose.orientation.components();
            let cells = [q0, q1, q2, q3, s.pose.position.x, s.pose.position.y, s.pose.position.z]
                .map(format_number)
                .join(",");
            writeln!(
                csv,
                "{parameter},{},{},{cells},1,{}",
                s.rotation_index,
                s.position_branch.symbol(),
                format_number(residual)
            )
            .expect("write to string");
            rows += 1;
        }
    }
    fs::write(out, csv)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", out.display())))?;

    Ok(to_json(&SweepReport {
        command: "sweep",
        conic: ConicOut::from(&report),
        parameterization: match system.parameterization() {
            Parameterization::W1 => "w1",
            Parameterization::ArcLength => "arc_length",
        },
        w1_min: round_sig(w1_min),
        w1_max: round_sig(w1_max),
        samples: curve.len(),
        feasible,
        rows,
        max_residual,
        out: out.display().to_string(),
        elapsed_ms: elapsed(start, timing),
    }))
}

pub fn cmd_check(geom: &Path) -> Result<String, CliError> {
    let geom = files::load_geometry(geom)?;
    Ok(to_json(&ConicOut::from(&geom.conic_check())))
}
