//! Number formatting and report records for the CLI.

use serde::Serialize;

use crate::fk_nonsingular::FkSolution;
use crate::geometry::{ConicReport, PlatformGeometry};
use crate::ik::{leg_lengths, LegLengths};

/// Significant digits kept in every emitted number.
pub const SIGNIFICANT_DIGITS: usize = 16;

/// Rounds to [`SIGNIFICANT_DIGITS`] so that the shortest round-trip
/// representation never carries more digits than that.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Text form for CSV cells: positional notation for moderate magnitudes,
/// exponent notation for very small or very large ones.
pub fn format_number(x: f64) -> String {
    let r = round_sig(x);
    let mag = r.abs();
    if r == 0.0 {
        "0".to_string()
    } else if (1e-5..1e16).contains(&mag) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn round_all<const N: usize>(v: [f64; N]) -> [f64; N] {
    v.map(round_sig)
}

#[derive(Debug, Serialize)]
pub struct LengthsOut {
    #[serde(rename = "L")]
    pub l: [f64; 6],
}

#[derive(Debug, Serialize)]
pub struct ConicOut {
    #[serde(rename = "detQ")]
    pub det_q: f64,
    pub rank: usize,
    pub on_conic: bool,
    pub conic: Option<[f64; 6]>,
}

impl From<&ConicReport> for ConicOut {
    fn from(r: &ConicReport) -> Self {
        ConicOut {
            det_q: round_sig(r.det_q),
            rank: r.numerical_rank,
            on_conic: r.on_conic,
            conic: r.conic_coefficients.map(|c| round_all(c.0)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolutionOut {
    pub rotation: u8,
    pub branch: &'static str,
    pub q: [f64; 4],
    #[serde(rename = "P")]
    pub p: [f64; 3],
    pub residual: f64,
}

/// Max leg-length deviation of `solution`, recomputed from its pose.
pub fn recomputed_residual(
    geom: &PlatformGeometry,
    lengths: &LegLengths,
    solution: &FkSolution,
) -> f64 {
    leg_lengths(geom, &solution.pose)
        .map(|l| l.max_deviation(lengths))
        .unwrap_or(f64::INFINITY)
}

impl SolutionOut {
    pub fn new(geom: &PlatformGeometry, lengths: &LegLengths, s: &FkSolution) -> Self {
        SolutionOut {
            rotation: s.rotation_index,
            branch: s.position_branch.symbol(),
            q: round_all(s.pose.orientation.components()),
            p: round_all(s.pose.position.to_array()),
            residual: round_sig(recomputed_residual(geom, lengths, s)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FkReport {
    pub command: &'static str,
    pub conic: ConicOut,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<SolutionOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub command: &'static str,
    pub conic: ConicOut,
    pub parameterization: &'static str,
    pub w1_min: f64,
    pub w1_max: f64,
    pub samples: usize,
    pub feasible: usize,
    pub rows: usize,
    pub max_residual: Option<f64>,
    pub out: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}
