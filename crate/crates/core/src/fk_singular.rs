//! Forward kinematics when the base vertices lie on a conic.
//!
//! `Q` then has rank five, so the solutions of `Q·w = d` form a line
//! `w = w_p + s·n` through a particular solution along the kernel direction
//! `n`. Fixing the leg lengths leaves a one-parameter family of poses: the
//! self-motion of the platform. The family is parameterized by `w₁ = PᵀP`
//! whenever `n₁ ≠ 0`, and by the signed distance `s` along the line otherwise.

use crate::error::{Error, Result};
use crate::fk_nonsingular::{poses_from_w, FkSolution};
use crate::geometry::PlatformGeometry;
use crate::ik::{d_from_lengths, DVector, LegLengths, WVector};
use crate::numkernel::{lu_factor, null_vector, solve_rank_deficient, LuFactorization, Vec6};

/// `|n₁|` at or below this disqualifies `w₁` as the family parameter.
pub const PARAMETERIZABLE_EPS: f64 = 1e-8;

/// Number of grid points in the feasibility scan.
pub const SCAN_POINTS: usize = 1000;

/// Width to which feasibility boundaries are bisected.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameterization {
    /// The parameter is `w₁ = PᵀP`.
    W1,
    /// The parameter is the coefficient `s` of the unit kernel direction.
    ArcLength,
}

/// The affine solution line of a rank-5 system `Q·w = d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSystem {
    pub factorization: LuFactorization,
    /// A point of the line. Its first coordinate is zero when the system is
    /// parameterizable by `w₁`; otherwise its free coordinate is zero.
    pub particular: WVector,
    /// Unit kernel direction of `Q`.
    pub null_dir: Vec6,
    pub parameterizable_by_w1: bool,
    pub d: DVector,
    pub lengths: LegLengths,
}

impl SingularSystem {
    pub fn parameterization(&self) -> Parameterization {
        if self.parameterizable_by_w1 {
            Parameterization::W1
        } else {
            Parameterization::ArcLength
        }
    }
}

pub fn build_singular_system(geom: &PlatformGeometry, lengths: &LegLengths) -> Result<SingularSystem> {
    let factorization = lu_factor(&geom.q_matrix());
    match factorization.rank() {
        5 => {}
        6 => {
            return Err(Error::WrongRank {
                expected: 5,
                found: 6,
            })
        }
        rank => return Err(Error::DegenerateBase { rank }),
    }
    let d = d_from_lengths(geom, lengths);
    let mut particular = solve_rank_deficient(&factorization, &d.0)?;
    let null_dir = null_vector(&factorization)?;
    let parameterizable_by_w1 = null_dir[0].abs() > PARAMETERIZABLE_EPS;
    if parameterizable_by_w1 {
        particular = particular - null_dir.scale(particular[0] / null_dir[0]);
        particular[0] = 0.0;
    }
    Ok(SingularSystem {
        factorization,
        particular: WVector(particular),
        null_dir,
        parameterizable_by_w1,
        d,
        lengths: *lengths,
    })
}

/// The point of the solution line whose first coordinate is `w1`.
pub fn w_at(system: &SingularSystem, w1: f64) -> Result<WVector> {
    if !system.parameterizable_by_w1 {
        return Err(Error::NotParameterizable);
    }
    if !(w1.is_finite() && w1 >= 0.0) {
        return Err(Error::InvalidParameter(format!("w1 = {w1} must be >= 0")));
    }
    // slope dw/dw1 formed per component so that exact ratios stay exact
    let n = &system.null_dir;
    let mut w = system.particular.0;
    for k in 1..6 {
        w[k] += w1 * (n[k] / n[0]);
    }
    w[0] = w1;
    Ok(WVector(w))
}

/// The point `particular + s·n` of the solution line.
pub fn w_along(system: &SingularSystem, s: f64) -> WVector {
    WVector(system.particular.0 + system.null_dir.scale(s))
}

fn w_for(system: &SingularSystem, parameter: f64) -> Result<WVector> {
    match system.parameterization() {
        Parameterization::W1 => w_at(system, parameter),
        Parameterization::ArcLength => Ok(w_along(system, parameter)),
    }
}

/// Poses for one point of the family. [`Error::Infeasible`] signals that no
/// rotation matches the rotation block of `w`.
pub fn recover_poses(
    geom: &PlatformGeometry,
    lengths: &LegLengths,
    w: &WVector,
) -> Result<Vec<FkSolution>> {
    let mut poses = poses_from_w(geom, w, lengths)?;
    poses.sort_by_key(|s| (s.rotation_index, s.position_branch));
    Ok(poses)
}

/// One evaluated point of the self-motion family.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularCurveSample {
    pub parameter: f64,
    pub parameterization: Parameterization,
    pub w: WVector,
    pub poses: Vec<FkSolution>,
    pub feasible: bool,
    /// Worst leg-length residual over `poses`; `None` when infeasible.
    pub leg_residual: Option<f64>,
    /// For a feasible sample following a feasible one: the largest distance
    /// from any of its poses to the nearest pose of the previous sample.
    pub step_distance: Option<f64>,
}

fn evaluate(
    system: &SingularSystem,
    geom: &PlatformGeometry,
    parameter: f64,
) -> Result<SingularCurveSample> {
    let w = w_for(system, parameter)?;
    let poses = match recover_poses(geom, &system.lengths, &w) {
        Ok(p) => p,
        Err(Error::Infeasible(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    let feasible = !poses.is_empty();
    let leg_residual = feasible.then(|| poses.iter().map(|p| p.leg_residual).fold(0.0, f64::max));
    Ok(SingularCurveSample {
        parameter,
        parameterization: system.parameterization(),
        w,
        poses,
        feasible,
        leg_residual,
        step_distance: None,
    })
}

fn step_distance(current: &[FkSolution], previous: &[FkSolution]) -> f64 {
    current
        .iter()
        .map(|c| {
            previous
                .iter()
                .map(|p| c.pose.distance(&p.pose))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn grid(min: f64, max: f64, samples: usize) -> impl Iterator<Item = f64> {
    let last = samples - 1;
    (0..samples).map(move |k| {
        if k == last {
            max
        } else {
            min + (max - min) * k as f64 / last as f64
        }
    })
}

/// Evaluates the family on a uniform grid of `samples` parameter values.
/// Infeasible samples are flagged, not treated as errors.
pub fn sweep(
    system: &SingularSystem,
    geom: &PlatformGeometry,
    min: f64,
    max: f64,
    samples: usize,
) -> Result<Vec<SingularCurveSample>> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("samples = {samples} < 2")));
    }
    if !(min.is_finite() && max.is_finite() && max > min) {
        return Err(Error::InvalidParameter(format!("empty range [{min}, {max}]")));
    }
    if system.parameterizable_by_w1 && min < 0.0 {
        return Err(Error::InvalidParameter(format!("w1_min = {min} < 0")));
    }

    let mut out: Vec<SingularCurveSample> = Vec::with_capacity(samples);
    for parameter in grid(min, max, samples) {
        let mut sample = evaluate(system, geom, parameter)?;
        if let Some(prev) = out.last() {
            if prev.feasible && sample.feasible {
                sample.step_distance = Some(step_distance(&sample.poses, &prev.poses));
            }
        }
        out.push(sample);
    }
    Ok(out)
}

fn is_feasible(system: &SingularSystem, geom: &PlatformGeometry, parameter: f64) -> Result<bool> {
    Ok(evaluate(system, geom, parameter)?.feasible)
}

/// Bisects between a feasible and an infeasible parameter; returns the
/// feasible end once the bracket is narrower than [`BOUNDARY_TOLERANCE`].
fn refine_boundary(
    system: &SingularSystem,
    geom: &PlatformGeometry,
    mut feasible: f64,
    mut infeasible: f64,
) -> Result<f64> {
    while (feasible - infeasible).abs() > BOUNDARY_TOLERANCE {
        let mid = 0.5 * (feasible + infeasible);
        if is_feasible(system, geom, mid)? {
            feasible = mid;
        } else {
            infeasible = mid;
        }
    }
    Ok(feasible)
}

/// Closed sub-intervals of `[0, w1_hint_max]` on which at least one pose
/// exists, from a dense scan with bisected boundaries. Components narrower
/// than the scan spacing can be missed.
pub fn feasible_interval(
    system: &SingularSystem,
    geom: &PlatformGeometry,
    w1_hint_max: f64,
) -> Result<Vec<(f64, f64)>> {
    if !system.parameterizable_by_w1 {
        return Err(Error::NotParameterizable);
    }
    if !(w1_hint_max.is_finite() && w1_hint_max > 0.0) {
        return Err(Error::InvalidParameter(format!("w1_hint_max = {w1_hint_max}")));
    }

    let points: Vec<f64> = grid(0.0, w1_hint_max, SCAN_POINTS).collect();
    let flags = points
        .iter()
        .map(|&p| is_feasible(system, geom, p))
        .collect::<Result<Vec<bool>>>()?;

    let mut intervals = Vec::new();
    let mut start = flags[0].then_some(points[0]);
    for k in 1..points.len() {
        match (flags[k - 1], flags[k]) {
            (false, true) => {
                start = Some(refine_boundary(system, geom, points[k], points[k - 1])?);
            }
            (true, false) => {
                let end = refine_boundary(system, geom, points[k - 1], points[k])?;
                intervals.push((start.take().expect("open interval"), end));
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push((s, w1_hint_max));
    }
    Ok(intervals)
}
