//! Forward kinematics for bases whose vertices do not share a conic.
//!
//! `Q` is invertible, so `w = Q⁻¹·d`. The rotation block `(w₄, w₅, w₆)` fixes
//! the squared quaternion components and the product `q₁q₂`, leaving up to four
//! rotations. For each, `(w₂, w₃)` define two planes whose line of intersection
//! meets the sphere `PᵀP = w₁` in up to two points: at most eight poses.

use crate::error::{Error, Result};
use crate::geometry::PlatformGeometry;
use crate::ik::{d_from_lengths, leg_lengths, DVector, LegLengths, Pose, WVector};
use crate::numkernel::{lu_factor, solve6, Mat6, Vec3};
use crate::rotation::Quaternion;

/// Squared components down to this value are clamped to zero.
pub const CLAMP_EPS: f64 = 1e-10;
/// Allowed deviation from unit norm of an assembled candidate.
pub const CANDIDATE_NORM_EPS: f64 = 1e-6;
/// Candidates closer than this (as rotations) are duplicates.
pub const DEDUP_EPS: f64 = 1e-9;
/// `w₁ − r₀ᵀr₀` within this of zero is a tangency.
pub const TANGENCY_EPS: f64 = 1e-10;
/// Below this, `‖u × v‖` leaves the intersection line undefined.
pub const PARALLEL_EPS: f64 = 1e-10;
/// Relative leg-length residual a solution must meet to be reported.
pub const RESIDUAL_EPS: f64 = 1e-8;

/// Rotations consistent with `(w₄, w₅, w₆)`, canonical and deduplicated.
///
/// Each candidate is the quaternion of the composite rotation `R·A` (of
/// `R·det(A)·A` for an improper `A`), which is `R` itself when `A = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionCandidates {
    /// `(index, quaternion)` with `index ∈ 1..=4` naming the sign pattern
    /// `(q̄₀, ±(q̄₁, q̄₂), ±q̄₃)`.
    pub candidates: Vec<(u8, Quaternion)>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Which end of the line/sphere intersection a position came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PositionBranch {
    Plus,
    Minus,
    /// The line touches the sphere; both ends coincide.
    Tangent,
}

impl PositionBranch {
    pub fn symbol(self) -> &'static str {
        match self {
            PositionBranch::Plus => "+",
            PositionBranch::Minus => "-",
            PositionBranch::Tangent => "0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FkSolution {
    pub pose: Pose,
    pub rotation_index: u8,
    pub position_branch: PositionBranch,
    /// Max over legs of `|recomputed − input|`.
    pub leg_residual: f64,
}

pub fn solve_w(q_matrix: &Mat6, d: &DVector) -> Result<WVector> {
    let f = lu_factor(q_matrix);
    if f.rank() < 6 {
        return Err(Error::SingularBase { rank: f.rank() });
    }
    Ok(WVector(solve6(&f, &d.0)?))
}

/// Quaternion candidates from the rotation block of `w`. `mu` is the
/// (signed) scale of the rotation block; see [`PlatformGeometry::signed_mu`].
pub fn quaternions_from_w(w: &WVector, mu: f64) -> Result<QuaternionCandidates> {
    if !(mu.abs() > 0.0 && mu.abs() < 1.0) {
        return Err(Error::InvalidScale(mu));
    }
    let alpha = (w.w4() - w.w6()) / (4.0 * mu);
    let beta = -w.w5() / (8.0 * mu);
    let gamma = alpha.hypot(2.0 * beta);

    // q₁² = (γ − α)/2 and q₂² = (γ + α)/2 with q₁²q₂² = β²; take the
    // non-cancelling root first.
    let (q1_sq, q2_sq) = if alpha >= 0.0 {
        let q2_sq = (gamma + alpha) / 2.0;
        let q1_sq = if q2_sq > 0.0 { beta * beta / q2_sq } else { 0.0 };
        (q1_sq, q2_sq)
    } else {
        let q1_sq = (gamma - alpha) / 2.0;
        (q1_sq, beta * beta / q1_sq)
    };
    let half = 0.5 + w.w4() / (4.0 * mu);
    let q3_sq = half - q2_sq;
    let q0_sq = 1.0 - half - q1_sq;

    if q0_sq < -CLAMP_EPS {
        return Err(Error::Infeasible(format!("q0^2 = {q0_sq:e} < 0")));
    }
    if q3_sq < -CLAMP_EPS {
        return Err(Error::Infeasible(format!("q3^2 = {q3_sq:e} < 0")));
    }
    let q0 = q0_sq.max(0.0).sqrt();
    let q3 = q3_sq.max(0.0).sqrt();

    // The larger of q₁, q₂ comes from its square; the other from q₁q₂ = β.
    let (q1, q2) = if q2_sq >= q1_sq {
        let q2 = q2_sq.sqrt();
        if q2 > 1e-12 {
            (beta / q2, q2)
        } else {
            (q1_sq.sqrt(), q2)
        }
    } else {
        let q1 = q1_sq.sqrt();
        (q1, beta / q1)
    };

    let norm_sq = q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3;
    if (norm_sq - 1.0).abs() > CANDIDATE_NORM_EPS {
        return Err(Error::Infeasible(format!(
            "candidate norm^2 = {norm_sq} deviates from 1"
        )));
    }

    let patterns = [
        (1u8, [q0, q1, q2, q3]),
        (2, [q0, q1, q2, -q3]),
        (3, [q0, -q1, -q2, q3]),
        (4, [q0, -q1, -q2, -q3]),
    ];
    let mut candidates: Vec<(u8, Quaternion)> = Vec::with_capacity(4);
    for (index, q) in patterns {
        let q = Quaternion::from_array(q)?.canonicalize();
        if candidates
            .iter()
            .all(|(_, c)| c.rotation_distance(&q) > DEDUP_EPS)
        {
            candidates.push((index, q));
        }
    }

    Ok(QuaternionCandidates {
        candidates,
        alpha,
        beta,
        gamma,
    })
}

/// Positions compatible with `w` for the plate rotation `q`: the points on
/// the line `uᵀP = w₂, vᵀP = w₃` at distance `√w₁` from the origin, where
/// `uᵀ = 2eₓᵀ(μ(RA)ᵀ − I)` and `vᵀ = 2e_yᵀ(μ(RA)ᵀ − I)`.
pub fn position_from_w(
    w: &WVector,
    q: &Quaternion,
    geom: &PlatformGeometry,
) -> Result<Vec<(PositionBranch, Vec3)>> {
    let block = (q.to_matrix() * *geom.top_transform()).scale(geom.mu());
    let u = (block.column(0) - Vec3::X) * 2.0;
    let v = (block.column(1) - Vec3::Y) * 2.0;

    let normal = u.cross(v);
    let normal_len = normal.norm();
    if normal_len < PARALLEL_EPS {
        return Err(Error::ParallelPlanes);
    }

    let (uu, vv, uv) = (u.dot(u), v.dot(v), u.dot(v));
    let det = uu * vv - uv * uv;
    let a = (vv * w.w2() - uv * w.w3()) / det;
    let b = (uu * w.w3() - uv * w.w2()) / det;
    let r0 = u * a + v * b;
    let r1 = normal * (1.0 / normal_len);

    let gap = w.w1() - r0.norm_squared();
    if gap < -TANGENCY_EPS {
        return Err(Error::NoIntersection { gap });
    }
    if gap <= TANGENCY_EPS {
        return Ok(vec![(PositionBranch::Tangent, r0)]);
    }
    let t = gap.sqrt();
    Ok(vec![
        (PositionBranch::Plus, r0 + r1 * t),
        (PositionBranch::Minus, r0 - r1 * t),
    ])
}

/// All poses reproducing `lengths` that are compatible with `w`. Candidates
/// whose recomputed leg lengths miss the input are dropped.
pub fn poses_from_w(
    geom: &PlatformGeometry,
    w: &WVector,
    lengths: &LegLengths,
) -> Result<Vec<FkSolution>> {
    let candidates = quaternions_from_w(w, geom.signed_mu())?;
    let undo_transform = geom.proper_transform().conjugate();
    let tolerance = RESIDUAL_EPS * (1.0 + lengths.max());

    let mut out = Vec::new();
    for (index, composite) in candidates.candidates {
        let rotation = (composite * undo_transform).canonicalize();
        let positions = match position_from_w(w, &rotation, geom) {
            Ok(p) => p,
            Err(Error::NoIntersection { .. } | Error::ParallelPlanes) => continue,
            Err(e) => return Err(e),
        };
        for (branch, position) in positions {
            let pose = Pose::new(rotation, position);
            let Ok(recomputed) = leg_lengths(geom, &pose) else {
                continue;
            };
            let leg_residual = recomputed.max_deviation(lengths);
            if leg_residual <= tolerance {
                out.push(FkSolution {
                    pose,
                    rotation_index: index,
                    position_branch: branch,
                    leg_residual,
                });
            }
        }
    }
    Ok(out)
}

/// Up to eight poses for a base not on a conic, ordered by rotation index and
/// then position branch.
pub fn fk_solve(geom: &PlatformGeometry, lengths: &LegLengths) -> Result<Vec<FkSolution>> {
    let d = d_from_lengths(geom, lengths);
    let w = solve_w(&geom.q_matrix(), &d)?;
    let mut solutions = poses_from_w(geom, &w, lengths)?;
    solutions.sort_by_key(|s| (s.rotation_index, s.position_branch));
    Ok(solutions)
}
