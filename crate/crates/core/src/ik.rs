//! Inverse kinematics: leg vectors and lengths of a pose, plus the `w` and `d`
//! vectors tying a pose to the linear system `Q·w = d`.
//!
//! With `C = R·A`, each squared leg length expands to
//!
//! ```text
//! Lᵢ² = PᵀP + 2xᵢ·eₓᵀ(μCᵀP − P) + 2yᵢ·e_yᵀ(μCᵀP − P)
//!       − 2μ[xᵢ²C₁₁ + xᵢyᵢ(C₁₂ + C₂₁) + yᵢ²C₂₂] + (1 + μ²)(xᵢ² + yᵢ²)
//! ```
//!
//! which is row `i` of `Q·w = d`. Note that `μ` multiplies only the rotated
//! term inside `w₂` and `w₃`.

use std::ops::Index;

use crate::error::{Error, Result};
use crate::geometry::PlatformGeometry;
use crate::numkernel::{Mat3, Vec3, Vec6};
use crate::rotation::Quaternion;

/// Legs shorter than this are considered collapsed.
pub const MIN_LEG_LENGTH: f64 = 1e-12;

/// One rigid placement of the top plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub orientation: Quaternion,
    pub position: Vec3,
}

impl Pose {
    pub fn new(orientation: Quaternion, position: Vec3) -> Self {
        Pose {
            orientation,
            position,
        }
    }

    /// Max-norm distance, treating `q` and `−q` as the same orientation.
    pub fn distance(&self, other: &Pose) -> f64 {
        self.orientation
            .rotation_distance(&other.orientation)
            .max((self.position - other.position).max_abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegLengths(pub [f64; 6]);

impl LegLengths {
    pub fn new(lengths: [f64; 6]) -> Result<Self> {
        for (index, l) in lengths.iter().enumerate() {
            if !l.is_finite() {
                return Err(Error::NonFinite("leg lengths"));
            }
            if *l <= 0.0 {
                return Err(Error::NonPositiveLength { index });
            }
        }
        Ok(LegLengths(lengths))
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Largest absolute difference to another set of lengths.
    pub fn max_deviation(&self, other: &LegLengths) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

impl Index<usize> for LegLengths {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// The six unknowns of `Q·w = d`:
/// `w₁ = PᵀP`, `w₂ = 2eₓᵀ(μCᵀP − P)`, `w₃ = 2e_yᵀ(μCᵀP − P)`,
/// `w₄ = −2μC₁₁`, `w₅ = −2μ(C₁₂ + C₂₁)`, `w₆ = −2μC₂₂`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WVector(pub Vec6);

impl WVector {
    pub fn new(w: [f64; 6]) -> Self {
        WVector(Vec6(w))
    }

    pub fn w1(&self) -> f64 {
        self.0[0]
    }
    pub fn w2(&self) -> f64 {
        self.0[1]
    }
    pub fn w3(&self) -> f64 {
        self.0[2]
    }
    pub fn w4(&self) -> f64 {
        self.0[3]
    }
    pub fn w5(&self) -> f64 {
        self.0[4]
    }
    pub fn w6(&self) -> f64 {
        self.0[5]
    }
}

/// Right-hand side `dᵢ = Lᵢ² − (1 + μ²)(xᵢ² + yᵢ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DVector(pub Vec6);

/// `R·A` for the pose's rotation `R`.
pub fn composite_rotation(geom: &PlatformGeometry, pose: &Pose) -> Mat3 {
    pose.orientation.to_matrix() * *geom.top_transform()
}

/// `Lᵢ = (μ·R·A − I)·Bᵢ + P`.
pub fn leg_vectors(geom: &PlatformGeometry, pose: &Pose) -> [Vec3; 6] {
    let block = composite_rotation(geom, pose).scale(geom.mu());
    std::array::from_fn(|i| {
        let b = geom.base_vertex(i);
        block * b - b + pose.position
    })
}

pub fn leg_lengths(geom: &PlatformGeometry, pose: &Pose) -> Result<LegLengths> {
    let vectors = leg_vectors(geom, pose);
    let mut out = [0.0; 6];
    for (index, (o, v)) in out.iter_mut().zip(vectors).enumerate() {
        *o = v.norm();
        if *o < MIN_LEG_LENGTH {
            return Err(Error::DegenerateLeg { index });
        }
    }
    Ok(LegLengths(out))
}

pub fn w_from_pose(geom: &PlatformGeometry, pose: &Pose) -> WVector {
    let mu = geom.mu();
    let c = composite_rotation(geom, pose);
    let p = pose.position;
    let rotated = c.transpose() * p;
    WVector::new([
        p.norm_squared(),
        2.0 * (mu * rotated.x - p.x),
        2.0 * (mu * rotated.y - p.y),
        -2.0 * mu * c.0[0][0],
        -2.0 * mu * (c.0[0][1] + c.0[1][0]),
        -2.0 * mu * c.0[1][1],
    ])
}

pub fn d_from_lengths(geom: &PlatformGeometry, lengths: &LegLengths) -> DVector {
    let k = 1.0 + geom.mu() * geom.mu();
    let mut d = Vec6::ZERO;
    for (i, &[x, y]) in geom.base().iter().enumerate() {
        d[i] = lengths[i] * lengths[i] - k * (x * x + y * y);
    }
    DVector(d)
}
