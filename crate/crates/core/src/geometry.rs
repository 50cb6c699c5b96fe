//! Platform description, the conic matrix `Q` whose rows are
//! `(1, x, y, x², xy, y²)` for each base vertex, and conic diagnostics.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numkernel::{lu_factor, null_vector, Mat3, Mat6, Vec3, Vec6};
use crate::rotation::Quaternion;

/// Minimum distance between two base vertices.
pub const MIN_VERTEX_SEPARATION: f64 = 1e-9;

/// Entrywise tolerance on `AᵀA − I`.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

/// A planar base vertex; `z = 0` is implicit.
pub type BasePoint = [f64; 2];

/// Six base vertices, a top-plate transform `A` and the contraction `μ`.
/// Top vertices sit at `μ·A·Bᵢ` in the plate frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PlatformGeometry {
    base: [BasePoint; 6],
    top_transform: Mat3,
    mu: f64,
}

impl PlatformGeometry {
    pub fn new(base: [BasePoint; 6], top_transform: Mat3, mu: f64) -> Result<Self> {
        if base.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("base"));
        }
        if !top_transform.is_finite() {
            return Err(Error::NonFinite("top transform"));
        }
        if !mu.is_finite() {
            return Err(Error::NonFinite("mu"));
        }
        check_distinct(&base)?;
        let deviation = top_transform.orthogonality_defect();
        if deviation > ORTHOGONALITY_TOLERANCE {
            return Err(Error::NotOrthogonal { deviation });
        }
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::InvalidScale(mu));
        }
        Ok(PlatformGeometry {
            base,
            top_transform,
            mu,
        })
    }

    /// Unit-circle base at the given angles with `A = I`.
    pub fn circle(angles: [f64; 6], mu: f64) -> Result<Self> {
        Self::new(make_circle_base(angles)?, Mat3::IDENTITY, mu)
    }

    pub fn base(&self) -> &[BasePoint; 6] {
        &self.base
    }

    pub fn base_vertex(&self, i: usize) -> Vec3 {
        Vec3::new(self.base[i][0], self.base[i][1], 0.0)
    }

    pub fn top_transform(&self) -> &Mat3 {
        &self.top_transform
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn q_matrix(&self) -> Mat6 {
        build_q(&self.base)
    }

    /// `det A`, rounded to ±1.
    pub fn handedness(&self) -> f64 {
        if self.top_transform.determinant() < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Scale of the rotation block after folding the handedness of `A` into
    /// it: `μ·A = signed_mu · A'` with `A'` proper.
    pub fn signed_mu(&self) -> f64 {
        self.mu * self.handedness()
    }

    /// Proper part `A' = det(A)·A` as a quaternion.
    pub fn proper_transform(&self) -> Quaternion {
        Quaternion::from_matrix(&self.top_transform.scale(self.handedness()))
            .expect("validated orthogonal matrix has a unit quaternion")
    }

    pub fn conic_check(&self) -> ConicReport {
        conic_check(&self.base)
    }
}

fn check_distinct(base: &[BasePoint; 6]) -> Result<()> {
    for i in 0..6 {
        for j in i + 1..6 {
            let dx = base[i][0] - base[j][0];
            let dy = base[i][1] - base[j][1];
            if dx.hypot(dy) <= MIN_VERTEX_SEPARATION {
                return Err(Error::DuplicateVertex {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok(())
}

/// Points `(cos θ, sin θ)` on the unit circle. Larger radii are handled by
/// rescaling all lengths.
pub fn make_circle_base(angles: [f64; 6]) -> Result<[BasePoint; 6]> {
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite("circle angles"));
    }
    for i in 0..6 {
        for j in i + 1..6 {
            let gap = (angles[i] - angles[j]).rem_euclid(TAU);
            if gap.min(TAU - gap) <= MIN_VERTEX_SEPARATION {
                return Err(Error::DuplicateVertex {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok(angles.map(|t| [t.cos(), t.sin()]))
}

pub fn build_q(base: &[BasePoint; 6]) -> Mat6 {
    let mut q = Mat6::zeros();
    for (row, &[x, y]) in q.0.iter_mut().zip(base.iter()) {
        *row = [1.0, x, y, x * x, x * y, y * y];
    }
    q
}

/// Result of testing whether the base vertices share a conic.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicReport {
    pub det_q: f64,
    pub numerical_rank: usize,
    pub on_conic: bool,
    /// Unit coefficients `(c₀..c₅)` of `c₀ + c₁x + c₂y + c₃x² + c₄xy + c₅y² = 0`
    /// when the rank is exactly five.
    pub conic_coefficients: Option<Vec6>,
}

pub fn conic_check(base: &[BasePoint; 6]) -> ConicReport {
    let q = build_q(base);
    let f = lu_factor(&q);
    let rank = f.rank();
    ConicReport {
        det_q: q.determinant(),
        numerical_rank: rank,
        on_conic: rank <= 5,
        conic_coefficients: null_vector(&f).ok(),
    }
}
