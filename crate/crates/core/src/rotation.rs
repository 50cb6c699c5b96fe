//! Unit quaternions and the rotation matrices they generate.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::numkernel::Mat3;

/// Largest accepted deviation of `|q|` from 1 before construction fails.
pub const UNIT_TOLERANCE: f64 = 1e-6;

/// A unit quaternion `(q0, q1, q2, q3)` with scalar part `q0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    q: [f64; 4],
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        q: [1.0, 0.0, 0.0, 0.0],
    };

    /// Normalizes components lying within [`UNIT_TOLERANCE`] of unit norm and
    /// rejects anything further away.
    pub fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Result<Self> {
        let q = [q0, q1, q2, q3];
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("quaternion"));
        }
        let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { norm });
        }
        Ok(Quaternion {
            q: q.map(|v| v / norm),
        })
    }

    pub fn from_array(q: [f64; 4]) -> Result<Self> {
        Self::new(q[0], q[1], q[2], q[3])
    }

    pub fn components(&self) -> [f64; 4] {
        self.q
    }

    pub fn w(&self) -> f64 {
        self.q[0]
    }

    pub fn conjugate(&self) -> Quaternion {
        let [a, b, c, d] = self.q;
        Quaternion { q: [a, -b, -c, -d] }
    }

    /// Rotation matrix with the diagonal written as `2q0² − 1 + 2qi²`.
    pub fn to_matrix(&self) -> Mat3 {
        let [q0, q1, q2, q3] = self.q;
        Mat3([
            [
                2.0 * q0 * q0 - 1.0 + 2.0 * q1 * q1,
                2.0 * q1 * q2 - 2.0 * q0 * q3,
                2.0 * q0 * q2 + 2.0 * q1 * q3,
            ],
            [
                2.0 * q1 * q2 + 2.0 * q0 * q3,
                2.0 * q0 * q0 - 1.0 + 2.0 * q2 * q2,
                2.0 * q2 * q3 - 2.0 * q0 * q1,
            ],
            [
                2.0 * q1 * q3 - 2.0 * q0 * q2,
                2.0 * q0 * q1 + 2.0 * q2 * q3,
                2.0 * q0 * q0 - 1.0 + 2.0 * q3 * q3,
            ],
        ])
    }

    /// Quaternion of a proper rotation matrix (Shepperd's method), canonical.
    pub fn from_matrix(m: &Mat3) -> Result<Quaternion> {
        let r = &m.0;
        let trace = m.trace();
        let q = if trace >= r[0][0].max(r[1][1]).max(r[2][2]) {
            let s = 2.0 * (1.0 + trace).max(0.0).sqrt();
            [
                s / 4.0,
                (r[2][1] - r[1][2]) / s,
                (r[0][2] - r[2][0]) / s,
                (r[1][0] - r[0][1]) / s,
            ]
        } else if r[0][0] >= r[1][1] && r[0][0] >= r[2][2] {
            let s = 2.0 * (1.0 + r[0][0] - r[1][1] - r[2][2]).max(0.0).sqrt();
            [
                (r[2][1] - r[1][2]) / s,
                s / 4.0,
                (r[0][1] + r[1][0]) / s,
                (r[0][2] + r[2][0]) / s,
            ]
        } else if r[1][1] >= r[2][2] {
            let s = 2.0 * (1.0 - r[0][0] + r[1][1] - r[2][2]).max(0.0).sqrt();
            [
                (r[0][2] - r[2][0]) / s,
                (r[0][1] + r[1][0]) / s,
                s / 4.0,
                (r[1][2] + r[2][1]) / s,
            ]
        } else {
            let s = 2.0 * (1.0 - r[0][0] - r[1][1] + r[2][2]).max(0.0).sqrt();
            [
                (r[1][0] - r[0][1]) / s,
                (r[0][2] + r[2][0]) / s,
                (r[1][2] + r[2][1]) / s,
                s / 4.0,
            ]
        };
        Ok(Quaternion::from_array(q)?.canonicalize())
    }

    /// Representative with `q0 ≥ 0`. Describes the same rotation.
    pub fn canonicalize(&self) -> Quaternion {
        if self.q[0] < 0.0 {
            Quaternion {
                q: self.q.map(|v| -v),
            }
        } else {
            *self
        }
    }

    /// Distance between the rotations, insensitive to the double cover.
    pub fn rotation_distance(&self, other: &Quaternion) -> f64 {
        let mut plus = 0.0f64;
        let mut minus = 0.0f64;
        for i in 0..4 {
            plus = plus.max((self.q[i] - other.q[i]).abs());
            minus = minus.max((self.q[i] + other.q[i]).abs());
        }
        plus.min(minus)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product; `to_matrix(a * b) = to_matrix(a) · to_matrix(b)`.
    fn mul(self, o: Quaternion) -> Quaternion {
        let [a0, a1, a2, a3] = self.q;
        let [b0, b1, b2, b3] = o.q;
        Quaternion {
            q: [
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ],
        }
    }
}
