//! Kinematics of the 6-6 Stewart platform whose top plate is a rotated,
//! contracted copy of its base (`Tᵢ = μ·A·Bᵢ`).
//!
//! Squared leg lengths are linear in six auxiliary unknowns `w`, giving a
//! system `Q·w = d` whose matrix depends only on the base vertices. When the
//! vertices do not share a conic, `Q` is invertible and forward kinematics
//! has at most eight isolated solutions ([`fk_nonsingular`]). When they do
//! (for instance a circular base), `Q` has rank five and each set of leg
//! lengths admits a one-parameter self-motion ([`fk_singular`]).

pub mod cli;
pub mod error;
pub mod fk_nonsingular;
pub mod fk_singular;
pub mod geometry;
pub mod ik;
pub mod numkernel;
pub mod rotation;

pub use error::{Error, Result};
pub use fk_nonsingular::{fk_solve, FkSolution, PositionBranch};
pub use fk_singular::{
    build_singular_system, feasible_interval, sweep, Parameterization, SingularCurveSample,
    SingularSystem,
};
pub use geometry::{ConicReport, PlatformGeometry};
pub use ik::{leg_lengths, LegLengths, Pose, WVector};
pub use numkernel::{Mat3, Vec3};
pub use rotation::Quaternion;
