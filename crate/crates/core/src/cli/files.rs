//! JSON input files: geometry, pose and leg lengths.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::CliError;
use crate::geometry::{make_circle_base, PlatformGeometry};
use crate::ik::{LegLengths, Pose};
use crate::numkernel::{Mat3, Vec3};
use crate::rotation::Quaternion;

/// `{"circle_angles":[6] | "base":[[x,y]×6], "A":[[3×3]], "mu": m}`.
/// Circle angles place vertices on the unit circle; rescale lengths for
/// other radii.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    #[serde(default)]
    pub base: Option<[[f64; 2]; 6]>,
    #[serde(default)]
    pub circle_angles: Option<[f64; 6]>,
    #[serde(rename = "A", default)]
    pub a: Option<[[f64; 3]; 3]>,
    pub mu: f64,
}

impl GeometryFile {
    pub fn into_geometry(self) -> Result<PlatformGeometry, CliError> {
        let base = match (self.base, self.circle_angles) {
            (Some(b), None) => b,
            (None, Some(angles)) => make_circle_base(angles).map_err(CliError::input)?,
            (Some(_), Some(_)) => {
                return Err(CliError::input("geometry has both base and circle_angles"))
            }
            (None, None) => return Err(CliError::input("geometry needs base or circle_angles")),
        };
        let a = self.a.map(Mat3::from_rows).unwrap_or(Mat3::IDENTITY);
        PlatformGeometry::new(base, a, self.mu).map_err(CliError::input)
    }
}

/// `{"q":[q0,q1,q2,q3],"P":[x,y,z]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseFile {
    pub q: [f64; 4],
    #[serde(rename = "P")]
    pub p: [f64; 3],
}

impl PoseFile {
    pub fn into_pose(self) -> Result<Pose, CliError> {
        let q = Quaternion::from_array(self.q).map_err(CliError::input)?;
        let p = Vec3::from_array(self.p);
        if !p.is_finite() {
            return Err(CliError::input("non-finite position"));
        }
        Ok(Pose::new(q, p))
    }
}

/// `{"L":[6 lengths]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthsFile {
    #[serde(rename = "L")]
    pub l: [f64; 6],
}

impl LengthsFile {
    pub fn into_lengths(self) -> Result<LegLengths, CliError> {
        LegLengths::new(self.l).map_err(CliError::input)
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("cannot parse {}: {e}", path.display())))
}

pub fn load_geometry(path: &Path) -> Result<PlatformGeometry, CliError> {
    read_json::<GeometryFile>(path)?.into_geometry()
}

pub fn load_pose(path: &Path) -> Result<Pose, CliError> {
    read_json::<PoseFile>(path)?.into_pose()
}

pub fn load_lengths(path: &Path) -> Result<LegLengths, CliError> {
    read_json::<LengthsFile>(path)?.into_lengths()
}
