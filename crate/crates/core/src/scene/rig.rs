use serde::{Deserialize, Serialize};

use super::target::normalize_deg;
use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Nadir-looking perspective camera. `fov_deg` is the vertical field of view.
///
/// Image columns run along the camera's right axis `(cos yaw, sin yaw, 0)`
/// and rows run against its up axis `(-sin yaw, cos yaw, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Camera {
    pub position: Vec3,
    pub fov_deg: f64,
    pub width: usize,
    pub height: usize,
    pub yaw_deg: f64,
}

impl Default for Camera {
    fn default() -> Self {
        Camera {
            position: Vec3::new(0.0, 0.0, 10.0),
            fov_deg: 120.0,
            width: 2048,
            height: 2048,
            yaw_deg: 0.0,
        }
    }
}

impl Camera {
    pub fn validate(&self) -> Result<()> {
        if !(self.fov_deg > 0.0 && self.fov_deg < 180.0) {
            return Err(Error::InvalidParameter(format!(
                "camera fov must be in (0, 180) degrees, got {}",
                self.fov_deg
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParameter(format!(
                "camera image must be at least 1x1, got {}x{}",
                self.width, self.height
            )));
        }
        if !(self.position.is_finite() && self.yaw_deg.is_finite()) {
            return Err(Error::InvalidParameter("camera pose must be finite".into()));
        }
        Ok(())
    }

    pub fn right(&self) -> Vec3 {
        let (s, c) = normalize_deg(self.yaw_deg).to_radians().sin_cos();
        Vec3::new(c, s, 0.0)
    }

    pub fn up(&self) -> Vec3 {
        let (s, c) = normalize_deg(self.yaw_deg).to_radians().sin_cos();
        Vec3::new(-s, c, 0.0)
    }

    /// Unnormalized direction through the centre of pixel `(col, row)`.
    ///
    /// Offsets are built from integer numerators so mirrored pixels get
    /// exactly negated offsets.
    #[inline]
    pub fn pixel_direction(&self, right: Vec3, up: Vec3, tan_half: f64, col: usize, row: usize) -> Vec3 {
        let (w, h) = (self.width as f64, self.height as f64);
        let u = (2.0 * col as f64 + 1.0 - w) / h * tan_half;
        let v = (h - 1.0 - 2.0 * row as f64) / h * tan_half;
        Vec3::new(
            right.x * u + up.x * v,
            right.y * u + up.y * v,
            -1.0,
        )
    }

    /// Ground footprint across the image width on a plane `altitude` below the camera.
    pub fn footprint_width(&self, altitude: f64) -> f64 {
        let tan_half = (self.fov_deg.to_radians() / 2.0).tan();
        2.0 * altitude * tan_half * self.width as f64 / self.height as f64
    }
}

/// Which swath a render represents; port flips the light azimuth by 180 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LightSide {
    #[default]
    Starboard,
    Port,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DirectionalLight {
    /// Elevation above the seafloor plane.
    pub grazing_angle_deg: f64,
    pub intensity: f64,
    pub color: [f64; 3],
    pub side: LightSide,
}

impl Default for DirectionalLight {
    fn default() -> Self {
        DirectionalLight {
            grazing_angle_deg: 6.0,
            intensity: 1.0,
            color: [1.0, 1.0, 1.0],
            side: LightSide::Starboard,
        }
    }
}

impl DirectionalLight {
    pub fn validate(&self) -> Result<()> {
        if !(self.grazing_angle_deg > 0.0 && self.grazing_angle_deg < 90.0) {
            return Err(Error::InvalidParameter(format!(
                "light grazing angle must be in (0, 90) degrees, got {}",
                self.grazing_angle_deg
            )));
        }
        if !(self.intensity >= 0.0 && self.intensity.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "light intensity must be >= 0, got {}",
                self.intensity
            )));
        }
        if self.color.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::InvalidParameter(format!(
                "light color must be in [0, 1], got {:?}",
                self.color
            )));
        }
        Ok(())
    }

    /// Horizontal direction the light travels: the camera's right axis, reversed for port.
    pub fn azimuth_deg(&self, camera: &Camera) -> f64 {
        match self.side {
            LightSide::Starboard => normalize_deg(camera.yaw_deg),
            LightSide::Port => normalize_deg(camera.yaw_deg + 180.0),
        }
    }

    /// Unit vector from a surface point toward the light.
    pub fn to_light(&self, camera: &Camera) -> Vec3 {
        let (se, ce) = self.grazing_angle_deg.to_radians().sin_cos();
        let horizontal = match self.side {
            LightSide::Starboard => camera.right(),
            LightSide::Port => -camera.right(),
        };
        Vec3::new(-horizontal.x * ce, -horizontal.y * ce, se)
    }
}
