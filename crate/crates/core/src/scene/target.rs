use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Cube,
    Cylinder,
    Cone,
    Sphere,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 4] = [
        ShapeKind::Cube,
        ShapeKind::Cylinder,
        ShapeKind::Cone,
        ShapeKind::Sphere,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ShapeKind::Cube => "cube",
            ShapeKind::Cylinder => "cylinder",
            ShapeKind::Cone => "cone",
            ShapeKind::Sphere => "sphere",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.label() == label)
    }
}

/// Target geometry in its local frame, centred on the origin.
///
/// The cylinder lies on its side with its axis along local `x`; the cone
/// stands on its base with the apex along local `+z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Shape {
    Cube { edge: f64 },
    Cylinder { radius: f64, length: f64 },
    Cone { radius: f64, height: f64 },
    Sphere { radius: f64 },
}

impl Shape {
    pub fn kind(&self) -> ShapeKind {
        match self {
            Shape::Cube { .. } => ShapeKind::Cube,
            Shape::Cylinder { .. } => ShapeKind::Cylinder,
            Shape::Cone { .. } => ShapeKind::Cone,
            Shape::Sphere { .. } => ShapeKind::Sphere,
        }
    }

    /// Half-extents of the local bounding box.
    pub fn half_extents(&self) -> Vec3 {
        match *self {
            Shape::Cube { edge } => Vec3::new(edge, edge, edge) * 0.5,
            Shape::Cylinder { radius, length } => Vec3::new(length * 0.5, radius, radius),
            Shape::Cone { radius, height } => Vec3::new(radius, radius, height * 0.5),
            Shape::Sphere { radius } => Vec3::new(radius, radius, radius),
        }
    }

    fn dimensions(&self) -> Vec<f64> {
        match *self {
            Shape::Cube { edge } => vec![edge],
            Shape::Cylinder { radius, length } => vec![radius, length],
            Shape::Cone { radius, height } => vec![radius, height],
            Shape::Sphere { radius } => vec![radius],
        }
    }
}

fn default_albedo() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetPrimitive {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default = "default_albedo")]
    pub albedo: f64,
}

impl TargetPrimitive {
    /// White (albedo 1) primitive.
    pub fn new(shape: Shape) -> Self {
        TargetPrimitive { shape, albedo: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shape.dimensions().iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "{} dimensions must be positive: {:?}",
                self.shape.kind().label(),
                self.shape
            )));
        }
        if !(0.0..=1.0).contains(&self.albedo) {
            return Err(Error::InvalidParameter(format!(
                "albedo must be in [0, 1], got {}",
                self.albedo
            )));
        }
        Ok(())
    }
}

fn unit_scale() -> Vec3 {
    Vec3::new(1.0, 1.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    /// World `(x, y)`; the elevation is derived when the target is placed.
    pub position: [f64; 2],
    /// Aspect angle about the vertical axis.
    #[serde(default)]
    pub yaw_deg: f64,
    #[serde(default = "unit_scale")]
    pub scale: Vec3,
}

impl Pose {
    pub fn new(x: f64, y: f64, yaw_deg: f64) -> Self {
        Pose {
            position: [x, y],
            yaw_deg: normalize_deg(yaw_deg),
            scale: unit_scale(),
        }
    }

    pub fn with_scale(mut self, scale: Vec3) -> Self {
        self.scale = scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.scale;
        if !(s.x > 0.0 && s.y > 0.0 && s.z > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scale components must be positive, got {:?}",
                [s.x, s.y, s.z]
            )));
        }
        if !(self.position[0].is_finite() && self.position[1].is_finite() && self.yaw_deg.is_finite()) {
            return Err(Error::InvalidParameter("pose must be finite".into()));
        }
        Ok(())
    }
}

pub fn normalize_deg(deg: f64) -> f64 {
    let d = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs.
    if d >= 360.0 {
        0.0
    } else {
        d
    }
}

/// A primitive posed in the world: `world = R_yaw * (scale ⊙ local) + center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedTarget {
    pub primitive: TargetPrimitive,
    pub pose: Pose,
    /// World position of the local origin; its lowest point touches the seabed.
    pub center: Vec3,
    pub(crate) cos_yaw: f64,
    pub(crate) sin_yaw: f64,
    /// Radius of a world-space sphere around `center` enclosing the target.
    pub(crate) bound_radius: f64,
}

impl PlacedTarget {
    pub fn new(primitive: TargetPrimitive, pose: Pose, ground_z: f64) -> Result<Self> {
        primitive.validate()?;
        pose.validate()?;
        let pose = Pose {
            yaw_deg: normalize_deg(pose.yaw_deg),
            ..pose
        };
        let half = primitive.shape.half_extents().mul_elem(pose.scale);
        let (sin_yaw, cos_yaw) = pose.yaw_deg.to_radians().sin_cos();
        Ok(PlacedTarget {
            primitive,
            pose,
            center: Vec3::new(pose.position[0], pose.position[1], ground_z + half.z),
            cos_yaw,
            sin_yaw,
            bound_radius: half.length() * (1.0 + 1e-9),
        })
    }

    #[inline]
    pub fn to_local_point(&self, p: Vec3) -> Vec3 {
        self.to_local_dir(p - self.center)
    }

    /// Rotates then unscales; the result is not renormalized.
    #[inline]
    pub fn to_local_dir(&self, d: Vec3) -> Vec3 {
        let rx = self.cos_yaw * d.x + self.sin_yaw * d.y;
        let ry = -self.sin_yaw * d.x + self.cos_yaw * d.y;
        Vec3::new(rx / self.pose.scale.x, ry / self.pose.scale.y, d.z / self.pose.scale.z)
    }

    #[inline]
    pub fn to_world_point(&self, p: Vec3) -> Vec3 {
        let s = p.mul_elem(self.pose.scale);
        self.center + self.rotate(s)
    }

    /// Maps a local surface normal to a unit world normal (inverse-transpose of the pose).
    #[inline]
    pub fn to_world_normal(&self, n: Vec3) -> Vec3 {
        self.rotate(n.div_elem(self.pose.scale)).normalized()
    }

    #[inline]
    fn rotate(&self, v: Vec3) -> Vec3 {
        Vec3::new(
            self.cos_yaw * v.x - self.sin_yaw * v.y,
            self.sin_yaw * v.x + self.cos_yaw * v.y,
            v.z,
        )
    }

    /// World-space axis-aligned bounds of the posed local box, `(min, max)`.
    pub fn world_aabb(&self) -> (Vec3, Vec3) {
        let h = self.primitive.shape.half_extents();
        let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    let p = self.to_world_point(Vec3::new(sx * h.x, sy * h.y, sz * h.z));
                    lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
                    hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
                }
            }
        }
        (lo, hi)
    }

    pub fn bound_radius(&self) -> f64 {
        self.bound_radius
    }
}
