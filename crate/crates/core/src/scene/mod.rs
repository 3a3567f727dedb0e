//! The simulated world: seabed heightfield, posed targets, and the camera/light rig.

mod heightfield;
mod rig;
mod seabed;
mod target;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use heightfield::Heightfield;
pub use rig::{Camera, DirectionalLight, LightSide};
pub use seabed::{make_seabed, MudParams, RippleParams, RockParams, SeabedKind, SeabedSpec, SeabedType};
pub use target::{normalize_deg, PlacedTarget, Pose, Shape, ShapeKind, TargetPrimitive};

use crate::error::{Error, Result};

pub const DEFAULT_AMBIENT: f64 = 0.08;
/// Seabed reflectance; with unit light intensity a flat unshadowed floor renders near 0.11.
pub const DEFAULT_SEABED_ALBEDO: f64 = 0.6;

/// Everything the renderer consumes. Immutable once built.
#[derive(Debug, Clone)]
pub struct Scene {
    heightfield: Heightfield,
    seabed_albedo: f64,
    targets: Vec<PlacedTarget>,
    camera: Camera,
    light: DirectionalLight,
    ambient: f64,
}

impl Scene {
    pub fn builder(heightfield: Heightfield) -> SceneBuilder {
        SceneBuilder::new(heightfield)
    }

    pub fn heightfield(&self) -> &Heightfield {
        &self.heightfield
    }

    pub fn seabed_albedo(&self) -> f64 {
        self.seabed_albedo
    }

    pub fn targets(&self) -> &[PlacedTarget] {
        &self.targets
    }

    pub fn camera(&self) -> &Camera {
        &self.camera
    }

    pub fn light(&self) -> &DirectionalLight {
        &self.light
    }

    pub fn ambient(&self) -> f64 {
        self.ambient
    }

    /// Same geometry seen by a different camera; the light stays tied to the new yaw.
    pub fn with_camera(&self, camera: Camera) -> Result<Scene> {
        camera.validate()?;
        Ok(Scene {
            camera,
            ..self.clone()
        })
    }

    pub fn with_light(&self, light: DirectionalLight) -> Result<Scene> {
        light.validate()?;
        Ok(Scene {
            light,
            ..self.clone()
        })
    }

    #[cfg(test)]
    pub(crate) fn camera_mut_for_tests(&mut self) -> &mut Camera {
        &mut self.camera
    }

    pub fn from_config(config: &SceneConfig) -> Result<Scene> {
        let grid = config.grid;
        let hf = make_seabed(&config.seabed.spec, grid.nx, grid.ny, grid.cell_size)?;
        let mut builder = Scene::builder(hf)
            .seabed_albedo(config.seabed.albedo)
            .camera(config.camera)
            .light(config.light)
            .ambient(config.ambient);
        for t in &config.targets {
            builder = builder.place_target(t.primitive, t.pose)?;
        }
        builder.build()
    }
}

#[derive(Debug, Clone)]
pub struct SceneBuilder {
    heightfield: Heightfield,
    seabed_albedo: f64,
    targets: Vec<PlacedTarget>,
    camera: Camera,
    light: DirectionalLight,
    ambient: f64,
}

impl SceneBuilder {
    pub fn new(heightfield: Heightfield) -> Self {
        SceneBuilder {
            heightfield,
            seabed_albedo: DEFAULT_SEABED_ALBEDO,
            targets: Vec::new(),
            camera: Camera::default(),
            light: DirectionalLight::default(),
            ambient: DEFAULT_AMBIENT,
        }
    }

    pub fn camera(mut self, camera: Camera) -> Self {
        self.camera = camera;
        self
    }

    pub fn light(mut self, light: DirectionalLight) -> Self {
        self.light = light;
        self
    }

    pub fn ambient(mut self, ambient: f64) -> Self {
        self.ambient = ambient;
        self
    }

    pub fn seabed_albedo(mut self, albedo: f64) -> Self {
        self.seabed_albedo = albedo;
        self
    }

    /// Rests `prim` on the seabed at `pose.position`.
    pub fn place_target(mut self, prim: TargetPrimitive, pose: Pose) -> Result<Self> {
        let [x, y] = pose.position;
        let ground = self.heightfield.height_at(x, y).map_err(|_| {
            Error::Placement(format!("position ({x}, {y}) is outside the heightfield extent"))
        })?;
        self.targets.push(PlacedTarget::new(prim, pose, ground)?);
        Ok(self)
    }

    pub fn targets(&self) -> &[PlacedTarget] {
        &self.targets
    }

    pub fn build(self) -> Result<Scene> {
        self.camera.validate()?;
        self.light.validate()?;
        if !(0.0..1.0).contains(&self.ambient) {
            return Err(Error::InvalidParameter(format!(
                "ambient must be in [0, 1), got {}",
                self.ambient
            )));
        }
        if !(0.0..=1.0).contains(&self.seabed_albedo) {
            return Err(Error::InvalidParameter(format!(
                "seabed albedo must be in [0, 1], got {}",
                self.seabed_albedo
            )));
        }
        Ok(Scene {
            heightfield: self.heightfield,
            seabed_albedo: self.seabed_albedo,
            targets: self.targets,
            camera: self.camera,
            light: self.light,
            ambient: self.ambient,
        })
    }
}

// ---------------------------------------------------------------------------
// JSON scene description
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub cell_size: f64,
}

impl Default for GridConfig {
    /// 40 m x 40 m at 0.1 m cells.
    fn default() -> Self {
        GridConfig {
            nx: 401,
            ny: 401,
            cell_size: 0.1,
        }
    }
}

fn default_seabed_albedo() -> f64 {
    DEFAULT_SEABED_ALBEDO
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeabedConfig {
    #[serde(flatten)]
    pub spec: SeabedSpec,
    #[serde(default = "default_seabed_albedo")]
    pub albedo: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetConfig {
    #[serde(flatten)]
    pub primitive: TargetPrimitive,
    #[serde(flatten)]
    pub pose: Pose,
}

fn default_ambient() -> f64 {
    DEFAULT_AMBIENT
}

/// On-disk scene description. Angles in degrees, lengths in metres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub seabed: SeabedConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub targets: Vec<TargetConfig>,
    #[serde(default)]
    pub camera: Camera,
    #[serde(default)]
    pub light: DirectionalLight,
    #[serde(default = "default_ambient")]
    pub ambient: f64,
}

impl SceneConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}
