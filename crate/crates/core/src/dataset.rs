//! Bulk, deterministic generation of labelled synthetic sonar datasets.
//!
//! A [`SweepConfig`] expands into an ordered list of [`Job`]s. Job `i` gets
//! the seed `seed::mix2(master_seed, i)`; its seabed seed, aspect jitter and
//! per-step noise seeds are derived from that. Jobs run in parallel, but the
//! manifest is assembled in job order, so output does not depend on the
//! worker count.
//!
//! Manifest format (JSON Lines): the first line is `{"config": <SweepConfig>}`,
//! each following line is one [`Record`].

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::ImageBuffer;
use crate::postproc::{Chain, PostStep};
use crate::render::render;
use crate::scene::{
    make_seabed, Camera, DirectionalLight, GridConfig, Pose, Scene, SeabedKind, SeabedSpec, SeabedType,
    Shape, ShapeKind, TargetPrimitive, DEFAULT_AMBIENT, DEFAULT_SEABED_ALBEDO,
};
use crate::seed::mix2;

// Sub-stream tags for seeds derived from a job seed.
const SEABED_STREAM: u64 = 1;
const JITTER_STREAM: u64 = 2;
const NOISE_STREAM: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AspectAngles {
    List(Vec<f64>),
    Sweep { start: f64, step: f64, count: usize },
}

impl Default for AspectAngles {
    /// 0°..350° in 10° steps.
    fn default() -> Self {
        AspectAngles::Sweep {
            start: 0.0,
            step: 10.0,
            count: 36,
        }
    }
}

impl AspectAngles {
    pub fn angles(&self) -> Vec<f64> {
        match self {
            AspectAngles::List(v) => v.clone(),
            AspectAngles::Sweep { start, step, count } => {
                (0..*count).map(|k| start + step * k as f64).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    #[default]
    Png,
    Pgm,
}

impl ImageFormat {
    fn extension(self) -> &'static str {
        match self {
            ImageFormat::Png => "png",
            ImageFormat::Pgm => "pgm",
        }
    }
}

/// Default dimensions for each target shape.
pub fn default_shape(kind: ShapeKind) -> Shape {
    match kind {
        ShapeKind::Cube => Shape::Cube { edge: 1.0 },
        ShapeKind::Cylinder => Shape::Cylinder {
            radius: 0.5,
            length: 2.0,
        },
        ShapeKind::Cone => Shape::Cone {
            radius: 0.5,
            height: 1.0,
        },
        ShapeKind::Sphere => Shape::Sphere { radius: 0.5 },
    }
}

fn default_altitudes() -> Vec<f64> {
    vec![2.5]
}

fn default_seabeds() -> Vec<SeabedType> {
    vec![SeabedType::Mud]
}

fn default_image_size() -> usize {
    2048
}

fn default_fov() -> f64 {
    120.0
}

fn default_jitter() -> f64 {
    2.0
}

fn default_ambient() -> f64 {
    DEFAULT_AMBIENT
}

fn default_seabed_albedo() -> f64 {
    DEFAULT_SEABED_ALBEDO
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("dataset")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Images per shape; the shape set is the key set.
    pub counts: BTreeMap<ShapeKind, usize>,
    #[serde(default = "default_seabeds")]
    pub seabeds: Vec<SeabedType>,
    #[serde(default)]
    pub aspect_angles: AspectAngles,
    /// Uniform ± perturbation added to each aspect angle, degrees.
    #[serde(default = "default_jitter")]
    pub angle_jitter_deg: f64,
    /// Camera height above the seabed at the target, metres.
    #[serde(default = "default_altitudes")]
    pub camera_altitudes: Vec<f64>,
    #[serde(default = "default_image_size")]
    pub image_size: usize,
    #[serde(default = "default_fov")]
    pub fov_deg: f64,
    #[serde(default)]
    pub grid: GridConfig,
    /// Per-shape dimension overrides.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub shapes: BTreeMap<ShapeKind, Shape>,
    /// Per-seabed parameter overrides; seeds come from the job seed.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub seabed_params: BTreeMap<SeabedType, SeabedKind>,
    #[serde(default = "default_seabed_albedo")]
    pub seabed_albedo: f64,
    #[serde(default)]
    pub light: DirectionalLight,
    #[serde(default = "default_ambient")]
    pub ambient: f64,
    #[serde(default)]
    pub postproc: Vec<PostStep>,
    #[serde(default)]
    pub image_format: ImageFormat,
    pub master_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl SweepConfig {
    /// A config with defaults for everything but the counts and seed.
    pub fn new(counts: BTreeMap<ShapeKind, usize>, master_seed: u64) -> Self {
        SweepConfig {
            counts,
            seabeds: default_seabeds(),
            aspect_angles: AspectAngles::default(),
            angle_jitter_deg: default_jitter(),
            camera_altitudes: default_altitudes(),
            image_size: default_image_size(),
            fov_deg: default_fov(),
            grid: GridConfig::default(),
            shapes: BTreeMap::new(),
            seabed_params: BTreeMap::new(),
            seabed_albedo: DEFAULT_SEABED_ALBEDO,
            light: DirectionalLight::default(),
            ambient: DEFAULT_AMBIENT,
            postproc: Vec::new(),
            image_format: ImageFormat::Png,
            master_seed,
            output_dir: default_output_dir(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.counts.is_empty() {
            return bad("sweep needs at least one shape count".into());
        }
        if let Some((k, _)) = self.counts.iter().find(|(_, &n)| n == 0) {
            return bad(format!("count for {} must be > 0", k.label()));
        }
        if self.seabeds.is_empty() {
            return bad("sweep needs at least one seabed".into());
        }
        if self.aspect_angles.angles().is_empty() {
            return bad("aspect angle sweep is empty".into());
        }
        if self.camera_altitudes.is_empty() || self.camera_altitudes.iter().any(|a| a.is_nan() || *a <= 0.0) {
            return bad("camera altitudes must be a non-empty list of positive values".into());
        }
        if self.angle_jitter_deg.is_nan() || self.angle_jitter_deg < 0.0 {
            return bad("angle_jitter_deg must be >= 0".into());
        }
        if self.image_size == 0 {
            return bad("image_size must be >= 1".into());
        }
        for (kind, shape) in &self.shapes {
            if shape.kind() != *kind {
                return bad(format!("shape override for {} has shape {}", kind.label(), shape.kind().label()));
            }
            TargetPrimitive::new(*shape).validate()?;
        }
        for (ty, kind) in &self.seabed_params {
            if kind.seabed_type() != *ty {
                return bad(format!("seabed override for {} has kind {}", ty.label(), kind.seabed_type().label()));
            }
        }
        Ok(())
    }

    pub fn total_images(&self) -> usize {
        self.counts.values().sum()
    }
}

/// One image to produce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Job {
    pub index: usize,
    pub shape: ShapeKind,
    pub seabed: SeabedType,
    pub aspect_deg: f64,
    pub altitude: f64,
    pub seed: u64,
}

/// Per-image seed: a documented, stable bijection of the index.
pub fn image_seed(master_seed: u64, index: usize) -> u64 {
    mix2(master_seed, index as u64)
}

/// Expands a validated config into jobs, shapes in label order.
///
/// Within a shape, image `j` cycles seabeds fastest, then aspect angles,
/// then altitudes; further images are replicates with fresh seeds.
pub fn plan_jobs(cfg: &SweepConfig) -> Result<Vec<Job>> {
    cfg.validate()?;
    let angles = cfg.aspect_angles.angles();
    let (ns, na) = (cfg.seabeds.len(), angles.len());
    let nalt = cfg.camera_altitudes.len();
    let mut jobs = Vec::with_capacity(cfg.total_images());
    for (&shape, &count) in &cfg.counts {
        for j in 0..count {
            let index = jobs.len();
            let seed = image_seed(cfg.master_seed, index);
            let base = angles[(j / ns) % na];
            let jitter = if cfg.angle_jitter_deg > 0.0 {
                let mut rng = ChaCha8Rng::seed_from_u64(mix2(seed, JITTER_STREAM));
                rng.random_range(-cfg.angle_jitter_deg..=cfg.angle_jitter_deg)
            } else {
                0.0
            };
            jobs.push(Job {
                index,
                shape,
                seabed: cfg.seabeds[j % ns],
                aspect_deg: crate::scene::normalize_deg(base + jitter),
                altitude: cfg.camera_altitudes[(j / (ns * na)) % nalt],
                seed,
            });
        }
    }
    Ok(jobs)
}

/// The scene for one job: a single target at the grid centre under a nadir camera.
pub fn job_scene(cfg: &SweepConfig, job: &Job) -> Result<Scene> {
    let kind = cfg
        .seabed_params
        .get(&job.seabed)
        .copied()
        .unwrap_or_else(|| SeabedKind::default_for(job.seabed));
    let spec = SeabedSpec::new(kind, mix2(job.seed, SEABED_STREAM));
    let hf = make_seabed(&spec, cfg.grid.nx, cfg.grid.ny, cfg.grid.cell_size)?;
    let ground = hf.height_at(0.0, 0.0)?;
    let shape = cfg.shapes.get(&job.shape).copied().unwrap_or_else(|| default_shape(job.shape));
    let camera = Camera {
        position: crate::geom::Vec3::new(0.0, 0.0, ground + job.altitude),
        fov_deg: cfg.fov_deg,
        width: cfg.image_size,
        height: cfg.image_size,
        yaw_deg: 0.0,
    };
    Scene::builder(hf)
        .seabed_albedo(cfg.seabed_albedo)
        .camera(camera)
        .light(cfg.light)
        .ambient(cfg.ambient)
        .place_target(TargetPrimitive::new(shape), Pose::new(0.0, 0.0, job.aspect_deg))?
        .build()
}

/// Seed for noise step `step` of a job.
pub fn noise_seed(job_seed: u64, step: usize) -> u64 {
    mix2(job_seed, NOISE_STREAM + step as u64)
}

/// Renders and post-processes one job without touching the filesystem.
pub fn produce_image(cfg: &SweepConfig, chain: &Chain, job: &Job) -> Result<(ImageBuffer, JobTiming)> {
    let start = Instant::now();
    let scene = job_scene(cfg, job)?;
    let rgb = render(&scene)?;
    let rendered = Instant::now();
    let out = chain.apply(&rgb, |k, _| noise_seed(job.seed, k))?;
    let done = Instant::now();
    Ok((
        out,
        JobTiming {
            render_seconds: (rendered - start).as_secs_f64(),
            postproc_seconds: (done - rendered).as_secs_f64(),
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JobTiming {
    /// Scene construction plus rendering.
    pub render_seconds: f64,
    pub postproc_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub index: usize,
    /// Relative to the manifest's directory.
    pub image_path: PathBuf,
    pub shape: ShapeKind,
    pub seabed: SeabedType,
    pub aspect_deg: f64,
    pub altitude: f64,
    pub seed: u64,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub config: SweepConfig,
    pub records: Vec<Record>,
}

#[derive(Serialize, Deserialize)]
struct Head {
    config: SweepConfig,
}

pub const MANIFEST_NAME: &str = "manifest.jsonl";

impl DatasetManifest {
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = serde_json::to_string(&Head {
            config: self.config.clone(),
        })?;
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head: Head = serde_json::from_str(
            lines
                .next()
                .ok_or_else(|| Error::InvalidInput("manifest is empty".into()))?,
        )?;
        let records = lines
            .map(|l| serde_json::from_str(l).map_err(Error::from))
            .collect::<Result<Vec<Record>>>()?;
        let mut seen = HashSet::new();
        if let Some(dup) = records.iter().find(|r| !seen.insert(&r.image_path)) {
            return Err(Error::InvalidInput(format!(
                "duplicate image path {} in manifest",
                dup.image_path.display()
            )));
        }
        Ok(DatasetManifest {
            config: head.config,
            records,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = self.to_jsonl()?;
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_jsonl(&text)
    }

    pub fn count(&self, split: Split) -> usize {
        self.records.iter().filter(|r| r.split == split).count()
    }
}

/// Generates every image of the sweep into `cfg.output_dir` and writes the manifest.
pub fn generate_dataset(cfg: &SweepConfig) -> Result<DatasetManifest> {
    generate_dataset_timed(cfg).map(|(m, _)| m)
}

/// Like [`generate_dataset`], also returning per-image timings in job order.
pub fn generate_dataset_timed(cfg: &SweepConfig) -> Result<(DatasetManifest, Vec<JobTiming>)> {
    let jobs = plan_jobs(cfg)?;
    let chain = Chain::load(&cfg.postproc)?;
    let dir = &cfg.output_dir;
    let images = dir.join("images");
    fs::create_dir_all(&images).map_err(|e| Error::io(&images, e))?;

    let results: Vec<Result<(Record, JobTiming)>> = jobs
        .par_iter()
        .map(|job| {
            let (img, timing) = produce_image(cfg, &chain, job)?;
            let rel = PathBuf::from("images").join(format!(
                "{:05}_{}_{}.{}",
                job.index,
                job.shape.label(),
                job.seabed.label(),
                cfg.image_format.extension()
            ));
            img.save(dir.join(&rel))?;
            Ok((
                Record {
                    index: job.index,
                    image_path: rel,
                    shape: job.shape,
                    seabed: job.seabed,
                    aspect_deg: job.aspect_deg,
                    altitude: job.altitude,
                    seed: job.seed,
                    split: Split::Test,
                },
                timing,
            ))
        })
        .collect();

    let mut records = Vec::with_capacity(results.len());
    let mut timings = Vec::with_capacity(results.len());
    for r in results {
        let (rec, t) = r?;
        records.push(rec);
        timings.push(t);
    }
    let manifest = DatasetManifest {
        config: cfg.clone(),
        records,
    };
    manifest.write(dir.join(MANIFEST_NAME))?;
    Ok((manifest, timings))
}

/// Marks exactly `train_counts[shape]` records per shape as train (seeded
/// sampling without replacement) and every other record as test.
pub fn split_manifest(
    manifest: &DatasetManifest,
    train_counts: &BTreeMap<ShapeKind, usize>,
    seed: u64,
) -> Result<DatasetManifest> {
    let mut out = manifest.clone();
    for r in &mut out.records {
        r.split = Split::Test;
    }
    for (&shape, &want) in train_counts {
        let members: Vec<usize> = out
            .records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.shape == shape)
            .map(|(i, _)| i)
            .collect();
        if want > members.len() {
            return Err(Error::InvalidParameter(format!(
                "requested {want} {} training images but only {} exist",
                shape.label(),
                members.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix2(seed, shape as u64));
        for k in rand::seq::index::sample(&mut rng, members.len(), want) {
            out.records[members[k]].split = Split::Train;
        }
    }
    Ok(out)
}

/// Parses `cylinder=21,cube=27,sphere=32`.
pub fn parse_counts(text: &str) -> Result<BTreeMap<ShapeKind, usize>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, n) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected shape=count, got {part:?}")))?;
        let kind = ShapeKind::from_label(name.trim())
            .ok_or_else(|| Error::Config(format!("unknown shape {name:?}")))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad count {n:?} for {name}")))?;
        out.insert(kind, n);
    }
    Ok(out)
}
