//! Seeded additive, multiplicative, and shot noise.

use rand::distr::Uniform;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::ImageBuffer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Gaussian,
    Speckle,
    Poisson,
}

/// Distribution of the speckle multiplier `u` in `I + u * I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeckleMultiplier {
    /// Zero-mean uniform on `±sqrt(3 * variance)`.
    #[default]
    Uniform,
    Gaussian,
}

fn default_scale() -> f64 {
    255.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    /// Gaussian and speckle variance, intensity² units.
    #[serde(default)]
    pub variance: f64,
    /// Poisson events per unit intensity.
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub multiplier: SpeckleMultiplier,
}

impl NoiseSpec {
    pub fn gaussian(variance: f64, seed: u64) -> Self {
        NoiseSpec {
            kind: NoiseKind::Gaussian,
            variance,
            scale: default_scale(),
            seed,
            multiplier: SpeckleMultiplier::Uniform,
        }
    }

    pub fn speckle(variance: f64, seed: u64) -> Self {
        NoiseSpec {
            kind: NoiseKind::Speckle,
            ..Self::gaussian(variance, seed)
        }
    }

    pub fn poisson(scale: f64, seed: u64) -> Self {
        NoiseSpec {
            kind: NoiseKind::Poisson,
            scale,
            ..Self::gaussian(0.0, seed)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.variance >= 0.0 && self.variance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be >= 0, got {}",
                self.variance
            )));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "poisson scale must be > 0, got {}",
                self.scale
            )));
        }
        Ok(())
    }

    /// Parses `kind[:value][:seed=N]`, e.g. `speckle:0.1:seed=7` or `poisson:255`.
    ///
    /// The value is the variance for gaussian/speckle and the scale for poisson.
    /// Range checks are left to [`validate`](Self::validate).
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split(':');
        let kind = parts.next().unwrap_or_default();
        let mut spec = match kind {
            "gaussian" => Self::gaussian(0.0, 0),
            "speckle" => Self::speckle(0.0, 0),
            "poisson" => Self::poisson(default_scale(), 0),
            other => {
                return Err(Error::Config(format!(
                    "unknown noise kind {other:?} (expected gaussian, speckle or poisson)"
                )))
            }
        };
        for part in parts {
            if let Some(seed) = part.strip_prefix("seed=") {
                spec.seed = seed
                    .parse()
                    .map_err(|_| Error::Config(format!("bad noise seed {seed:?}")))?;
            } else if let Some(m) = part.strip_prefix("multiplier=") {
                spec.multiplier = match m {
                    "uniform" => SpeckleMultiplier::Uniform,
                    "gaussian" => SpeckleMultiplier::Gaussian,
                    _ => return Err(Error::Config(format!("bad speckle multiplier {m:?}"))),
                };
            } else {
                let value: f64 = part
                    .parse()
                    .map_err(|_| Error::Config(format!("bad noise parameter {part:?} in {text:?}")))?;
                match spec.kind {
                    NoiseKind::Poisson => spec.scale = value,
                    _ => spec.variance = value,
                }
            }
        }
        Ok(spec)
    }
}

/// Feeds each pixel's noisy value, before clamping, to `sink` in pixel order.
/// The noise stream is a function of `spec.seed` only.
fn map_noisy<T>(data: &[f32], spec: &NoiseSpec, sink: impl Fn(f64) -> T) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match (spec.kind, spec.multiplier) {
        (NoiseKind::Gaussian | NoiseKind::Speckle, _) if spec.variance == 0.0 => {
            data.iter().map(|&v| sink(v as f64)).collect()
        }
        (NoiseKind::Gaussian, _) => {
            let normal = Normal::new(0.0, spec.variance.sqrt()).expect("finite sigma");
            data.iter().map(|&v| sink(v as f64 + normal.sample(&mut rng))).collect()
        }
        (NoiseKind::Speckle, SpeckleMultiplier::Uniform) => {
            let half = (3.0 * spec.variance).sqrt();
            let uniform = Uniform::new(-half, half).expect("finite bounds");
            data.iter()
                .map(|&v| {
                    let u = uniform.sample(&mut rng);
                    sink(v as f64 + u * v as f64)
                })
                .collect()
        }
        (NoiseKind::Speckle, SpeckleMultiplier::Gaussian) => {
            let normal = Normal::new(0.0, spec.variance.sqrt()).expect("finite sigma");
            data.iter()
                .map(|&v| sink(v as f64 + normal.sample(&mut rng) * v as f64))
                .collect()
        }
        (NoiseKind::Poisson, _) => data
            .iter()
            .map(|&v| {
                let lambda = v as f64 * spec.scale;
                if lambda <= 0.0 {
                    sink(0.0)
                } else {
                    let count: f64 = Poisson::new(lambda).expect("positive rate").sample(&mut rng);
                    sink(count / spec.scale)
                }
            })
            .collect(),
    }
}

/// Per-pixel noisy values before clamping.
pub fn add_noise_unclamped(img: &ImageBuffer, spec: &NoiseSpec) -> Result<Vec<f64>> {
    img.require_channels(1, "add_noise")?;
    spec.validate()?;
    Ok(map_noisy(img.data(), spec, |v| v))
}

/// Adds noise per `spec` and clamps to [0, 1]. Deterministic in `spec.seed`.
pub fn add_noise(img: &ImageBuffer, spec: &NoiseSpec) -> Result<ImageBuffer> {
    img.require_channels(1, "add_noise")?;
    spec.validate()?;
    if spec.kind != NoiseKind::Poisson && spec.variance == 0.0 {
        return Ok(img.clone());
    }
    let data = map_noisy(img.data(), spec, |v| v.clamp(0.0, 1.0) as f32);
    Ok(ImageBuffer::from_raw_parts(img.width(), img.height(), 1, data))
}
