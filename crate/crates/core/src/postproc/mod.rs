//! Turns rendered RGB frames into sonar-styled intensity images.
//!
//! The usual chain is grayscale, histogram match, then noise; the copper
//! colormap is for viewing only.

mod histogram;
mod noise;

use serde::{Deserialize, Serialize};

pub use histogram::{cdf_distance, histogram_match, level_value, matching_lut, quantize, Histogram, LEVELS};
pub use noise::{add_noise, add_noise_unclamped, NoiseKind, NoiseSpec, SpeckleMultiplier};

use crate::error::{Error, Result};
use crate::image::ImageBuffer;

/// Rec.601 luma weights.
pub const LUMA: [f32; 3] = [0.299, 0.587, 0.114];

pub fn to_grayscale(img: &ImageBuffer) -> Result<ImageBuffer> {
    img.require_channels(3, "to_grayscale")?;
    let data = img
        .data()
        .chunks_exact(3)
        .map(|p| (LUMA[0] * p[0] + LUMA[1] * p[1] + LUMA[2] * p[2]).clamp(0.0, 1.0))
        .collect();
    Ok(ImageBuffer::from_raw_parts(img.width(), img.height(), 1, data))
}

/// MATLAB-style copper: `(min(1, 1.25 g), 0.7812 g, 0.4975 g)`.
pub fn apply_copper_colormap(img: &ImageBuffer) -> Result<ImageBuffer> {
    img.require_channels(1, "apply_copper_colormap")?;
    let mut data = Vec::with_capacity(img.data().len() * 3);
    for &g in img.data() {
        data.extend_from_slice(&copper(g));
    }
    Ok(ImageBuffer::from_raw_parts(img.width(), img.height(), 3, data))
}

#[inline]
pub fn copper(g: f32) -> [f32; 3] {
    [(1.25 * g).min(1.0), 0.7812 * g, 0.4975 * g]
}

/// Places the horizontally mirrored port swath, a zero-filled dead-zone, and
/// the starboard swath side by side, so range grows away from nadir on both sides.
pub fn stitch_sidescan(port: &ImageBuffer, starboard: &ImageBuffer, deadzone_px: usize) -> Result<ImageBuffer> {
    port.require_channels(1, "stitch_sidescan")?;
    starboard.require_channels(1, "stitch_sidescan")?;
    if port.height() != starboard.height() {
        return Err(Error::InvalidInput(format!(
            "port height {} does not match starboard height {}",
            port.height(),
            starboard.height()
        )));
    }
    let (wp, ws) = (port.width(), starboard.width());
    let width = wp + deadzone_px + ws;
    let mut data = Vec::with_capacity(width * port.height());
    for y in 0..port.height() {
        data.extend(port.row(y).iter().rev());
        data.extend(std::iter::repeat_n(0.0f32, deadzone_px));
        data.extend_from_slice(starboard.row(y));
    }
    Ok(ImageBuffer::from_raw_parts(width, port.height(), 1, data))
}

/// Where a histogram-matching reference comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceSource {
    /// 8-bit image or 256-line count file.
    File(std::path::PathBuf),
    /// Built-in Rayleigh backscatter histogram.
    Rayleigh { sigma: f64 },
}

impl ReferenceSource {
    pub fn load(&self) -> Result<Histogram> {
        match self {
            ReferenceSource::File(path) => Histogram::load(path),
            ReferenceSource::Rayleigh { sigma } => Histogram::rayleigh(*sigma, 1 << 20),
        }
    }
}

/// One step of a post-processing chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PostStep {
    Match(ReferenceSource),
    Noise(NoiseSpec),
}

/// A loaded, ready-to-run chain: grayscale (if needed), then each step in order.
#[derive(Debug, Clone)]
pub struct Chain {
    steps: Vec<LoadedStep>,
}

#[derive(Debug, Clone)]
enum LoadedStep {
    Match(Box<Histogram>),
    Noise(NoiseSpec),
}

impl Chain {
    pub fn load(steps: &[PostStep]) -> Result<Self> {
        let steps = steps
            .iter()
            .map(|s| {
                Ok(match s {
                    PostStep::Match(src) => LoadedStep::Match(Box::new(src.load()?)),
                    PostStep::Noise(spec) => {
                        spec.validate()?;
                        LoadedStep::Noise(*spec)
                    }
                })
            })
            .collect::<Result<_>>()?;
        Ok(Chain { steps })
    }

    /// Runs the chain. Noise step `k` uses `seed_for(k, spec)` as its seed.
    pub fn apply(&self, img: &ImageBuffer, seed_for: impl Fn(usize, &NoiseSpec) -> u64) -> Result<ImageBuffer> {
        let mut out = if img.channels() == 3 {
            to_grayscale(img)?
        } else {
            img.clone()
        };
        for (k, step) in self.steps.iter().enumerate() {
            out = match step {
                LoadedStep::Match(reference) => histogram_match(&out, reference)?,
                LoadedStep::Noise(spec) => add_noise(&out, &spec.with_seed(seed_for(k, spec)))?,
            };
        }
        Ok(out)
    }
}
