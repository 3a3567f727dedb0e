//! Histogram-of-oriented-gradients descriptor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::ImageBuffer;

pub type FeatureVector = Vec<f64>;

/// Anything that turns a single-channel image into a fixed-length vector.
pub trait FeatureExtractor: Sync {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn extract(&self, img: &ImageBuffer) -> Result<FeatureVector>;
}

pub const MIN_INPUT_SIZE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HogConfig {
    /// Images are resized to `size`×`size` before extraction.
    pub size: usize,
    pub cell: usize,
    /// Block edge in cells; blocks step one cell at a time.
    pub block: usize,
    pub bins: usize,
    pub epsilon: f64,
}

impl Default for HogConfig {
    fn default() -> Self {
        HogConfig {
            size: 128,
            cell: 8,
            block: 2,
            bins: 9,
            epsilon: 1e-6,
        }
    }
}

impl HogConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cell == 0 || self.bins == 0 || self.block == 0 || !self.size.is_multiple_of(self.cell) {
            return Err(Error::Config(format!(
                "hog: size {} must be a positive multiple of cell {}, with bins and block >= 1",
                self.size, self.cell
            )));
        }
        if self.size / self.cell < self.block {
            return Err(Error::Config("hog: block larger than the cell grid".into()));
        }
        Ok(())
    }

    pub fn cells_per_side(&self) -> usize {
        self.size / self.cell
    }

    pub fn blocks_per_side(&self) -> usize {
        self.cells_per_side() - self.block + 1
    }

    pub fn descriptor_len(&self) -> usize {
        let b = self.blocks_per_side();
        b * b * self.block * self.block * self.bins
    }
}

/// Bilinear resize of a single-channel image, sampling at pixel centres.
/// Same-size resizes return the input unchanged.
pub fn resize_bilinear(img: &ImageBuffer, w: usize, h: usize) -> Result<ImageBuffer> {
    img.require_channels(1, "resize")?;
    if (img.width(), img.height()) == (w, h) {
        return Ok(img.clone());
    }
    let (sw, sh) = (img.width(), img.height());
    let sx = sw as f64 / w as f64;
    let sy = sh as f64 / h as f64;
    let src = img.data();
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let fy = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (sh - 1) as f64);
        let y0 = fy.floor() as usize;
        let y1 = (y0 + 1).min(sh - 1);
        let ty = fy - y0 as f64;
        for x in 0..w {
            let fx = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (sw - 1) as f64);
            let x0 = fx.floor() as usize;
            let x1 = (x0 + 1).min(sw - 1);
            let tx = fx - x0 as f64;
            let p = |xx: usize, yy: usize| src[yy * sw + xx] as f64;
            let top = p(x0, y0) * (1.0 - tx) + p(x1, y0) * tx;
            let bot = p(x0, y1) * (1.0 - tx) + p(x1, y1) * tx;
            out.push((top * (1.0 - ty) + bot * ty) as f32);
        }
    }
    ImageBuffer::from_vec(w, h, 1, out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Hog {
    pub config: HogConfig,
}

impl Hog {
    pub fn new(config: HogConfig) -> Result<Self> {
        config.validate()?;
        Ok(Hog { config })
    }

    fn prepare(&self, img: &ImageBuffer) -> Result<ImageBuffer> {
        img.require_channels(1, "feature extraction")?;
        if img.width() < MIN_INPUT_SIZE || img.height() < MIN_INPUT_SIZE {
            return Err(Error::InvalidInput(format!(
                "image {}x{} is smaller than {MIN_INPUT_SIZE}x{MIN_INPUT_SIZE}",
                img.width(),
                img.height()
            )));
        }
        resize_bilinear(img, self.config.size, self.config.size)
    }

    /// Per-cell orientation histograms, row-major over the cell grid, each
    /// `bins` long.
    ///
    /// Gradients are central differences with edge replication. Bin centres
    /// sit at `k·180°/bins`; each gradient splits its magnitude linearly
    /// between the two nearest centres.
    pub fn cell_histograms(&self, img: &ImageBuffer) -> Result<Vec<f64>> {
        let img = self.prepare(img)?;
        let HogConfig { size, cell, bins, .. } = self.config;
        let nc = size / cell;
        let d = img.data();
        let px = |x: usize, y: usize| d[y * size + x] as f64;
        let bin_width = std::f64::consts::PI / bins as f64;
        let mut hist = vec![0.0; nc * nc * bins];
        for y in 0..size {
            let (ym, yp) = (y.saturating_sub(1), (y + 1).min(size - 1));
            for x in 0..size {
                let (xm, xp) = (x.saturating_sub(1), (x + 1).min(size - 1));
                let gx = px(xp, y) - px(xm, y);
                let gy = px(x, yp) - px(x, ym);
                let mag = gx.hypot(gy);
                if mag == 0.0 {
                    continue;
                }
                let mut ang = gy.atan2(gx);
                if ang < 0.0 {
                    ang += std::f64::consts::PI;
                }
                let pos = ang / bin_width;
                let lo = pos.floor();
                let frac = pos - lo;
                let b0 = lo as usize % bins;
                let b1 = (b0 + 1) % bins;
                let base = ((y / cell) * nc + x / cell) * bins;
                hist[base + b0] += mag * (1.0 - frac);
                hist[base + b1] += mag * frac;
            }
        }
        Ok(hist)
    }
}

impl FeatureExtractor for Hog {
    fn len(&self) -> usize {
        self.config.descriptor_len()
    }

    fn extract(&self, img: &ImageBuffer) -> Result<FeatureVector> {
        let hist = self.cell_histograms(img)?;
        let HogConfig { block, bins, epsilon, .. } = self.config;
        let nc = self.config.cells_per_side();
        let nb = self.config.blocks_per_side();
        let mut out = Vec::with_capacity(self.len());
        let mut v = Vec::with_capacity(block * block * bins);
        for by in 0..nb {
            for bx in 0..nb {
                v.clear();
                for cy in by..by + block {
                    for cx in bx..bx + block {
                        let base = (cy * nc + cx) * bins;
                        v.extend_from_slice(&hist[base..base + bins]);
                    }
                }
                let norm = (v.iter().map(|a| a * a).sum::<f64>() + epsilon * epsilon).sqrt();
                out.extend(v.iter().map(|a| a / norm));
            }
        }
        Ok(out)
    }
}
