//! 256-level histograms and CDF-based histogram matching.

use std::path::Path;

use crate::error::{Error, Result};
use crate::image::ImageBuffer;

pub const LEVELS: usize = 256;

#[inline]
pub fn quantize(v: f32) -> usize {
    ImageBuffer::to_u8(v) as usize
}

#[inline]
pub fn level_value(level: usize) -> f32 {
    level as f32 / 255.0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    bins: [u64; LEVELS],
    total: u64,
}

impl Histogram {
    pub fn from_counts(bins: [u64; LEVELS]) -> Self {
        Histogram {
            total: bins.iter().sum(),
            bins,
        }
    }

    /// Histogram of a single-channel image after 8-bit quantization.
    pub fn of_image(img: &ImageBuffer) -> Result<Self> {
        img.require_channels(1, "histogram")?;
        let mut bins = [0u64; LEVELS];
        for &v in img.data() {
            bins[quantize(v)] += 1;
        }
        Ok(Self::from_counts(bins))
    }

    pub fn bins(&self) -> &[u64; LEVELS] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Cumulative counts; `cdf_counts()[k]` counts samples at levels `<= k`.
    pub fn cdf_counts(&self) -> [u64; LEVELS] {
        let mut out = [0u64; LEVELS];
        let mut acc = 0;
        for (o, &b) in out.iter_mut().zip(&self.bins) {
            acc += b;
            *o = acc;
        }
        out
    }

    /// Normalized CDF; empty histograms yield all zeros.
    pub fn cdf(&self) -> [f64; LEVELS] {
        let counts = self.cdf_counts();
        let mut out = [0.0; LEVELS];
        if self.total > 0 {
            for (o, c) in out.iter_mut().zip(counts) {
                *o = c as f64 / self.total as f64;
            }
        }
        out
    }

    /// Reads a reference histogram from an image (converted to gray if RGB)
    /// or from a plain-text file of 256 whitespace-separated counts.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase());
        if matches!(ext.as_deref(), Some("txt") | Some("hist") | Some("csv")) {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            return Self::parse_counts(&text)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())));
        }
        let img = ImageBuffer::load(path)?;
        let gray = if img.channels() == 3 {
            super::to_grayscale(&img)?
        } else {
            img
        };
        Self::of_image(&gray)
    }

    pub fn parse_counts(text: &str) -> Result<Self> {
        let values: Vec<u64> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| Error::InvalidInput(format!("bad histogram count {s:?}")))
            })
            .collect::<Result<_>>()?;
        let bins: [u64; LEVELS] = values.try_into().map_err(|v: Vec<u64>| {
            Error::InvalidInput(format!("expected {LEVELS} histogram counts, got {}", v.len()))
        })?;
        Ok(Self::from_counts(bins))
    }

    pub fn to_counts_text(&self) -> String {
        let mut s = String::with_capacity(LEVELS * 4);
        for b in &self.bins {
            s.push_str(&b.to_string());
            s.push('\n');
        }
        s
    }

    /// Histogram of `N * pdf` for a Rayleigh intensity distribution with scale `sigma`.
    ///
    /// Rayleigh-distributed amplitude is the usual model for fully developed
    /// seabed backscatter; it serves as a built-in matching target when no
    /// reference imagery is available.
    pub fn rayleigh(sigma: f64, total: u64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rayleigh sigma must be > 0, got {sigma}"
            )));
        }
        let cdf = |x: f64| 1.0 - (-x * x / (2.0 * sigma * sigma)).exp();
        let mut bins = [0u64; LEVELS];
        let mut assigned = 0u64;
        for (k, b) in bins.iter_mut().enumerate() {
            // Level k collects the mass quantizing to it; the last level takes the tail.
            let hi = if k + 1 == LEVELS { 1.0 } else { cdf((k as f64 + 0.5) / 255.0) };
            let target = (hi * total as f64).round() as u64;
            *b = target.saturating_sub(assigned);
            assigned += *b;
        }
        bins[LEVELS - 1] += total - assigned;
        Ok(Self::from_counts(bins))
    }
}

/// Level map `s -> smallest r with CDF_ref(r) >= CDF_src(s)`, in exact integer arithmetic.
pub fn matching_lut(src: &Histogram, reference: &Histogram) -> Result<[usize; LEVELS]> {
    if reference.total == 0 {
        return Err(Error::InvalidInput("reference histogram is empty".into()));
    }
    if src.total == 0 {
        return Err(Error::InvalidInput("source image is empty".into()));
    }
    let cs = src.cdf_counts();
    let cr = reference.cdf_counts();
    let (ns, nr) = (src.total as u128, reference.total as u128);
    let mut lut = [0usize; LEVELS];
    let mut r = 0;
    for s in 0..LEVELS {
        // cr[r] / nr >= cs[s] / ns, cross-multiplied.
        while r < LEVELS - 1 && (cr[r] as u128) * ns < (cs[s] as u128) * nr {
            r += 1;
        }
        lut[s] = r;
    }
    Ok(lut)
}

/// Remaps a single-channel image so its 256-level CDF follows `reference`.
pub fn histogram_match(src: &ImageBuffer, reference: &Histogram) -> Result<ImageBuffer> {
    src.require_channels(1, "histogram_match")?;
    if src.data().is_empty() {
        return Err(Error::InvalidInput("source image is empty".into()));
    }
    let levels: Vec<u8> = src.data().iter().map(|&v| quantize(v) as u8).collect();
    let mut bins = [0u64; LEVELS];
    for &l in &levels {
        bins[l as usize] += 1;
    }
    let lut = matching_lut(&Histogram::from_counts(bins), reference)?;
    let values: [f32; LEVELS] = std::array::from_fn(|s| level_value(lut[s]));
    let data = levels.iter().map(|&l| values[l as usize]).collect();
    Ok(ImageBuffer::from_raw_parts(src.width(), src.height(), 1, data))
}

/// Sup-norm distance between two normalized CDFs.
pub fn cdf_distance(a: &Histogram, b: &Histogram) -> f64 {
    a.cdf()
        .iter()
        .zip(b.cdf())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
