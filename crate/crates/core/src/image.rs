//! The image type passed between pipeline stages, plus PNG/PGM and raw float I/O.
//!
//! Raw float layout: three little-endian `u32` (width, height, channels)
//! followed by `width * height * channels` little-endian `f32` samples,
//! row-major with channels interleaved.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use image::{DynamicImage, GrayImage, ImageFormat, RgbImage};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f32>,
}

impl ImageBuffer {
    /// A zero-filled image with 1 or 3 channels.
    pub fn new(width: usize, height: usize, channels: usize) -> Result<Self> {
        Self::from_vec(width, height, channels, vec![0.0; width * height * channels])
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f32) -> Result<Self> {
        Self::from_vec(width, height, channels, vec![value; width * height * channels])
    }

    /// Wraps `data`; every sample must lie in [0, 1].
    pub fn from_vec(width: usize, height: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidInput(format!(
                "images have 1 or 3 channels, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::InvalidInput(format!(
                "expected {} samples for {width}x{height}x{channels}, got {}",
                width * height * channels,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidInput(format!(
                "sample {bad} outside [0, 1]"
            )));
        }
        Ok(ImageBuffer {
            width,
            height,
            channels,
            data,
        })
    }

    /// Internal constructor for producers that already guarantee the invariants.
    pub(crate) fn from_raw_parts(width: usize, height: usize, channels: usize, data: Vec<f32>) -> Self {
        debug_assert_eq!(data.len(), width * height * channels);
        debug_assert!(data.iter().all(|v| (0.0..=1.0).contains(v)));
        ImageBuffer {
            width,
            height,
            channels,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Single-channel sample; panics on RGB images in debug builds.
    #[inline]
    pub fn gray(&self, x: usize, y: usize) -> f32 {
        debug_assert_eq!(self.channels, 1);
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f32] {
        let stride = self.width * self.channels;
        &self.data[y * stride..(y + 1) * stride]
    }

    pub(crate) fn require_channels(&self, channels: usize, op: &str) -> Result<()> {
        if self.channels != channels {
            return Err(Error::InvalidInput(format!(
                "{op} expects a {channels}-channel image, got {} channels",
                self.channels
            )));
        }
        Ok(())
    }

    /// 8-bit quantization used by every integer output format: `255·v`
    /// rounded half up. The product and sum are exact in f64.
    #[inline]
    pub fn to_u8(v: f32) -> u8 {
        (v.clamp(0.0, 1.0) as f64 * 255.0 + 0.5) as u8
    }

    pub fn to_dynamic(&self) -> DynamicImage {
        let bytes: Vec<u8> = self.data.iter().map(|&v| Self::to_u8(v)).collect();
        let (w, h) = (self.width as u32, self.height as u32);
        match self.channels {
            1 => DynamicImage::ImageLuma8(GrayImage::from_raw(w, h, bytes).expect("size checked")),
            _ => DynamicImage::ImageRgb8(RgbImage::from_raw(w, h, bytes).expect("size checked")),
        }
    }

    /// Converts an 8-bit image; anything other than gray or RGB is converted to RGB.
    pub fn from_dynamic(img: &DynamicImage) -> Self {
        let (w, h) = (img.width() as usize, img.height() as usize);
        match img {
            DynamicImage::ImageLuma8(g) => Self::from_raw_parts(
                w,
                h,
                1,
                g.as_raw().iter().map(|&b| b as f32 / 255.0).collect(),
            ),
            other => {
                let rgb = other.to_rgb8();
                Self::from_raw_parts(
                    w,
                    h,
                    3,
                    rgb.as_raw().iter().map(|&b| b as f32 / 255.0).collect(),
                )
            }
        }
    }

    /// Writes PNG or binary PGM/PPM, chosen by extension (`.png`, `.pgm`, `.ppm`).
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let format = match extension(path).as_deref() {
            Some("png") => ImageFormat::Png,
            Some("pgm") | Some("ppm") | Some("pnm") => ImageFormat::Pnm,
            Some("raw") | Some("f32") => return self.save_raw(path),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "{}: unsupported image extension (use .png, .pgm, .ppm or .raw)",
                    path.display()
                )))
            }
        };
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut writer = BufWriter::new(file);
        let dynamic = self.to_dynamic();
        if format == ImageFormat::Pnm {
            use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
            let subtype = if self.channels == 1 {
                PnmSubtype::Graymap(SampleEncoding::Binary)
            } else {
                PnmSubtype::Pixmap(SampleEncoding::Binary)
            };
            dynamic.write_with_encoder(PnmEncoder::new(&mut writer).with_subtype(subtype))?;
        } else {
            dynamic.write_to(&mut writer, format)?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }

    /// Loads PNG, PGM/PPM, or the raw float format (`.raw`/`.f32`).
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if matches!(extension(path).as_deref(), Some("raw") | Some("f32")) {
            return Self::load_raw(path);
        }
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let img = image::load_from_memory(&bytes)?;
        Ok(Self::from_dynamic(&img))
    }

    pub fn to_raw_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + self.data.len() * 4);
        for dim in [self.width, self.height, self.channels] {
            out.extend_from_slice(&(dim as u32).to_le_bytes());
        }
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_raw_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 12 {
            return Err(Error::InvalidInput("raw image shorter than its header".into()));
        }
        let dim = |i: usize| u32::from_le_bytes(bytes[i * 4..i * 4 + 4].try_into().unwrap()) as usize;
        let (w, h, c) = (dim(0), dim(1), dim(2));
        let body = &bytes[12..];
        if body.len() != w * h * c * 4 {
            return Err(Error::InvalidInput(format!(
                "raw image header says {w}x{h}x{c} but body holds {} bytes",
                body.len()
            )));
        }
        let data = body
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
            .collect();
        Self::from_vec(w, h, c, data)
    }

    pub fn save_raw(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_raw_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load_raw(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_raw_bytes(&bytes)
    }
}

fn extension(path: &Path) -> Option<String> {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
}
