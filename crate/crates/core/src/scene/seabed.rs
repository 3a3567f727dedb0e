//! Procedural seabed generators: sand ripples, mud, and rock.
//!
//! All three are pure functions of their parameters and seed. Mud and rock
//! are built on seeded 2-D gradient noise (random unit gradients on an
//! integer lattice, blended with the cubic smoothstep).

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::heightfield::Heightfield;
use crate::error::{Error, Result};
use crate::seed::{mix, mix2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeabedType {
    Ripple,
    Mud,
    Rock,
}

impl SeabedType {
    pub const ALL: [SeabedType; 3] = [SeabedType::Ripple, SeabedType::Mud, SeabedType::Rock];

    pub fn label(self) -> &'static str {
        match self {
            SeabedType::Ripple => "ripple",
            SeabedType::Mud => "mud",
            SeabedType::Rock => "rock",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RippleParams {
    /// Crest height above mean, metres.
    pub amplitude: f64,
    pub wavelength: f64,
    /// Direction of the ripple wave vector, degrees from +x.
    pub direction_deg: f64,
    /// Peak phase perturbation as a fraction of a full cycle.
    pub phase_jitter: f64,
}

impl Default for RippleParams {
    fn default() -> Self {
        RippleParams {
            amplitude: 0.25,
            wavelength: 2.0,
            direction_deg: 0.0,
            phase_jitter: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MudParams {
    pub roughness_amplitude: f64,
    pub correlation_length: f64,
}

impl Default for MudParams {
    fn default() -> Self {
        MudParams {
            roughness_amplitude: 0.02,
            correlation_length: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RockParams {
    pub base_amplitude: f64,
    pub octaves: u32,
    pub lacunarity: f64,
    pub gain: f64,
    /// Feature size of the first octave, metres.
    pub base_wavelength: f64,
}

impl Default for RockParams {
    fn default() -> Self {
        RockParams {
            base_amplitude: 0.6,
            octaves: 5,
            lacunarity: 2.0,
            gain: 0.5,
            base_wavelength: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SeabedKind {
    Ripple(RippleParams),
    Mud(MudParams),
    Rock(RockParams),
}

impl SeabedKind {
    pub fn seabed_type(&self) -> SeabedType {
        match self {
            SeabedKind::Ripple(_) => SeabedType::Ripple,
            SeabedKind::Mud(_) => SeabedType::Mud,
            SeabedKind::Rock(_) => SeabedType::Rock,
        }
    }

    /// Default parameters for a seabed type.
    pub fn default_for(ty: SeabedType) -> Self {
        match ty {
            SeabedType::Ripple => SeabedKind::Ripple(RippleParams::default()),
            SeabedType::Mud => SeabedKind::Mud(MudParams::default()),
            SeabedType::Rock => SeabedKind::Rock(RockParams::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeabedSpec {
    #[serde(flatten)]
    pub kind: SeabedKind,
    #[serde(default)]
    pub seed: u64,
}

impl SeabedSpec {
    pub fn new(kind: SeabedKind, seed: u64) -> Self {
        SeabedSpec { kind, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self.kind {
            SeabedKind::Ripple(p) => {
                if !(p.amplitude >= 0.0 && p.amplitude.is_finite()) {
                    return bad(format!("ripple amplitude must be >= 0, got {}", p.amplitude));
                }
                if !(p.wavelength > 0.0 && p.wavelength.is_finite()) {
                    return bad(format!("ripple wavelength must be > 0, got {}", p.wavelength));
                }
                if !(p.phase_jitter >= 0.0 && p.phase_jitter.is_finite() && p.direction_deg.is_finite()) {
                    return bad("ripple phase_jitter must be >= 0 and direction finite".into());
                }
            }
            SeabedKind::Mud(p) => {
                if !(p.roughness_amplitude >= 0.0 && p.roughness_amplitude.is_finite()) {
                    return bad(format!(
                        "mud roughness_amplitude must be >= 0, got {}",
                        p.roughness_amplitude
                    ));
                }
                if !(p.correlation_length > 0.0 && p.correlation_length.is_finite()) {
                    return bad(format!(
                        "mud correlation_length must be > 0, got {}",
                        p.correlation_length
                    ));
                }
            }
            SeabedKind::Rock(p) => {
                if !(p.base_amplitude >= 0.0 && p.base_amplitude.is_finite()) {
                    return bad(format!("rock base_amplitude must be >= 0, got {}", p.base_amplitude));
                }
                if p.octaves < 1 {
                    return bad("rock octaves must be >= 1".into());
                }
                if !(p.gain > 0.0 && p.gain < 1.0) {
                    return bad(format!("rock gain must be in (0, 1), got {}", p.gain));
                }
                if !(p.lacunarity > 0.0 && p.lacunarity.is_finite()) {
                    return bad(format!("rock lacunarity must be > 0, got {}", p.lacunarity));
                }
                if !(p.base_wavelength > 0.0 && p.base_wavelength.is_finite()) {
                    return bad(format!(
                        "rock base_wavelength must be > 0, got {}",
                        p.base_wavelength
                    ));
                }
            }
        }
        Ok(())
    }

    /// Continuous elevation at world `(x, y)`; heightfield nodes sample this.
    pub fn elevation(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            SeabedKind::Ripple(p) => {
                let (s, c) = p.direction_deg.to_radians().sin_cos();
                let along = x * c + y * s;
                let jitter = if p.phase_jitter > 0.0 {
                    let scale = 4.0 * p.wavelength;
                    TAU * p.phase_jitter * gradient_noise(self.seed, x / scale, y / scale)
                } else {
                    0.0
                };
                p.amplitude * (TAU * along / p.wavelength + jitter).sin()
            }
            SeabedKind::Mud(p) => {
                let l = p.correlation_length;
                p.roughness_amplitude * gradient_noise(self.seed, x / l, y / l)
            }
            SeabedKind::Rock(p) => {
                let mut amp = p.base_amplitude;
                let mut freq = 1.0 / p.base_wavelength;
                let mut sum = 0.0;
                for octave in 0..p.octaves {
                    let octave_seed = mix2(self.seed, octave as u64);
                    // Per-octave lattice offset keeps lattice points from lining up across octaves.
                    let ox = unit(mix(octave_seed ^ 0x5bd1_e995)) * 97.0;
                    let oy = unit(mix(octave_seed ^ 0x1b87_3593)) * 97.0;
                    sum += amp * gradient_noise(octave_seed, x * freq + ox, y * freq + oy);
                    amp *= p.gain;
                    freq *= p.lacunarity;
                }
                sum
            }
        }
    }
}

/// Samples `spec` on an `nx * ny` node grid centred on the world origin.
pub fn make_seabed(spec: &SeabedSpec, nx: usize, ny: usize, cell_size: f64) -> Result<Heightfield> {
    spec.validate()?;
    if nx < 2 || ny < 2 || !(cell_size > 0.0 && cell_size.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "seabed grid {nx}x{ny} with cell size {cell_size} is degenerate"
        )));
    }
    Heightfield::from_fn(nx, ny, cell_size, |x, y| spec.elevation(x, y))
}

#[inline]
fn unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

#[inline]
fn lattice_gradient(seed: u64, ix: i64, iy: i64) -> (f64, f64) {
    let h = mix(mix2(seed, ix as u64) ^ (iy as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let angle = unit(h) * TAU;
    let (s, c) = angle.sin_cos();
    (c, s)
}

/// Seeded 2-D gradient noise with lattice spacing 1, roughly in [-1, 1].
pub(crate) fn gradient_noise(seed: u64, x: f64, y: f64) -> f64 {
    let (x0, y0) = (x.floor(), y.floor());
    let (fx, fy) = (x - x0, y - y0);
    let (ix, iy) = (x0 as i64, y0 as i64);
    let dot = |dx: i64, dy: i64| {
        let (gx, gy) = lattice_gradient(seed, ix + dx, iy + dy);
        gx * (fx - dx as f64) + gy * (fy - dy as f64)
    };
    let (u, v) = (smoothstep(fx), smoothstep(fy));
    let bottom = dot(0, 0) + (dot(1, 0) - dot(0, 0)) * u;
    let top = dot(0, 1) + (dot(1, 1) - dot(0, 1)) * u;
    // Unit-gradient 2-D noise peaks near +-sqrt(2)/2.
    (bottom + (top - bottom) * v) * std::f64::consts::SQRT_2
}
