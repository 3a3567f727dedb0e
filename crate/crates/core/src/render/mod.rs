//! Single-bounce ray caster: one primary ray per pixel centre, Lambertian
//! shading, and one hard shadow ray toward the directional light.

mod primitive;
mod terrain;

use rayon::prelude::*;

pub use primitive::intersect_primitive;
pub use terrain::{intersect_triangle, traverse_cells, traverse_heightfield, CellHit};

use crate::error::{Error, Result};
use crate::geom::{Hit, Ray, Vec3};
use crate::image::ImageBuffer;
use crate::scene::Scene;

/// Shadow-ray origin offset along the surface normal, metres.
pub const SHADOW_EPSILON: f64 = 1e-4;

/// Nearest hit over all targets and the seabed.
pub fn trace(scene: &Scene, ray: &Ray) -> Option<Hit> {
    let mut best: Option<Hit> = None;
    for target in scene.targets() {
        let t_max = best.map_or(f64::INFINITY, |h| h.t);
        if let Some(hit) = primitive::intersect_within(ray, target, t_max) {
            best = Some(hit);
        }
    }
    let t_max = best.map_or(f64::INFINITY, |h| h.t);
    let hf = scene.heightfield();
    if let Some(found) = traverse_cells(ray, hf, t_max) {
        let mut hit = terrain::heightfield_hit(ray, hf, found);
        hit.albedo = scene.seabed_albedo();
        best = Some(hit);
    }
    best
}

/// `true` if anything in the scene blocks `ray`.
pub fn occluded(scene: &Scene, ray: &Ray) -> bool {
    scene
        .targets()
        .iter()
        .any(|t| primitive::intersect_within(ray, t, f64::INFINITY).is_some())
        || traverse_cells(ray, scene.heightfield(), f64::INFINITY).is_some()
}

/// Luminance of a surface hit, clamped to [0, 1].
pub fn shade(hit: &Hit, scene: &Scene) -> f64 {
    let to_light = scene.light().to_light(scene.camera());
    shade_with(hit, scene, to_light)
}

#[inline]
fn shade_with(hit: &Hit, scene: &Scene, to_light: Vec3) -> f64 {
    let ambient = scene.ambient() * hit.albedo;
    let lambert = hit.normal.dot(to_light);
    if lambert <= 0.0 {
        return ambient.clamp(0.0, 1.0);
    }
    let shadow_ray = Ray {
        origin: hit.point + hit.normal * SHADOW_EPSILON,
        direction: to_light,
    };
    if occluded(scene, &shadow_ray) {
        return ambient.clamp(0.0, 1.0);
    }
    (ambient + scene.light().intensity * hit.albedo * lambert).clamp(0.0, 1.0)
}

/// Renders the scene to an RGB image using the current rayon pool.
pub fn render(scene: &Scene) -> Result<ImageBuffer> {
    let cam = scene.camera();
    if !(cam.fov_deg > 0.0 && cam.fov_deg < 180.0) {
        return Err(Error::InvalidParameter(format!(
            "camera fov must be in (0, 180) degrees, got {}",
            cam.fov_deg
        )));
    }
    cam.validate()?;
    let (w, h) = (cam.width, cam.height);
    let right = cam.right();
    let up = cam.up();
    let tan_half = (cam.fov_deg.to_radians() / 2.0).tan();
    let to_light = scene.light().to_light(cam);
    let color = scene.light().color;

    let mut data = vec![0.0f32; w * h * 3];
    data.par_chunks_mut(w * 3).enumerate().for_each(|(row, out)| {
        for col in 0..w {
            let dir = cam.pixel_direction(right, up, tan_half, col, row);
            let ray = Ray::new(cam.position, dir);
            let lum = match trace(scene, &ray) {
                Some(hit) => shade_with(&hit, scene, to_light),
                None => 0.0,
            };
            for c in 0..3 {
                out[col * 3 + c] = ((lum * color[c]) as f32).clamp(0.0, 1.0);
            }
        }
    });
    Ok(ImageBuffer::from_raw_parts(w, h, 3, data))
}

/// Renders on a dedicated pool of `threads` workers.
pub fn render_with_threads(scene: &Scene, threads: usize) -> Result<ImageBuffer> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot build thread pool: {e}")))?;
    pool.install(|| render(scene))
}
