//! Brute-force reference implementations used as test oracles.
#![allow(dead_code)]

use rand::Rng;
use sonarforge_core::scene::{Heightfield, Shape};
use sonarforge_core::Vec3;

pub type Tri = [Vec3; 3];

/// Plane intersection followed by an inside test on edge cross products.
pub fn ray_triangle(o: Vec3, d: Vec3, tri: &Tri) -> Option<f64> {
    let [a, b, c] = *tri;
    let n = (b - a).cross(c - a);
    let denom = n.dot(d);
    if denom == 0.0 {
        return None;
    }
    let t = n.dot(a - o) / denom;
    if t.is_nan() || t <= 0.0 {
        return None;
    }
    let p = o + d * t;
    let inside = [(a, b), (b, c), (c, a)]
        .iter()
        .all(|&(u, v)| (v - u).cross(p - u).dot(n) >= 0.0);
    inside.then_some(t)
}

pub fn nearest(o: Vec3, d: Vec3, tris: &[Tri]) -> Option<f64> {
    tris.iter()
        .filter_map(|t| ray_triangle(o, d, t))
        .fold(None, |best: Option<f64>, t| Some(best.map_or(t, |b| b.min(t))))
}

/// Every surface triangle of a heightfield, split along the (i,j)-(i+1,j+1) diagonal.
pub fn heightfield_triangles(hf: &Heightfield) -> Vec<Tri> {
    let mut out = Vec::new();
    for j in 0..hf.ny() - 1 {
        for i in 0..hf.nx() - 1 {
            let p = |di: usize, dj: usize| hf.node_position(i + di, j + dj);
            out.push([p(0, 0), p(1, 0), p(1, 1)]);
            out.push([p(0, 0), p(1, 1), p(0, 1)]);
        }
    }
    out
}

/// Triangles grouped into spatially coherent chunks with bounding boxes,
/// so exhaustive tests on large meshes stay fast.
pub struct ChunkedMesh {
    chunks: Vec<(Vec3, Vec3, Vec<Tri>)>,
    pub triangle_count: usize,
}

impl ChunkedMesh {
    pub fn new(tris: Vec<Tri>, chunk: usize) -> Self {
        let triangle_count = tris.len();
        let chunks = tris
            .chunks(chunk)
            .map(|c| {
                let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
                let mut hi = -lo;
                for p in c.iter().flatten() {
                    lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
                    hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
                }
                let pad = Vec3::new(1e-9, 1e-9, 1e-9);
                (lo - pad, hi + pad, c.to_vec())
            })
            .collect();
        ChunkedMesh { chunks, triangle_count }
    }

    pub fn nearest(&self, o: Vec3, d: Vec3) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (lo, hi, tris) in &self.chunks {
            if let Some(t_near) = slab(o, d, *lo, *hi) {
                if best.is_some_and(|b| t_near > b) {
                    continue;
                }
                if let Some(t) = nearest(o, d, tris) {
                    best = Some(best.map_or(t, |b| b.min(t)));
                }
            }
        }
        best
    }
}

fn slab(o: Vec3, d: Vec3, lo: Vec3, hi: Vec3) -> Option<f64> {
    let (mut t0, mut t1) = (0.0f64, f64::INFINITY);
    for (o, d, lo, hi) in [(o.x, d.x, lo.x, hi.x), (o.y, d.y, lo.y, hi.y), (o.z, d.z, lo.z, hi.z)] {
        if d == 0.0 {
            if o < lo || o > hi {
                return None;
            }
            continue;
        }
        let (a, b) = ((lo - o) / d, (hi - o) / d);
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
    }
    (t0 <= t1).then_some(t0)
}

fn quad(out: &mut Vec<Tri>, a: Vec3, b: Vec3, c: Vec3, d: Vec3) {
    out.push([a, b, c]);
    out.push([a, c, d]);
}

/// Local-frame tessellation of a primitive, centred on the origin.
/// Cylinder axis is local x; the cone's base sits at z = -h/2.
pub fn tessellate(shape: &Shape) -> Vec<Tri> {
    use std::f64::consts::TAU;
    let mut out = Vec::new();
    match *shape {
        Shape::Cube { edge } => {
            let n = 30;
            let h = edge / 2.0;
            let s = |k: usize| -h + edge * k as f64 / n as f64;
            for a in 0..n {
                for b in 0..n {
                    let (u0, u1, v0, v1) = (s(a), s(a + 1), s(b), s(b + 1));
                    for sign in [-1.0, 1.0] {
                        let w = sign * h;
                        quad(&mut out, Vec3::new(w, u0, v0), Vec3::new(w, u1, v0), Vec3::new(w, u1, v1), Vec3::new(w, u0, v1));
                        quad(&mut out, Vec3::new(u0, w, v0), Vec3::new(u1, w, v0), Vec3::new(u1, w, v1), Vec3::new(u0, w, v1));
                        quad(&mut out, Vec3::new(u0, v0, w), Vec3::new(u1, v0, w), Vec3::new(u1, v1, w), Vec3::new(u0, v1, w));
                    }
                }
            }
        }
        Shape::Cylinder { radius, length } => {
            let n = 4096;
            let h = length / 2.0;
            let ring = |k: usize, x: f64| {
                let a = TAU * k as f64 / n as f64;
                Vec3::new(x, radius * a.cos(), radius * a.sin())
            };
            for k in 0..n {
                quad(&mut out, ring(k, -h), ring(k + 1, -h), ring(k + 1, h), ring(k, h));
                out.push([Vec3::new(-h, 0.0, 0.0), ring(k, -h), ring(k + 1, -h)]);
                out.push([Vec3::new(h, 0.0, 0.0), ring(k, h), ring(k + 1, h)]);
            }
        }
        Shape::Cone { radius, height } => {
            let n = 8192;
            let h = height / 2.0;
            let ring = |k: usize| {
                let a = TAU * k as f64 / n as f64;
                Vec3::new(radius * a.cos(), radius * a.sin(), -h)
            };
            for k in 0..n {
                out.push([Vec3::new(0.0, 0.0, h), ring(k), ring(k + 1)]);
                out.push([Vec3::new(0.0, 0.0, -h), ring(k), ring(k + 1)]);
            }
        }
        Shape::Sphere { radius } => {
            let (nlat, nlon) = (256, 512);
            let p = |i: usize, j: usize| {
                let th = std::f64::consts::PI * i as f64 / nlat as f64;
                let ph = TAU * j as f64 / nlon as f64;
                Vec3::new(radius * th.sin() * ph.cos(), radius * th.sin() * ph.sin(), radius * th.cos())
            };
            // Patch-major order keeps chunks compact.
            for pi in (0..nlat).step_by(16) {
                for pj in (0..nlon).step_by(16) {
                    for i in pi..pi + 16 {
                        for j in pj..pj + 16 {
                            quad(&mut out, p(i, j), p(i + 1, j), p(i + 1, j + 1), p(i, j + 1));
                        }
                    }
                }
            }
        }
    }
    out
}

/// World placement `centre + Rz(yaw)·(scale ⊙ p)`.
pub fn place(tris: &[Tri], centre: Vec3, yaw_deg: f64, scale: Vec3) -> Vec<Tri> {
    let (s, c) = yaw_deg.to_radians().sin_cos();
    let f = |p: Vec3| {
        let q = p.mul_elem(scale);
        centre + Vec3::new(c * q.x - s * q.y, s * q.x + c * q.y, q.z)
    };
    tris.iter().map(|t| [f(t[0]), f(t[1]), f(t[2])]).collect()
}

/// Uniform direction on the unit sphere.
pub fn unit_vector(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let l = v.length();
        if l > 1e-3 && l <= 1.0 {
            return v * (1.0 / l);
        }
    }
}

pub fn random_heightfield(rng: &mut impl Rng, n: usize, cell: f64, amplitude: f64) -> Heightfield {
    let z = (0..n * n).map(|_| rng.random_range(-amplitude..amplitude)).collect();
    let half = (n - 1) as f64 * cell / 2.0;
    Heightfield::new(n, n, cell, [-half, -half], z).unwrap()
}

/// A ray that mostly aims into the heightfield's bounding box; one in five is isotropic.
pub fn heightfield_ray(rng: &mut impl Rng, hf: &Heightfield) -> (Vec3, Vec3) {
    let [ex, ey] = hf.extent();
    let [ox, oy] = hf.origin();
    let (lo, hi) = (hf.min_elevation(), hf.max_elevation());
    let origin = Vec3::new(
        ox + rng.random_range(-0.5..1.5) * ex,
        oy + rng.random_range(-0.5..1.5) * ey,
        rng.random_range(lo - 1.0..hi + 4.0),
    );
    let dir = if rng.random_bool(0.2) {
        unit_vector(rng)
    } else {
        let target = Vec3::new(
            ox + rng.random_range(0.0..1.0) * ex,
            oy + rng.random_range(0.0..1.0) * ey,
            rng.random_range(lo..=hi),
        );
        (target - origin).normalized()
    };
    (origin, dir)
}
