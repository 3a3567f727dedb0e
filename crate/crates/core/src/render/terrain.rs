//! Ray/heightfield intersection by 2-D DDA over the grid cells.

use crate::geom::{Hit, Ray, Vec3};
use crate::scene::Heightfield;

/// Slack on the per-cell elevation test so grazing hits are not culled by rounding.
const Z_SLACK: f64 = 1e-9;

/// Möller–Trumbore ray/triangle test; returns `t > 0` on a hit.
#[inline]
pub fn intersect_triangle(origin: Vec3, dir: Vec3, tri: &[Vec3; 3]) -> Option<f64> {
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let p = dir.cross(e2);
    let det = e1.dot(p);
    if det == 0.0 {
        return None;
    }
    let inv = 1.0 / det;
    let s = origin - tri[0];
    let u = s.dot(p) * inv;
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let q = s.cross(e1);
    let v = dir.dot(q) * inv;
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    let t = e2.dot(q) * inv;
    (t > 0.0).then_some(t)
}

/// Location of a heightfield hit: parameter, cell, and triangle index within the cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellHit {
    pub t: f64,
    pub cell: (usize, usize),
    pub triangle: usize,
}

/// Nearest hit on the triangulated heightfield surface.
pub fn traverse_heightfield(ray: &Ray, hf: &Heightfield) -> Option<Hit> {
    let found = traverse_cells(ray, hf, f64::INFINITY)?;
    Some(heightfield_hit(ray, hf, found))
}

pub(crate) fn heightfield_hit(ray: &Ray, hf: &Heightfield, found: CellHit) -> Hit {
    let tri = hf.cell_triangles(found.cell.0, found.cell.1)[found.triangle];
    let mut normal = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
    if normal.dot(ray.direction) > 0.0 {
        normal = -normal;
    }
    Hit {
        t: found.t,
        point: ray.at(found.t),
        normal,
        albedo: 1.0,
    }
}

/// Parameter interval where the ray is inside the slab `[lo, hi]` on one axis.
#[inline]
fn slab(o: f64, d: f64, lo: f64, hi: f64) -> (f64, f64) {
    if d == 0.0 {
        if o < lo || o > hi {
            (f64::INFINITY, f64::NEG_INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    } else {
        let (a, b) = ((lo - o) / d, (hi - o) / d);
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// Walks cells front to back and returns the nearest triangle hit with `t < t_max`.
///
/// Every triangle lies inside its cell's vertical prism, so the first cell
/// that yields a hit holds the nearest one.
pub fn traverse_cells(ray: &Ray, hf: &Heightfield, t_max: f64) -> Option<CellHit> {
    let o = ray.origin;
    let d = ray.direction;
    let cs = hf.cell_size();
    let [ox, oy] = hf.origin();
    let [ex, ey] = hf.extent();
    let (zlo, zhi) = (hf.min_elevation() - Z_SLACK, hf.max_elevation() + Z_SLACK);

    let (ax, bx) = slab(o.x, d.x, ox, ox + ex);
    let (ay, by) = slab(o.y, d.y, oy, oy + ey);
    let (az, bz) = slab(o.z, d.z, zlo, zhi);
    let t_enter = ax.max(ay).max(az).max(0.0);
    let t_exit = bx.min(by).min(bz).min(t_max);
    if t_enter.is_nan() || t_exit.is_nan() || t_enter > t_exit {
        return None;
    }

    let (ncx, ncy) = (hf.nx() - 1, hf.ny() - 1);
    let start = ray.at(t_enter);
    let cell_of = |g: f64, n: usize| ((g.floor().max(0.0)) as usize).min(n - 1);
    let mut ix = cell_of((start.x - ox) / cs, ncx);
    let mut iy = cell_of((start.y - oy) / cs, ncy);

    let step_x: isize = if d.x > 0.0 { 1 } else { -1 };
    let step_y: isize = if d.y > 0.0 { 1 } else { -1 };
    let boundary = |i: usize, step: isize, origin: f64, o: f64, d: f64| {
        if d == 0.0 {
            f64::INFINITY
        } else {
            let edge = if step > 0 { i + 1 } else { i };
            (origin + edge as f64 * cs - o) / d
        }
    };
    let delta_x = if d.x == 0.0 { f64::INFINITY } else { cs / d.x.abs() };
    let delta_y = if d.y == 0.0 { f64::INFINITY } else { cs / d.y.abs() };
    let mut next_x = boundary(ix, step_x, ox, o.x, d.x);
    let mut next_y = boundary(iy, step_y, oy, o.y, d.y);

    let mut t_in = t_enter;
    loop {
        let t_out = next_x.min(next_y).min(t_exit);
        let (z_in, z_out) = (o.z + d.z * t_in, o.z + d.z * t_out);
        let (lo, hi) = hf.cell_bounds(ix, iy);
        if z_in.min(z_out) <= hi + Z_SLACK && z_in.max(z_out) >= lo - Z_SLACK {
            let tris = hf.cell_triangles(ix, iy);
            let mut best: Option<CellHit> = None;
            for (k, tri) in tris.iter().enumerate() {
                if let Some(t) = intersect_triangle(o, d, tri) {
                    if t < t_max && best.is_none_or(|b| t < b.t) {
                        best = Some(CellHit {
                            t,
                            cell: (ix, iy),
                            triangle: k,
                        });
                    }
                }
            }
            if best.is_some() {
                return best;
            }
        }
        if t_out >= t_exit {
            return None;
        }
        if next_x < next_y {
            if (step_x < 0 && ix == 0) || (step_x > 0 && ix + 1 >= ncx) {
                return None;
            }
            ix = (ix as isize + step_x) as usize;
            t_in = next_x;
            next_x += delta_x;
        } else {
            if (step_y < 0 && iy == 0) || (step_y > 0 && iy + 1 >= ncy) {
                return None;
            }
            iy = (iy as isize + step_y) as usize;
            t_in = next_y;
            next_y += delta_y;
        }
    }
}
