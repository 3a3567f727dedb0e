//! Analytic ray intersection with posed target primitives.
//!
//! The ray is mapped into the primitive's local frame without renormalizing
//! the direction, so local and world ray parameters coincide.

use crate::geom::{Hit, Ray, Vec3};
use crate::scene::{PlacedTarget, Shape};

/// Nearest intersection with `t > 0`, or `None` on a miss.
pub fn intersect_primitive(ray: &Ray, target: &PlacedTarget) -> Option<Hit> {
    intersect_within(ray, target, f64::INFINITY)
}

/// Cheap bounding-sphere rejection; `false` guarantees no hit in `(0, t_max)`.
#[inline]
pub(crate) fn may_hit(ray: &Ray, target: &PlacedTarget, t_max: f64) -> bool {
    let oc = target.center - ray.origin;
    let tca = oc.dot(ray.direction);
    let r = target.bound_radius;
    let d2 = oc.dot(oc) - tca * tca;
    d2 <= r * r && tca + r > 0.0 && tca - r < t_max
}

pub(crate) fn intersect_within(ray: &Ray, target: &PlacedTarget, t_max: f64) -> Option<Hit> {
    if !may_hit(ray, target, t_max) {
        return None;
    }
    let o = target.to_local_point(ray.origin);
    let d = target.to_local_dir(ray.direction);
    let (t, local_normal) = match target.primitive.shape {
        Shape::Sphere { radius } => sphere(o, d, radius)?,
        Shape::Cube { edge } => cube(o, d, edge * 0.5)?,
        Shape::Cylinder { radius, length } => cylinder(o, d, radius, length * 0.5)?,
        Shape::Cone { radius, height } => cone(o, d, radius, height)?,
    };
    if t >= t_max {
        return None;
    }
    let mut normal = target.to_world_normal(local_normal);
    if normal.dot(ray.direction) > 0.0 {
        normal = -normal;
    }
    Some(Hit {
        t,
        point: ray.at(t),
        normal,
        albedo: target.primitive.albedo,
    })
}

/// Real roots of `a t^2 + b t + c` in ascending order.
#[inline]
fn quadratic(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    if a == 0.0 {
        if b == 0.0 {
            return None;
        }
        let t = -c / b;
        return Some((t, t));
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // Numerically stable form avoids cancellation in the smaller root.
    let q = -0.5 * (b + b.signum() * sq);
    let (t0, t1) = if q == 0.0 {
        let t = -b / (2.0 * a);
        (t, t)
    } else {
        (q / a, c / q)
    };
    Some(if t0 <= t1 { (t0, t1) } else { (t1, t0) })
}

#[inline]
fn closer(best: &mut Option<(f64, Vec3)>, t: f64, n: Vec3) {
    if t > 0.0 && best.is_none_or(|(bt, _)| t < bt) {
        *best = Some((t, n));
    }
}

fn sphere(o: Vec3, d: Vec3, r: f64) -> Option<(f64, Vec3)> {
    let (t0, t1) = quadratic(d.dot(d), 2.0 * o.dot(d), o.dot(o) - r * r)?;
    let t = if t0 > 0.0 { t0 } else if t1 > 0.0 { t1 } else { return None };
    Some((t, o + d * t))
}

fn cube(o: Vec3, d: Vec3, h: f64) -> Option<(f64, Vec3)> {
    let mut t_near = f64::NEG_INFINITY;
    let mut t_far = f64::INFINITY;
    let mut near_axis = 0;
    let mut far_axis = 0;
    let (os, ds) = ([o.x, o.y, o.z], [d.x, d.y, d.z]);
    for axis in 0..3 {
        if ds[axis] == 0.0 {
            if os[axis] < -h || os[axis] > h {
                return None;
            }
            continue;
        }
        let inv = 1.0 / ds[axis];
        let (mut ta, mut tb) = ((-h - os[axis]) * inv, (h - os[axis]) * inv);
        if ta > tb {
            std::mem::swap(&mut ta, &mut tb);
        }
        if ta > t_near {
            t_near = ta;
            near_axis = axis;
        }
        if tb < t_far {
            t_far = tb;
            far_axis = axis;
        }
    }
    if t_near > t_far || t_far <= 0.0 {
        return None;
    }
    let (t, axis) = if t_near > 0.0 { (t_near, near_axis) } else { (t_far, far_axis) };
    let mut n = [0.0; 3];
    n[axis] = (os[axis] + t * ds[axis]).signum();
    Some((t, Vec3::new(n[0], n[1], n[2])))
}

fn cylinder(o: Vec3, d: Vec3, r: f64, half_len: f64) -> Option<(f64, Vec3)> {
    let mut best = None;
    if let Some((t0, t1)) = quadratic(
        d.y * d.y + d.z * d.z,
        2.0 * (o.y * d.y + o.z * d.z),
        o.y * o.y + o.z * o.z - r * r,
    ) {
        for t in [t0, t1] {
            let x = o.x + t * d.x;
            if x.abs() <= half_len {
                closer(&mut best, t, Vec3::new(0.0, o.y + t * d.y, o.z + t * d.z));
            }
        }
    }
    if d.x != 0.0 {
        for side in [-1.0, 1.0] {
            let t = (side * half_len - o.x) / d.x;
            let (y, z) = (o.y + t * d.y, o.z + t * d.z);
            if y * y + z * z <= r * r {
                closer(&mut best, t, Vec3::new(side, 0.0, 0.0));
            }
        }
    }
    best
}

fn cone(o: Vec3, d: Vec3, r: f64, height: f64) -> Option<(f64, Vec3)> {
    let half = height * 0.5;
    let k2 = (r / height) * (r / height);
    let w0 = half - o.z;
    let mut best = None;
    if let Some((t0, t1)) = quadratic(
        d.x * d.x + d.y * d.y - k2 * d.z * d.z,
        2.0 * (o.x * d.x + o.y * d.y + k2 * w0 * d.z),
        o.x * o.x + o.y * o.y - k2 * w0 * w0,
    ) {
        for t in [t0, t1] {
            let p = o + d * t;
            // The quadric is a double cone; keep the nappe between base and apex.
            if (-half..=half).contains(&p.z) {
                closer(&mut best, t, Vec3::new(p.x, p.y, k2 * (half - p.z)));
            }
        }
    }
    if d.z != 0.0 {
        let t = (-half - o.z) / d.z;
        let (x, y) = (o.x + t * d.x, o.y + t * d.y);
        if x * x + y * y <= r * r {
            closer(&mut best, t, Vec3::new(0.0, 0.0, -1.0));
        }
    }
    best
}
