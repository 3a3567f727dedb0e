use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Elevation samples on a regular grid of `nx * ny` nodes, row-major with `x` fastest.
///
/// Between nodes the surface is bilinear for [`height_at`](Heightfield::height_at);
/// ray traversal uses the two triangles of each cell split along the
/// `(i, j)`–`(i+1, j+1)` diagonal, which agree with the bilinear surface on
/// every cell edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Heightfield {
    nx: usize,
    ny: usize,
    cell_size: f64,
    origin: [f64; 2],
    elevations: Vec<f64>,
    min_z: f64,
    max_z: f64,
    /// Per-cell (min, max) elevation, `(nx - 1) * (ny - 1)` entries.
    cell_bounds: Vec<(f64, f64)>,
}

impl Heightfield {
    pub fn new(
        nx: usize,
        ny: usize,
        cell_size: f64,
        origin: [f64; 2],
        elevations: Vec<f64>,
    ) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidParameter(format!(
                "heightfield needs at least 2x2 nodes, got {nx}x{ny}"
            )));
        }
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cell_size must be positive, got {cell_size}"
            )));
        }
        if !(origin[0].is_finite() && origin[1].is_finite()) {
            return Err(Error::InvalidParameter("heightfield origin must be finite".into()));
        }
        if elevations.len() != nx * ny {
            return Err(Error::InvalidParameter(format!(
                "expected {} elevations, got {}",
                nx * ny,
                elevations.len()
            )));
        }
        if elevations.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter("elevations must be finite".into()));
        }
        let min_z = elevations.iter().copied().fold(f64::INFINITY, f64::min);
        let max_z = elevations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut cell_bounds = Vec::with_capacity((nx - 1) * (ny - 1));
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let e = [
                    elevations[j * nx + i],
                    elevations[j * nx + i + 1],
                    elevations[(j + 1) * nx + i],
                    elevations[(j + 1) * nx + i + 1],
                ];
                let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                cell_bounds.push((lo, hi));
            }
        }
        Ok(Heightfield {
            nx,
            ny,
            cell_size,
            origin,
            elevations,
            min_z,
            max_z,
            cell_bounds,
        })
    }

    /// Grid centred on the world origin whose nodes are filled by `f(x, y)`.
    pub fn from_fn(
        nx: usize,
        ny: usize,
        cell_size: f64,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let origin = centered_origin(nx, ny, cell_size);
        let mut elevations = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                elevations.push(f(
                    origin[0] + i as f64 * cell_size,
                    origin[1] + j as f64 * cell_size,
                ));
            }
        }
        Self::new(nx, ny, cell_size, origin, elevations)
    }

    pub fn flat(nx: usize, ny: usize, cell_size: f64, z: f64) -> Result<Self> {
        Self::new(nx, ny, cell_size, centered_origin(nx, ny, cell_size), vec![z; nx * ny])
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn elevations(&self) -> &[f64] {
        &self.elevations
    }

    pub fn min_elevation(&self) -> f64 {
        self.min_z
    }

    pub fn max_elevation(&self) -> f64 {
        self.max_z
    }

    /// World size `((nx-1) * cell, (ny-1) * cell)`.
    pub fn extent(&self) -> [f64; 2] {
        [
            (self.nx - 1) as f64 * self.cell_size,
            (self.ny - 1) as f64 * self.cell_size,
        ]
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> f64 {
        self.elevations[j * self.nx + i]
    }

    /// World position of node `(i, j)`.
    #[inline]
    pub fn node_position(&self, i: usize, j: usize) -> Vec3 {
        Vec3::new(
            self.origin[0] + i as f64 * self.cell_size,
            self.origin[1] + j as f64 * self.cell_size,
            self.node(i, j),
        )
    }

    #[inline]
    pub(crate) fn cell_bounds(&self, i: usize, j: usize) -> (f64, f64) {
        self.cell_bounds[j * (self.nx - 1) + i]
    }

    /// The two triangles of cell `(i, j)`, each as three world-space vertices.
    #[inline]
    pub fn cell_triangles(&self, i: usize, j: usize) -> [[Vec3; 3]; 2] {
        let p00 = self.node_position(i, j);
        let p10 = self.node_position(i + 1, j);
        let p01 = self.node_position(i, j + 1);
        let p11 = self.node_position(i + 1, j + 1);
        [[p00, p10, p11], [p00, p11, p01]]
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let [ex, ey] = self.extent();
        let (gx, gy) = (x - self.origin[0], y - self.origin[1]);
        (0.0..=ex).contains(&gx) && (0.0..=ey).contains(&gy)
    }

    /// Bilinear elevation at world `(x, y)`.
    pub fn height_at(&self, x: f64, y: f64) -> Result<f64> {
        if !self.contains(x, y) {
            return Err(Error::OutOfBounds { x, y });
        }
        let gx = (x - self.origin[0]) / self.cell_size;
        let gy = (y - self.origin[1]) / self.cell_size;
        let i = (gx.floor() as usize).min(self.nx - 2);
        let j = (gy.floor() as usize).min(self.ny - 2);
        let fx = gx - i as f64;
        let fy = gy - j as f64;
        let z00 = self.node(i, j);
        let z10 = self.node(i + 1, j);
        let z01 = self.node(i, j + 1);
        let z11 = self.node(i + 1, j + 1);
        let bottom = z00 + (z10 - z00) * fx;
        let top = z01 + (z11 - z01) * fx;
        Ok(bottom + (top - bottom) * fy)
    }
}

pub(crate) fn centered_origin(nx: usize, ny: usize, cell_size: f64) -> [f64; 2] {
    [
        -((nx.max(1) - 1) as f64) * cell_size / 2.0,
        -((ny.max(1) - 1) as f64) * cell_size / 2.0,
    ]
}
