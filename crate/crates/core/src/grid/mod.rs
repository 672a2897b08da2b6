//! Uniform grids, node-valued fields with ghost padding, and the integer
//! lattice directions used by rotated stencils.

mod field;
mod rotation;

pub use field::{Field2, Field3, Orientation};
pub use rotation::{
    corner_rotations, edge_rotations, enumerate_rotations, rotation3_from_triple, rotation_count,
    RotationDir2, RotationDir3, RotationMode,
};

use crate::error::{Error, Result};

/// A uniform 2D lattice on `[xmin, xmax] x [ymin, ymax]` with `ni + 1` by
/// `nj + 1` nodes, padded by `ghost` layers on every side.
///
/// Storage is column-major in `i`: the `j` index runs fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2 {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    ni: usize,
    nj: usize,
    dx: f64,
    dy: f64,
    ghost: usize,
}

impl Grid2 {
    /// Builds a grid from `[xmin, xmax, ymin, ymax]`, the cell counts and
    /// the ghost width.
    pub fn new(bounds: [f64; 4], ni: usize, nj: usize, ghost: usize) -> Result<Self> {
        let [xmin, xmax, ymin, ymax] = bounds;
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if xmax <= xmin || ymax <= ymin {
            return Err(Error::InvalidGrid(format!(
                "extents must be positive, got [{xmin}, {xmax}] x [{ymin}, {ymax}]"
            )));
        }
        if ni < 2 || nj < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 cells per axis, got {ni} x {nj}"
            )));
        }
        if ghost < 1 {
            return Err(Error::InvalidGrid("ghost width must be at least 1".into()));
        }
        Ok(Self {
            xmin,
            xmax,
            ymin,
            ymax,
            ni,
            nj,
            dx: (xmax - xmin) / ni as f64,
            dy: (ymax - ymin) / nj as f64,
            ghost,
        })
    }

    /// `[-1, 1]^2` with `n` cells per axis, the layout used by every
    /// built-in eikonal test.
    pub fn unit_square(n: usize, ghost: usize) -> Result<Self> {
        Self::new([-1.0, 1.0, -1.0, 1.0], n, n, ghost)
    }

    /// The same lattice with a different ghost width.
    pub fn with_ghost(&self, ghost: usize) -> Result<Self> {
        Self::new(self.bounds(), self.ni, self.nj, ghost)
    }

    pub fn bounds(&self) -> [f64; 4] {
        [self.xmin, self.xmax, self.ymin, self.ymax]
    }
    pub fn ni(&self) -> usize {
        self.ni
    }
    pub fn nj(&self) -> usize {
        self.nj
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn dy(&self) -> f64 {
        self.dy
    }
    pub fn ghost(&self) -> usize {
        self.ghost
    }

    pub fn x(&self, i: isize) -> f64 {
        self.xmin + i as f64 * self.dx
    }
    pub fn y(&self, j: isize) -> f64 {
        self.ymin + j as f64 * self.dy
    }
    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        [self.x(i as isize), self.y(j as isize)]
    }

    /// True when `dx` and `dy` agree to rounding.
    pub fn is_square(&self) -> bool {
        (self.dx - self.dy).abs() <= 1e-12 * self.dx.max(self.dy)
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.xmin && p[0] <= self.xmax && p[1] >= self.ymin && p[1] <= self.ymax
    }

    /// Nearest node to `p`, or `None` when `p` lies outside the domain.
    pub fn nearest_node(&self, p: [f64; 2]) -> Option<[usize; 2]> {
        if !self.contains(p) {
            return None;
        }
        let i = ((p[0] - self.xmin) / self.dx).round() as usize;
        let j = ((p[1] - self.ymin) / self.dy).round() as usize;
        Some([i.min(self.ni), j.min(self.nj)])
    }

    /// Stride of the `i` index in storage.
    pub(crate) fn stride_i(&self) -> usize {
        self.nj + 1 + 2 * self.ghost
    }

    pub(crate) fn storage_len(&self) -> usize {
        (self.ni + 1 + 2 * self.ghost) * self.stride_i()
    }

    /// Storage offset of node `(i, j)`; ghost nodes have negative or
    /// beyond-`ni` indices.
    pub(crate) fn index(&self, i: isize, j: isize) -> usize {
        let g = self.ghost as isize;
        debug_assert!(i >= -g && i <= self.ni as isize + g);
        debug_assert!(j >= -g && j <= self.nj as isize + g);
        ((i + g) as usize) * self.stride_i() + (j + g) as usize
    }
}

/// A uniform 3D lattice. The third axis may be periodic, in which case node
/// `nk` aliases node `0` and no ghost layers are stored along it.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid3 {
    lo: [f64; 3],
    hi: [f64; 3],
    n: [usize; 3],
    h: [f64; 3],
    ghost: usize,
    periodic_z: bool,
}

impl Grid3 {
    pub fn new(
        bounds: [f64; 6],
        cells: [usize; 3],
        ghost: usize,
        periodic_z: bool,
    ) -> Result<Self> {
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        let lo = [bounds[0], bounds[2], bounds[4]];
        let hi = [bounds[1], bounds[3], bounds[5]];
        for a in 0..3 {
            if hi[a] <= lo[a] {
                return Err(Error::InvalidGrid(format!(
                    "extent along axis {a} must be positive, got [{}, {}]",
                    lo[a], hi[a]
                )));
            }
            if cells[a] < 2 {
                return Err(Error::InvalidGrid(format!(
                    "need at least 2 cells along axis {a}, got {}",
                    cells[a]
                )));
            }
        }
        if ghost < 1 {
            return Err(Error::InvalidGrid("ghost width must be at least 1".into()));
        }
        let h = [0, 1, 2].map(|a| (hi[a] - lo[a]) / cells[a] as f64);
        Ok(Self {
            lo,
            hi,
            n: cells,
            h,
            ghost,
            periodic_z,
        })
    }

    /// `[-1, 1]^3` with `n` cells per axis.
    pub fn unit_cube(n: usize, ghost: usize) -> Result<Self> {
        Self::new([-1.0, 1.0, -1.0, 1.0, -1.0, 1.0], [n; 3], ghost, false)
    }

    /// `[-1, 1]^2 x [0, 2pi)` with a periodic heading axis.
    pub fn car_domain(n: usize, ghost: usize) -> Result<Self> {
        Self::new(
            [-1.0, 1.0, -1.0, 1.0, 0.0, std::f64::consts::TAU],
            [n; 3],
            ghost,
            true,
        )
    }

    pub fn with_ghost(&self, ghost: usize) -> Result<Self> {
        Self::new(self.bounds(), self.n, ghost, self.periodic_z)
    }

    pub fn bounds(&self) -> [f64; 6] {
        [
            self.lo[0], self.hi[0], self.lo[1], self.hi[1], self.lo[2], self.hi[2],
        ]
    }
    pub fn cells(&self) -> [usize; 3] {
        self.n
    }
    pub fn spacing(&self) -> [f64; 3] {
        self.h
    }
    pub fn ghost(&self) -> usize {
        self.ghost
    }
    pub fn periodic_z(&self) -> bool {
        self.periodic_z
    }

    pub fn coord(&self, axis: usize, idx: isize) -> f64 {
        self.lo[axis] + idx as f64 * self.h[axis]
    }
    pub fn node(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            self.coord(0, i as isize),
            self.coord(1, j as isize),
            self.coord(2, k as isize),
        ]
    }

    /// Number of distinct node planes along z (`nk` when periodic).
    pub(crate) fn distinct_k(&self) -> usize {
        if self.periodic_z {
            self.n[2]
        } else {
            self.n[2] + 1
        }
    }

    pub(crate) fn ghost_z(&self) -> usize {
        if self.periodic_z {
            0
        } else {
            self.ghost
        }
    }

    fn dims(&self) -> [usize; 3] {
        let g = self.ghost;
        [
            self.n[0] + 1 + 2 * g,
            self.n[1] + 1 + 2 * g,
            self.distinct_k() + 2 * self.ghost_z(),
        ]
    }

    pub(crate) fn storage_len(&self) -> usize {
        self.dims().iter().product()
    }

    /// Wraps a z index into `0..nk` when periodic.
    pub(crate) fn wrap_k(&self, k: isize) -> isize {
        if self.periodic_z {
            k.rem_euclid(self.n[2] as isize)
        } else {
            k
        }
    }

    pub(crate) fn index(&self, i: isize, j: isize, k: isize) -> usize {
        let g = self.ghost as isize;
        let gz = self.ghost_z() as isize;
        let k = self.wrap_k(k);
        let d = self.dims();
        debug_assert!(i >= -g && (i + g) < d[0] as isize);
        debug_assert!(j >= -g && (j + g) < d[1] as isize);
        debug_assert!(k >= -gz && (k + gz) < d[2] as isize);
        (((i + g) as usize) * d[1] + (j + g) as usize) * d[2] + (k + gz) as usize
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|a| (a == 2 && self.periodic_z) || (p[a] >= self.lo[a] && p[a] <= self.hi[a]))
    }

    /// Nearest node, with the periodic axis wrapped into range.
    pub fn nearest_node(&self, p: [f64; 3]) -> Option<[usize; 3]> {
        if !self.contains(p) {
            return None;
        }
        let mut out = [0usize; 3];
        for a in 0..3 {
            let r = ((p[a] - self.lo[a]) / self.h[a]).round();
            out[a] = if a == 2 && self.periodic_z {
                (r as isize).rem_euclid(self.n[2] as isize) as usize
            } else {
                (r as usize).min(self.n[a])
            };
        }
        Some(out)
    }

    /// True when all three spacings agree to rounding.
    pub fn is_cube(&self) -> bool {
        let m = self.h.iter().cloned().fold(0.0, f64::max);
        self.h.iter().all(|&h| (h - self.h[0]).abs() <= 1e-12 * m)
    }

    pub fn is_square_xy(&self) -> bool {
        (self.h[0] - self.h[1]).abs() <= 1e-12 * self.h[0].max(self.h[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_spacing() {
        let g = Grid2::new([-1.0, 1.0, -1.0, 1.0], 400, 400, 1).unwrap();
        assert_eq!(g.dx(), 0.005);
        assert_eq!(g.dy(), 0.005);
        assert_eq!(g.node(0, 0), [-1.0, -1.0]);
        let g = Grid2::unit_square(50, 1).unwrap();
        assert_eq!(g.dx(), 0.04);
    }

    #[test]
    fn non_square_allowed() {
        let g = Grid2::new([0.0, 1.0, 0.0, 2.0], 10, 10, 1).unwrap();
        assert_eq!(g.dx(), 0.1);
        assert_eq!(g.dy(), 0.2);
        assert!(!g.is_square());
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Grid2::new([1.0, 1.0, 0.0, 1.0], 10, 10, 1).is_err());
        assert!(Grid2::new([0.0, 1.0, 0.0, -1.0], 10, 10, 1).is_err());
        assert!(Grid2::new([0.0, 1.0, 0.0, 1.0], 1, 10, 1).is_err());
        assert!(Grid2::new([0.0, 1.0, 0.0, 1.0], 10, 10, 0).is_err());
    }

    #[test]
    fn nearest_node_snaps() {
        let g = Grid2::unit_square(50, 1).unwrap();
        assert_eq!(g.nearest_node([0.0, 0.0]), Some([25, 25]));
        assert_eq!(g.nearest_node([0.019, -0.021]), Some([25, 24]));
        assert_eq!(g.nearest_node([1.5, 0.0]), None);
    }

    #[test]
    fn storage_indexing_covers_ghosts() {
        let g = Grid2::unit_square(4, 2).unwrap();
        assert_eq!(g.index(-2, -2), 0);
        assert_eq!(g.index(6, 6), g.storage_len() - 1);
        assert_eq!(g.index(1, 0) - g.index(0, 0), g.stride_i());
    }

    #[test]
    fn periodic_axis_wraps() {
        let g = Grid3::car_domain(10, 1).unwrap();
        assert_eq!(g.index(3, 4, 10), g.index(3, 4, 0));
        assert_eq!(g.index(3, 4, -1), g.index(3, 4, 9));
        assert_eq!(
            g.nearest_node([0.45, 0.45, std::f64::consts::TAU - 1e-9]),
            Some([7, 7, 0])
        );
    }
}
