use super::{Grid2, Grid3};

/// Which way a problem optimizes, which fixes the initialization sentinel
/// and the direction values may move during sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Infimum problems: unknown nodes start at `+inf` and only decrease.
    Min,
    /// Supremum problems (visibility): unknown nodes start at `-inf` and
    /// only increase.
    Max,
}

impl Orientation {
    pub fn sentinel(self) -> f64 {
        match self {
            Orientation::Min => f64::INFINITY,
            Orientation::Max => f64::NEG_INFINITY,
        }
    }

    /// True when `candidate` improves on `current`.
    #[inline]
    pub fn improves(self, candidate: f64, current: f64) -> bool {
        match self {
            Orientation::Min => candidate < current,
            Orientation::Max => candidate > current,
        }
    }

    #[inline]
    pub fn better(self, a: f64, b: f64) -> f64 {
        if self.improves(a, b) {
            a
        } else {
            b
        }
    }
}

/// Node values on a [`Grid2`], including the ghost padding.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2 {
    grid: Grid2,
    values: Vec<f64>,
    orientation: Orientation,
}

impl Field2 {
    /// A field holding the orientation's sentinel everywhere.
    pub fn new(grid: &Grid2, orientation: Orientation) -> Self {
        Self {
            values: vec![orientation.sentinel(); grid.storage_len()],
            grid: grid.clone(),
            orientation,
        }
    }

    /// Fills every grid node (not the ghosts) from `f(i, j, [x, y])`.
    pub fn from_fn(
        grid: &Grid2,
        orientation: Orientation,
        f: impl Fn(usize, usize, [f64; 2]) -> f64,
    ) -> Self {
        let mut field = Self::new(grid, orientation);
        for i in 0..=grid.ni() {
            for j in 0..=grid.nj() {
                field.set(i, j, f(i, j, grid.node(i, j)));
            }
        }
        field
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
    pub fn sentinel(&self) -> f64 {
        self.orientation.sentinel()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i as isize, j as isize)]
    }

    /// Reads any stored node, ghosts included.
    pub fn get_signed(&self, i: isize, j: isize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let idx = self.grid.index(i as isize, j as isize);
        self.values[idx] = v;
    }

    /// Copies node values into a new grid with a different ghost width.
    pub fn regrid(&self, ghost: usize) -> Self {
        let grid = self.grid.with_ghost(ghost).expect("ghost >= 1");
        Self::from_fn(&grid, self.orientation, |i, j, _| self.get(i, j))
    }

    /// Every node value in row-major order, `j` outer and `i` inner.
    pub fn node_rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..=self.grid.nj()).map(move |j| (0..=self.grid.ni()).map(|i| self.get(i, j)).collect())
    }
}

/// Node values on a [`Grid3`], including ghost padding.
#[derive(Debug, Clone, PartialEq)]
pub struct Field3 {
    grid: Grid3,
    values: Vec<f64>,
    orientation: Orientation,
}

impl Field3 {
    pub fn new(grid: &Grid3, orientation: Orientation) -> Self {
        Self {
            values: vec![orientation.sentinel(); grid.storage_len()],
            grid: grid.clone(),
            orientation,
        }
    }

    pub fn from_fn(
        grid: &Grid3,
        orientation: Orientation,
        f: impl Fn([usize; 3], [f64; 3]) -> f64,
    ) -> Self {
        let mut field = Self::new(grid, orientation);
        let [ni, nj, _] = grid.cells();
        for i in 0..=ni {
            for j in 0..=nj {
                for k in 0..grid.distinct_k() {
                    field.set(i, j, k, f([i, j, k], grid.node(i, j, k)));
                }
            }
        }
        field
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
    pub fn sentinel(&self) -> f64 {
        self.orientation.sentinel()
    }

    /// Node value; `k` wraps on a periodic axis.
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.grid.index(i as isize, j as isize, k as isize)]
    }

    pub fn get_signed(&self, i: isize, j: isize, k: isize) -> f64 {
        self.values[self.grid.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let idx = self.grid.index(i as isize, j as isize, k as isize);
        self.values[idx] = v;
    }

    /// The `k`-th constant-z slice as a 2D field over the same `(x, y)`
    /// lattice.
    pub fn slice_z(&self, k: usize) -> Field2 {
        let b = self.grid.bounds();
        let [ni, nj, _] = self.grid.cells();
        let g2 = Grid2::new([b[0], b[1], b[2], b[3]], ni, nj, self.grid.ghost())
            .expect("3D grid bounds are valid in 2D");
        Field2::from_fn(&g2, self.orientation, |i, j, _| self.get(i, j, k))
    }
}
