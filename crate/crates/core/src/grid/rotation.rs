use super::Grid3;
use crate::error::{Error, Result};

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A lattice direction `(ihat, jhat)` defining a rotated coordinate frame
/// whose first axis points along `(ihat, jhat)` and second along
/// `(-jhat, ihat)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationDir2 {
    ihat: usize,
    jhat: usize,
    beta: f64,
    cos_beta: f64,
    sin_beta: f64,
    ds: f64,
}

impl RotationDir2 {
    /// A reduced direction with `ihat, jhat >= 1`.
    pub fn new(ihat: usize, jhat: usize, dx: f64, dy: f64) -> Result<Self> {
        if ihat == 0 || jhat == 0 {
            return Err(Error::InvalidRotation(format!(
                "components must be positive, got ({ihat}, {jhat})"
            )));
        }
        if gcd(ihat, jhat) != 1 {
            return Err(Error::InvalidRotation(format!(
                "({ihat}, {jhat}) is not reduced"
            )));
        }
        Ok(Self::build(ihat, jhat, dx, dy))
    }

    /// The degenerate direction `(1, 0)`: on a square grid its stencil
    /// coincides with the axis-aligned one.
    pub fn identity(dx: f64, dy: f64) -> Self {
        Self::build(1, 0, dx, dy)
    }

    fn build(ihat: usize, jhat: usize, dx: f64, dy: f64) -> Self {
        let (a, b) = (ihat as f64, jhat as f64);
        let norm = a.hypot(b);
        Self {
            ihat,
            jhat,
            beta: b.atan2(a),
            cos_beta: a / norm,
            sin_beta: b / norm,
            ds: (a * dx).hypot(b * dy),
        }
    }

    pub fn ihat(&self) -> usize {
        self.ihat
    }
    pub fn jhat(&self) -> usize {
        self.jhat
    }
    /// Rotation angle, `atan(jhat / ihat)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn cos_beta(&self) -> f64 {
        self.cos_beta
    }
    pub fn sin_beta(&self) -> f64 {
        self.sin_beta
    }
    /// Length of one rotated lattice step.
    pub fn ds(&self) -> f64 {
        self.ds
    }
    /// Widest index offset the stencil reads.
    pub fn reach(&self) -> usize {
        self.ihat.max(self.jhat)
    }
}

/// Closed form for the number of distinct angles `atan(j/i)` with
/// `1 <= i, j <= m`: twice the totient sum minus one.
pub fn rotation_count(m: usize) -> usize {
    let totient_sum: usize = (1..=m)
        .map(|n| (1..=n).filter(|&k| gcd(k, n) == 1).count())
        .sum();
    2 * totient_sum - 1
}

/// One direction per distinct angle among pairs `1 <= ihat, jhat <= max`,
/// sorted by angle. Quadrant reflections are handled by the update sign,
/// so only the open first quadrant is enumerated.
pub fn enumerate_rotations(max: usize, dx: f64, dy: f64) -> Result<Vec<RotationDir2>> {
    if max < 1 {
        return Err(Error::InvalidRotation("max must be at least 1".into()));
    }
    if (dx - dy).abs() > 1e-12 * dx.max(dy) {
        return Err(Error::NonSquareGrid { dx, dy });
    }
    let mut dirs: Vec<_> = (1..=max)
        .flat_map(|i| (1..=max).map(move |j| (i, j)))
        .filter(|&(i, j)| gcd(i, j) == 1)
        .map(|(i, j)| RotationDir2::build(i, j, dx, dy))
        .collect();
    dirs.sort_by(|a, b| a.beta.total_cmp(&b.beta));
    Ok(dirs)
}

/// How a 3D rotated frame is built from an integer triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationMode {
    /// Planar rotation in `(y, z)` using `(jhat, khat)`; x untouched.
    AxisFixedX,
    /// Planar rotation in `(x, z)` using `(ihat, khat)`; y untouched.
    AxisFixedY,
    /// Planar rotation in `(x, y)` using `(ihat, jhat)`; z untouched.
    AxisFixedZ,
    /// First axis along `(ihat, jhat, khat)`, then `(-jhat, ihat, 0)` and
    /// `(-ihat khat, -jhat khat, ihat^2 + jhat^2)`.
    General,
}

/// Three mutually orthogonal integer lattice directions and their physical
/// step lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationDir3 {
    triple: [i64; 3],
    mode: RotationMode,
    axes: [[i64; 3]; 3],
    ds: [f64; 3],
    norms: [f64; 3],
}

impl RotationDir3 {
    pub fn triple(&self) -> [i64; 3] {
        self.triple
    }
    pub fn mode(&self) -> RotationMode {
        self.mode
    }
    /// Axis directions as index offsets.
    pub fn axes(&self) -> [[i64; 3]; 3] {
        self.axes
    }
    /// Physical length of one step along each axis.
    pub fn ds(&self) -> [f64; 3] {
        self.ds
    }
    /// Euclidean length of each axis in index units.
    pub fn norms(&self) -> [f64; 3] {
        self.norms
    }
    pub fn reach(&self) -> usize {
        self.axes
            .iter()
            .flat_map(|u| u.iter().map(|c| c.unsigned_abs() as usize))
            .max()
            .unwrap_or(0)
    }

    /// Rotated dynamics: the components of `f` along each unit axis.
    pub fn rotate(&self, f: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (l, u) in self.axes.iter().enumerate() {
            out[l] = (u[0] as f64 * f[0] + u[1] as f64 * f[1] + u[2] as f64 * f[2]) / self.norms[l];
        }
        out
    }
}

/// Builds the rotated frame for a triple. In axis-fixed modes the component
/// on the fixed axis is ignored.
pub fn rotation3_from_triple(
    ihat: i64,
    jhat: i64,
    khat: i64,
    grid: &Grid3,
    mode: RotationMode,
) -> Result<RotationDir3> {
    if ihat == 0 && jhat == 0 && khat == 0 {
        return Err(Error::InvalidRotation(
            "the zero triple has no direction".into(),
        ));
    }
    let planar = |a: i64, b: i64, which: &str| -> Result<()> {
        if a == 0 && b == 0 {
            Err(Error::InvalidRotation(format!(
                "the {which} components of ({ihat}, {jhat}, {khat}) are both zero"
            )))
        } else {
            Ok(())
        }
    };
    let axes = match mode {
        RotationMode::General => {
            planar(ihat, jhat, "x and y")?;
            [
                [ihat, jhat, khat],
                [-jhat, ihat, 0],
                [-ihat * khat, -jhat * khat, ihat * ihat + jhat * jhat],
            ]
        }
        RotationMode::AxisFixedZ => {
            planar(ihat, jhat, "x and y")?;
            [[ihat, jhat, 0], [-jhat, ihat, 0], [0, 0, 1]]
        }
        RotationMode::AxisFixedY => {
            planar(ihat, khat, "x and z")?;
            [[ihat, 0, khat], [-khat, 0, ihat], [0, 1, 0]]
        }
        RotationMode::AxisFixedX => {
            planar(jhat, khat, "y and z")?;
            [[0, jhat, khat], [0, -khat, jhat], [1, 0, 0]]
        }
    };
    let h = grid.spacing();
    let ds = axes.map(|u| {
        ((u[0] as f64 * h[0]).powi(2) + (u[1] as f64 * h[1]).powi(2) + (u[2] as f64 * h[2]).powi(2))
            .sqrt()
    });
    let norms = axes.map(|u| ((u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) as f64).sqrt());
    Ok(RotationDir3 {
        triple: [ihat, jhat, khat],
        mode,
        axes,
        ds,
        norms,
    })
}

/// The three `pi/4` rotations that each keep one coordinate axis fixed.
pub fn edge_rotations(grid: &Grid3) -> Result<Vec<RotationDir3>> {
    [
        RotationMode::AxisFixedX,
        RotationMode::AxisFixedY,
        RotationMode::AxisFixedZ,
    ]
    .into_iter()
    .map(|m| rotation3_from_triple(1, 1, 1, grid, m))
    .collect()
}

/// The four general rotations pointing at the cube corners
/// `(1,1,1)`, `(1,-1,1)`, `(1,1,-1)` and `(1,-1,-1)`.
pub fn corner_rotations(grid: &Grid3) -> Result<Vec<RotationDir3>> {
    [[1, 1, 1], [1, -1, 1], [1, 1, -1], [1, -1, -1]]
        .into_iter()
        .map(|t| rotation3_from_triple(t[0], t[1], t[2], grid, RotationMode::General))
        .collect()
}
