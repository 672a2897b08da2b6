//! The 3D fast sweeping solver: eight sweep orderings per iteration, the
//! axis-aligned rule plus any number of lattice rotations, and an optional
//! periodic third axis.

use crate::engine::{frame_candidate, Engine, Frame, Lattice};
use crate::error::{Error, Result};
use crate::grid::{Field3, Grid3, RotationDir3, RotationMode};
use crate::problem::ControlProblem3;
use crate::sweep2d::{check_boundary, iterate, SolveResult, SolveResult3};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig3 {
    pub tol: f64,
    pub max_iters: usize,
    /// Rotated frames used alongside the axis-aligned rule.
    pub rotations: Vec<RotationDir3>,
    /// Update the outermost nodes of non-periodic axes too.
    pub sweep_frame: bool,
}

impl Default for SolverConfig3 {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 1000,
            rotations: Vec::new(),
            sweep_frame: true,
        }
    }
}

impl SolverConfig3 {
    /// Defaults for the car problem, whose value function is only
    /// Lipschitz: a looser `1e-4` tolerance.
    pub fn car() -> Self {
        Self {
            tol: 1e-4,
            ..Self::default()
        }
    }

    pub fn with_rotations(mut self, rotations: Vec<RotationDir3>) -> Self {
        self.rotations = rotations;
        self
    }

    pub fn with_sweep_frame(mut self, on: bool) -> Self {
        self.sweep_frame = on;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }

    pub fn validate(&self, grid: &Grid3) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        for r in &self.rotations {
            check_rotation(r, grid)?;
        }
        Ok(())
    }

    pub fn required_ghost(&self) -> usize {
        self.rotations
            .iter()
            .map(|r| r.reach())
            .max()
            .unwrap_or(1)
            .max(1)
    }
}

/// Rotated axes are only orthogonal in physical space when the spacings
/// they mix agree.
fn check_rotation(r: &RotationDir3, grid: &Grid3) -> Result<()> {
    let h = grid.spacing();
    let same = |a: usize, b: usize| (h[a] - h[b]).abs() <= 1e-12 * h[a].max(h[b]);
    let (ok, a, b) = match r.mode() {
        RotationMode::AxisFixedZ => (same(0, 1), 0, 1),
        RotationMode::AxisFixedY => (same(0, 2), 0, 2),
        RotationMode::AxisFixedX => (same(1, 2), 1, 2),
        RotationMode::General => (grid.is_cube(), 0, if same(0, 1) { 2 } else { 1 }),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NonSquareGrid { dx: h[a], dy: h[b] })
    }
}

pub(crate) fn rotation_frame3(r: &RotationDir3) -> Frame<3> {
    let axes = r.axes().map(|u| u.map(|c| c as isize));
    let norms = r.norms();
    let unit = std::array::from_fn(|l| axes[l].map(|c| c as f64 / norms[l]));
    Frame {
        axes,
        unit,
        ds: r.ds(),
    }
}

pub(crate) fn lattice3(grid: &Grid3, ghost: usize) -> Lattice<3> {
    let b = grid.bounds();
    Lattice::new(
        grid.cells(),
        [b[0], b[2], b[4]],
        grid.spacing(),
        ghost,
        [false, false, grid.periodic_z()],
    )
}

fn node_candidate3(
    idx: [usize; 3],
    control: usize,
    frame: &Frame<3>,
    field: &Field3,
    problem: &ControlProblem3,
) -> Result<Option<f64>> {
    let g = field.grid();
    let [ni, nj, nk] = g.cells();
    let [i, j, k] = idx;
    let k_ok = if g.periodic_z() { k < nk } else { k <= nk };
    if i > ni || j > nj || !k_ok {
        return Err(Error::InvalidProblem(format!(
            "{idx:?} is not a node of a {ni} x {nj} x {nk} grid"
        )));
    }
    if g.ghost() < frame.reach() {
        return Err(Error::GhostTooNarrow {
            have: g.ghost(),
            need: frame.reach(),
        });
    }
    let x = g.node(i, j, k);
    let f = problem.dynamics(&x, control);
    let r = problem.running_cost(&x);
    Ok(frame_candidate(frame, &f, r, |s| {
        field.get_signed(i as isize + s[0], j as isize + s[1], k as isize + s[2])
    }))
}

/// Axis-aligned upwind candidate at a node for one control.
pub fn basic_update3(
    idx: [usize; 3],
    control: usize,
    field: &Field3,
    problem: &ControlProblem3,
) -> Result<Option<f64>> {
    node_candidate3(
        idx,
        control,
        &Frame::axis_aligned(field.grid().spacing()),
        field,
        problem,
    )
}

/// Upwind candidate in a rotated frame.
pub fn rotated_update3(
    idx: [usize; 3],
    control: usize,
    rot: &RotationDir3,
    field: &Field3,
    problem: &ControlProblem3,
) -> Result<Option<f64>> {
    check_rotation(rot, field.grid())?;
    node_candidate3(idx, control, &rotation_frame3(rot), field, problem)
}

/// Solves a 3D control problem by Gauss-Seidel sweeping.
pub fn sweep_solve3(
    problem: &ControlProblem3,
    grid: &Grid3,
    config: &SolverConfig3,
) -> Result<SolveResult3> {
    config.validate(grid)?;
    let [ni, nj, nk] = grid.cells();
    let mk = if grid.periodic_z() { nk } else { nk + 1 };
    check_boundary(problem, [ni + 1, nj + 1, mk])?;
    let ghost = grid.ghost().max(config.required_ghost());
    if grid.periodic_z() && ghost > nk {
        return Err(Error::InvalidGrid(format!(
            "periodic axis with {nk} nodes is shorter than the stencil reach {ghost}"
        )));
    }
    let mut frames = vec![Frame::axis_aligned(grid.spacing())];
    frames.extend(config.rotations.iter().map(rotation_frame3));
    let active: Vec<usize> = (0..frames.len()).collect();
    let mut engine = Engine::new(
        lattice3(grid, ghost).with_frame(config.sweep_frame),
        problem,
        frames,
    );
    let (iterations, residuals, converged) = iterate(config.tol, config.max_iters, |_| {
        let prev = engine.values.clone();
        engine.pass(&active);
        engine.residual(&prev)
    });
    let field = Field3::from_fn(grid, problem.orientation(), |idx, _| engine.value(idx));
    Ok(SolveResult {
        field,
        iterations,
        residuals,
        converged,
    })
}
