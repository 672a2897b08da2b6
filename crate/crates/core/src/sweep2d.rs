//! The 2D fast sweeping solver with axis-aligned, rotated and WENO update
//! rules.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{frame_candidate, sweep_orders, Engine, Frame, Lattice};
use crate::error::{Error, Result};
use crate::grid::{Field2, Field3, Grid2, RotationDir2};
use crate::problem::ControlProblem2;

/// Which update rules a solve uses. The axis-aligned rule is always
/// included.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    Basic,
    /// Axis-aligned plus every listed rotation in every iteration.
    Rotated(Vec<RotationDir2>),
    /// Axis-aligned plus `k` rotations drawn from `pool` per iteration.
    RotatedRandom {
        pool: Vec<RotationDir2>,
        k: usize,
        seed: u64,
    },
    /// Third-order WENO derivatives, seeded by a converged basic solve.
    Weno,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub scheme: Scheme,
    pub weno_eps: f64,
    /// Update the nodes on the grid boundary as well as the interior. The
    /// ghost layer then plays the role of the untouched frame.
    pub sweep_frame: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 1000,
            scheme: Scheme::Basic,
            weno_eps: 1e-6,
            sweep_frame: true,
        }
    }
}

impl SolverConfig {
    pub fn basic() -> Self {
        Self::default()
    }

    pub fn rotated(dirs: Vec<RotationDir2>) -> Self {
        Self {
            scheme: Scheme::Rotated(dirs),
            ..Self::default()
        }
    }

    pub fn weno() -> Self {
        Self {
            scheme: Scheme::Weno,
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }

    pub fn with_sweep_frame(mut self, on: bool) -> Self {
        self.sweep_frame = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        match &self.scheme {
            Scheme::Rotated(dirs) if dirs.is_empty() => {
                Err(Error::InvalidConfig("rotation list is empty".into()))
            }
            Scheme::RotatedRandom { pool, k, .. } if *k == 0 || *k > pool.len() => {
                Err(Error::InvalidConfig(format!(
                    "cannot draw {k} rotations from a pool of {}",
                    pool.len()
                )))
            }
            Scheme::Weno if !(self.weno_eps > 0.0) => Err(Error::InvalidConfig(format!(
                "weno_eps must be positive, got {}",
                self.weno_eps
            ))),
            _ => Ok(()),
        }
    }

    fn rotations(&self) -> &[RotationDir2] {
        match &self.scheme {
            Scheme::Rotated(d) => d,
            Scheme::RotatedRandom { pool, .. } => pool,
            _ => &[],
        }
    }

    /// Ghost width the configured stencils read.
    pub fn required_ghost(&self) -> usize {
        match &self.scheme {
            Scheme::Weno => 2,
            _ => self
                .rotations()
                .iter()
                .map(|r| r.reach())
                .max()
                .unwrap_or(1)
                .max(1),
        }
    }
}

/// Outcome of a solve. `iterations` counts passes that changed the field
/// by more than `tol`; `residuals` holds the change of every pass,
/// including the final confirming one.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<F> {
    pub field: F,
    pub iterations: usize,
    pub residuals: Vec<f64>,
    pub converged: bool,
}

pub type SolveResult2 = SolveResult<Field2>;
pub type SolveResult3 = SolveResult<Field3>;

pub(crate) fn rotation_frame(rot: &RotationDir2) -> Frame<2> {
    let (a, b) = (rot.ihat() as isize, rot.jhat() as isize);
    let (c, s) = (rot.cos_beta(), rot.sin_beta());
    Frame {
        axes: [[a, b], [-b, a]],
        unit: [[c, s], [-s, c]],
        ds: [rot.ds(), rot.ds()],
    }
}

fn check_node(field: &Field2, i: usize, j: usize) -> Result<()> {
    let g = field.grid();
    if i > g.ni() || j > g.nj() {
        return Err(Error::InvalidProblem(format!(
            "({i}, {j}) is not a node of a {} x {} grid",
            g.ni(),
            g.nj()
        )));
    }
    Ok(())
}

fn node_candidate(
    i: usize,
    j: usize,
    control: usize,
    frame: &Frame<2>,
    field: &Field2,
    problem: &ControlProblem2,
) -> Result<Option<f64>> {
    check_node(field, i, j)?;
    let need = frame.reach();
    if field.grid().ghost() < need {
        return Err(Error::GhostTooNarrow {
            have: field.grid().ghost(),
            need,
        });
    }
    let x = field.grid().node(i, j);
    let f = problem.dynamics(&x, control);
    let r = problem.running_cost(&x);
    Ok(frame_candidate(frame, &f, r, |s| {
        field.get_signed(i as isize + s[0], j as isize + s[1])
    }))
}

/// Axis-aligned upwind candidate at a node for one control.
/// `None` when the control is degenerate there or reads a sentinel.
pub fn basic_update(
    i: usize,
    j: usize,
    control: usize,
    field: &Field2,
    problem: &ControlProblem2,
) -> Result<Option<f64>> {
    let g = field.grid();
    node_candidate(
        i,
        j,
        control,
        &Frame::axis_aligned([g.dx(), g.dy()]),
        field,
        problem,
    )
}

/// Upwind candidate in the frame rotated onto `rot`.
pub fn rotated_update(
    i: usize,
    j: usize,
    control: usize,
    rot: &RotationDir2,
    field: &Field2,
    problem: &ControlProblem2,
) -> Result<Option<f64>> {
    let g = field.grid();
    if !g.is_square() {
        return Err(Error::NonSquareGrid {
            dx: g.dx(),
            dy: g.dy(),
        });
    }
    node_candidate(i, j, control, &rotation_frame(rot), field, problem)
}

/// Stand-in for non-finite values inside a WENO stencil. The smoothness
/// ratio then drives the weight of any sub-stencil that crosses the frame
/// to zero, leaving the one-sided second-order formula.
pub const WENO_FAR: f64 = 1e6;

#[inline]
fn far(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        WENO_FAR
    }
}

/// One-sided WENO derivatives `(plus, minus)` from five samples centered on
/// the node. `None` when the center is not finite; other non-finite
/// samples are read as [`WENO_FAR`].
pub fn weno_pair(v: [f64; 5], h: f64, eps: f64) -> Option<(f64, f64)> {
    if !v[2].is_finite() {
        return None;
    }
    let [m2, m1, c, p1, p2] = v.map(far);
    let central = (p1 - m1) / (2.0 * h);
    let d_mid = (p1 - 2.0 * c + m1).powi(2);
    let rp = (eps + (p2 - 2.0 * p1 + c).powi(2)) / (eps + d_mid);
    let rm = (eps + (m2 - 2.0 * m1 + c).powi(2)) / (eps + d_mid);
    let wp = 1.0 / (1.0 + 2.0 * rp * rp);
    let wm = 1.0 / (1.0 + 2.0 * rm * rm);
    let plus = (1.0 - wp) * central + wp * (-p2 + 4.0 * p1 - 3.0 * c) / (2.0 * h);
    let minus = (1.0 - wm) * central + wm * (m2 - 4.0 * m1 + 3.0 * c) / (2.0 * h);
    Some((plus, minus))
}

/// Third-order one-sided derivatives `(phi_x+, phi_x-, phi_y+, phi_y-)` at
/// a node, or `None` when the node itself holds a sentinel.
pub fn weno_derivatives(i: usize, j: usize, field: &Field2, eps: f64) -> Result<Option<[f64; 4]>> {
    check_node(field, i, j)?;
    let g = field.grid();
    if g.ghost() < 2 {
        return Err(Error::GhostTooNarrow {
            have: g.ghost(),
            need: 2,
        });
    }
    let (i, j) = (i as isize, j as isize);
    let xs = [-2, -1, 0, 1, 2].map(|d| field.get_signed(i + d, j));
    let ys = [-2, -1, 0, 1, 2].map(|d| field.get_signed(i, j + d));
    Ok(weno_pair(xs, g.dx(), eps)
        .zip(weno_pair(ys, g.dy(), eps))
        .map(|((xp, xm), (yp, ym))| [xp, xm, yp, ym]))
}

/// The upwind rule with neighbors replaced by WENO reconstructions. Falls
/// back to [`basic_update`] when the node holds a sentinel.
pub fn weno_update(
    i: usize,
    j: usize,
    control: usize,
    field: &Field2,
    problem: &ControlProblem2,
    eps: f64,
) -> Result<Option<f64>> {
    let Some(d) = weno_derivatives(i, j, field, eps)? else {
        return basic_update(i, j, control, field, problem);
    };
    let g = field.grid();
    let x = g.node(i, j);
    let f = problem.dynamics(&x, control);
    Ok(weno_candidate(
        &f,
        problem.running_cost(&x),
        field.get(i, j),
        &d,
        [g.dx(), g.dy()],
    ))
}

#[inline]
fn weno_candidate(f: &[f64; 2], r: f64, phi: f64, d: &[f64; 4], h: [f64; 2]) -> Option<f64> {
    let mut num = r;
    let mut den = 0.0;
    for l in 0..2 {
        if f[l] != 0.0 {
            let w = f[l].abs() / h[l];
            let nb = if f[l] > 0.0 {
                phi + h[l] * d[2 * l]
            } else {
                phi - h[l] * d[2 * l + 1]
            };
            num += w * nb;
            den += w;
        }
    }
    (den > 0.0).then(|| num / den)
}

pub(crate) fn check_boundary<const D: usize>(
    problem: &crate::problem::ControlProblem<D>,
    m: [usize; D],
) -> Result<()> {
    for b in problem.boundary() {
        if (0..D).any(|a| b.node[a] >= m[a]) {
            return Err(Error::InvalidProblem(format!(
                "boundary node {:?} lies outside the grid",
                b.node
            )));
        }
    }
    Ok(())
}

pub(crate) fn lattice2(grid: &Grid2, ghost: usize) -> Lattice<2> {
    let b = grid.bounds();
    Lattice::new(
        [grid.ni(), grid.nj()],
        [b[0], b[2]],
        [grid.dx(), grid.dy()],
        ghost,
        [false, false],
    )
}

/// Runs passes until the change drops to `tol` or `max_iters` counted
/// iterations have elapsed. `pass` performs one full pass and returns its
/// residual.
pub(crate) fn iterate(
    tol: f64,
    max_iters: usize,
    mut pass: impl FnMut(usize) -> f64,
) -> (usize, Vec<f64>, bool) {
    let mut residuals = Vec::new();
    let mut iterations = 0;
    loop {
        let res = pass(iterations);
        residuals.push(res);
        if res <= tol {
            return (iterations, residuals, true);
        }
        iterations += 1;
        if iterations >= max_iters {
            return (iterations, residuals, false);
        }
    }
}

/// Solves a 2D control problem by Gauss-Seidel sweeping.
pub fn sweep_solve(
    problem: &ControlProblem2,
    grid: &Grid2,
    config: &SolverConfig,
) -> Result<SolveResult2> {
    config.validate()?;
    check_boundary(problem, [grid.ni() + 1, grid.nj() + 1])?;
    let rots = config.rotations();
    if !rots.is_empty() && !grid.is_square() {
        return Err(Error::NonSquareGrid {
            dx: grid.dx(),
            dy: grid.dy(),
        });
    }
    let ghost = grid.ghost().max(config.required_ghost());
    let mut frames = vec![Frame::axis_aligned([grid.dx(), grid.dy()])];
    frames.extend(rots.iter().map(rotation_frame));
    let mut engine = Engine::new(
        lattice2(grid, ghost).with_frame(config.sweep_frame),
        problem,
        frames,
    );

    let (iterations, residuals, converged) = match &config.scheme {
        Scheme::Basic => run(&mut engine, config, |_| vec![0]),
        Scheme::Rotated(dirs) => {
            let all: Vec<usize> = (0..=dirs.len()).collect();
            run(&mut engine, config, |_| all.clone())
        }
        Scheme::RotatedRandom { pool, k, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            run(&mut engine, config, |_| {
                let mut active = vec![0];
                active.extend(sample(&mut rng, pool.len(), *k).into_iter().map(|t| t + 1));
                active
            })
        }
        Scheme::Weno => {
            let (seed_iters, mut residuals, seed_ok) = run(&mut engine, config, |_| vec![0]);
            if !seed_ok {
                (seed_iters, residuals, false)
            } else {
                let (it, res, ok) = run_weno(&mut engine, config);
                residuals.extend(res);
                (seed_iters + it, residuals, ok)
            }
        }
    };
    let field = Field2::from_fn(grid, problem.orientation(), |i, j, _| engine.value([i, j]));
    Ok(SolveResult {
        field,
        iterations,
        residuals,
        converged,
    })
}

fn run(
    engine: &mut Engine<'_, 2>,
    config: &SolverConfig,
    mut active: impl FnMut(usize) -> Vec<usize>,
) -> (usize, Vec<f64>, bool) {
    iterate(config.tol, config.max_iters, |n| {
        let frames = active(n);
        let prev = engine.values.clone();
        engine.pass(&frames);
        engine.residual(&prev)
    })
}

fn run_weno(engine: &mut Engine<'_, 2>, config: &SolverConfig) -> (usize, Vec<f64>, bool) {
    let lat = engine.lat.clone();
    let h = lat.h;
    let (sx, sy) = (lat.strides[0], lat.strides[1]);
    let eps = config.weno_eps;
    let fixed: Option<Vec<[f64; 2]>> = engine.problem.is_state_independent().then(|| {
        (0..engine.problem.control_points().len())
            .map(|c| engine.problem.dynamics(&lat.lo, c))
            .collect()
    });
    iterate(config.tol, config.max_iters, |_| {
        let prev = engine.values.clone();
        for order in sweep_orders::<2>() {
            lat.for_each(order, |idx, n| {
                if engine.frozen[n] {
                    return;
                }
                let v = &engine.values;
                let at = |o: isize| v[(n as isize + o) as usize];
                let xs = [-2, -1, 0, 1, 2].map(|d| at(d * sx));
                let ys = [-2, -1, 0, 1, 2].map(|d| at(d * sy));
                let derivs = weno_pair(xs, h[0], eps)
                    .zip(weno_pair(ys, h[1], eps))
                    .map(|((a, b), (c, d))| [a, b, c, d]);
                let cand = match derivs {
                    None => engine.best_candidate(idx, n, &[0]),
                    Some(d) => {
                        let r = engine.r[n];
                        let phi = v[n];
                        let mut best = engine.orient.sentinel();
                        let mut eval = |f: &[f64; 2]| {
                            if let Some(c) = weno_candidate(f, r, phi, &d, h) {
                                best = engine.orient.better(c, best);
                            }
                        };
                        match &fixed {
                            Some(fs) => fs.iter().for_each(&mut eval),
                            None => {
                                let x = lat.coord(idx);
                                for c in 0..engine.problem.control_points().len() {
                                    eval(&engine.problem.dynamics(&x, c));
                                }
                            }
                        }
                        best
                    }
                };
                engine.commit(idx, n, cand);
            });
        }
        engine.residual(&prev)
    })
}
