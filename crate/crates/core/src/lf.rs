//! Lax-Friedrichs sweeping: centered differences plus artificial viscosity,
//! applied to problems that supply their Hamiltonian.

use crate::engine::{sweep_orders, Lattice};
use crate::error::{Error, Result};
use crate::grid::{Field2, Field3, Grid2, Grid3, Orientation};
use crate::problem::{ControlProblem, Hamiltonian};
use crate::sweep2d::{check_boundary, iterate, lattice2, SolveResult, SolveResult2, SolveResult3};
use crate::sweep3d::lattice3;

/// Treatment of the outermost layer the centered stencil reads but never
/// updates: the ghost layer when the frame is swept, else the frame itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LfBoundary {
    /// After every sweep, `phi_0 = min(max(2 phi_1 - phi_2, phi_2), phi_0)`
    /// along each non-periodic axis.
    #[default]
    Extrapolate,
    /// The layer keeps its initial value.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LfConfig {
    pub tol: f64,
    pub max_iters: usize,
    /// Viscosity per axis; the problem's own bound when `None`.
    pub sigma: Option<Vec<f64>>,
    pub boundary: LfBoundary,
    /// Starting value away from the boundary set. It must be finite
    /// because every update reads all neighbors.
    pub init: f64,
    /// Update the grid boundary nodes too, extrapolating into the ghosts.
    pub sweep_frame: bool,
}

impl Default for LfConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 100_000,
            sigma: None,
            boundary: LfBoundary::Extrapolate,
            init: 1e6,
            sweep_frame: true,
        }
    }
}

impl LfConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn sigma<const D: usize>(
        &self,
        problem: &ControlProblem<D>,
    ) -> Result<([f64; D], Hamiltonian<D>)> {
        let lf = problem.lf_hamiltonian().ok_or_else(|| {
            Error::InvalidProblem(format!("{} does not provide a Hamiltonian", problem.name()))
        })?;
        let sigma = match &self.sigma {
            None => lf.sigma,
            Some(s) if s.len() == D => std::array::from_fn(|a| s[a]),
            Some(s) => {
                return Err(Error::InvalidConfig(format!(
                    "expected {D} viscosity coefficients, got {}",
                    s.len()
                )))
            }
        };
        if sigma.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "viscosity coefficients must be positive, got {sigma:?}"
            )));
        }
        Ok((sigma, lf.hamiltonian.clone()))
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !self.init.is_finite() {
            return Err(Error::InvalidConfig(
                "LF initial value must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// The LF candidate from the node position and its `2D` neighbors, given
/// as `(plus, minus)` pairs per axis.
#[inline]
fn lf_candidate<const D: usize>(
    h: &Hamiltonian<D>,
    x: &[f64; D],
    nb: &[(f64, f64); D],
    r: f64,
    sigma: &[f64; D],
    dx: &[f64; D],
) -> f64 {
    let grad: [f64; D] = std::array::from_fn(|a| (nb[a].0 - nb[a].1) / (2.0 * dx[a]));
    let mut num = r - h(x, &grad);
    let mut den = 0.0;
    for a in 0..D {
        num += sigma[a] * (nb[a].0 + nb[a].1) / (2.0 * dx[a]);
        den += sigma[a] / dx[a];
    }
    num / den
}

/// The LF update at a node; `None` when a neighbor is not finite.
pub fn lf_update(
    i: usize,
    j: usize,
    field: &Field2,
    hamiltonian: &Hamiltonian<2>,
    r: f64,
    sigma: [f64; 2],
) -> Option<f64> {
    let g = field.grid();
    let (i, j) = (i as isize, j as isize);
    let nb = [
        (field.get_signed(i + 1, j), field.get_signed(i - 1, j)),
        (field.get_signed(i, j + 1), field.get_signed(i, j - 1)),
    ];
    if nb.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
        return None;
    }
    let x = [g.x(i), g.y(j)];
    Some(lf_candidate(
        hamiltonian,
        &x,
        &nb,
        r,
        &sigma,
        &[g.dx(), g.dy()],
    ))
}

fn extrapolate_frame<const D: usize>(lat: &Lattice<D>, values: &mut [f64], frozen: &[bool]) {
    let outer = lat.sweep_frame as isize;
    for a in 0..D {
        if lat.periodic[a] {
            continue;
        }
        let s = lat.strides[a];
        let last = lat.n[a];
        lat.for_each_node(|idx, n| {
            let dir = if idx[a] == 0 {
                1
            } else if idx[a] == last {
                -1
            } else {
                return;
            };
            // target is the frame node itself, or the ghost just beyond it
            let t = (n as isize - outer * dir * s) as usize;
            if outer == 0 && frozen[t] {
                return;
            }
            let p1 = values[(t as isize + dir * s) as usize];
            let p2 = values[(t as isize + 2 * dir * s) as usize];
            let v = (2.0 * p1 - p2).max(p2).min(values[t]);
            if outer == 0 {
                lat.write(values, idx, t, v);
            } else {
                values[t] = v;
            }
        });
    }
}

fn lf_run<const D: usize>(
    lat: Lattice<D>,
    problem: &ControlProblem<D>,
    config: &LfConfig,
) -> Result<(Vec<f64>, usize, Vec<f64>, bool)> {
    config.validate()?;
    if problem.orientation() != Orientation::Min {
        return Err(Error::InvalidProblem(
            "Lax-Friedrichs sweeping supports minimization problems only".into(),
        ));
    }
    check_boundary(problem, lat.m)?;
    let (sigma, ham) = config.sigma(problem)?;
    let mut values = vec![config.init; lat.len];
    let mut frozen = vec![false; lat.len];
    let mut r = vec![0.0; lat.len];
    lat.for_each_node(|idx, n| r[n] = problem.running_cost(&lat.coord(idx)));
    for b in problem.boundary() {
        let n = lat.flat(b.node);
        frozen[n] = true;
        lat.write(&mut values, b.node, n, b.value);
    }
    let h = lat.h;
    let (iterations, residuals, converged) = iterate(config.tol, config.max_iters, |_| {
        let prev = values.clone();
        for order in sweep_orders::<D>() {
            lat.for_each(order, |idx, n| {
                if frozen[n] {
                    return;
                }
                let nb: [(f64, f64); D] = std::array::from_fn(|a| {
                    let s = lat.strides[a];
                    (
                        values[(n as isize + s) as usize],
                        values[(n as isize - s) as usize],
                    )
                });
                let c = lf_candidate(&ham, &lat.coord(idx), &nb, r[n], &sigma, &h);
                if c < values[n] {
                    lat.write(&mut values, idx, n, c);
                }
            });
            if config.boundary == LfBoundary::Extrapolate {
                extrapolate_frame(&lat, &mut values, &frozen);
            }
        }
        let mut res = 0.0f64;
        lat.for_each([false; D], |_, n| {
            if !frozen[n] {
                res = res.max((values[n] - prev[n]).abs());
            }
        });
        res
    });
    Ok((values, iterations, residuals, converged))
}

/// Solves a 2D problem that provides a Hamiltonian with LF sweeping.
pub fn lf_solve(
    problem: &ControlProblem<2>,
    grid: &Grid2,
    config: &LfConfig,
) -> Result<SolveResult2> {
    let lat = lattice2(grid, 1).with_frame(config.sweep_frame);
    let (values, iterations, residuals, converged) = lf_run(lat.clone(), problem, config)?;
    let field = Field2::from_fn(grid, Orientation::Min, |i, j, _| values[lat.flat([i, j])]);
    Ok(SolveResult {
        field,
        iterations,
        residuals,
        converged,
    })
}

/// Solves a 3D problem that provides a Hamiltonian with LF sweeping.
pub fn lf_solve3(
    problem: &ControlProblem<3>,
    grid: &Grid3,
    config: &LfConfig,
) -> Result<SolveResult3> {
    let lat = lattice3(grid, 1).with_frame(config.sweep_frame);
    let (values, iterations, residuals, converged) = lf_run(lat.clone(), problem, config)?;
    let field = Field3::from_fn(grid, Orientation::Min, |idx, _| values[lat.flat(idx)]);
    Ok(SolveResult {
        field,
        iterations,
        residuals,
        converged,
    })
}
