//! Exact reference solutions, error norms and convergence tables.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Field2, Field3, Grid2};
use crate::problem::{ControlProblem2, EikonalNorm, ScalarFn};
use crate::sweep2d::SolveResult2;

/// A named closed-form solution.
#[derive(Clone)]
pub struct ExactSolution<const D: usize> {
    name: String,
    eval: ScalarFn<D>,
}

impl<const D: usize> ExactSolution<D> {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&[f64; D]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn eval(&self, x: &[f64; D]) -> f64 {
        (self.eval)(x)
    }
}

impl<const D: usize> fmt::Debug for ExactSolution<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExactSolution")
            .field("name", &self.name)
            .finish()
    }
}

/// Distance from the origin in the norm dual to `p`: the solution of
/// `||grad phi||_p = 1` with a point source at the origin.
pub fn exact_eikonal(p: EikonalNorm, point: &[f64]) -> f64 {
    match p {
        EikonalNorm::One => point.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
        EikonalNorm::Two => point.iter().map(|v| v * v).sum::<f64>().sqrt(),
        EikonalNorm::Inf => point.iter().map(|v| v.abs()).sum(),
    }
}

/// Which nodes an error norm covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorRegion {
    /// Every grid node, the boundary included.
    #[default]
    All,
    /// Nodes off the outermost layer of each non-periodic axis.
    Interior,
}

fn axis_nodes(cells: usize, periodic: bool, region: ErrorRegion) -> std::ops::Range<usize> {
    match (periodic, region) {
        (true, _) => 0..cells,
        (false, ErrorRegion::All) => 0..cells + 1,
        (false, ErrorRegion::Interior) => 1..cells,
    }
}

/// Trapezoidal weight of node `i` along an axis: half on the two end nodes
/// when they are part of the region.
fn axis_weight(i: usize, cells: usize, periodic: bool, region: ErrorRegion) -> f64 {
    if !periodic && region == ErrorRegion::All && (i == 0 || i == cells) {
        0.5
    } else {
        1.0
    }
}

/// `(L-infinity, L1)` errors over every grid node. L1 is the trapezoidal
/// integral of the pointwise error.
pub fn error_norms(field: &Field2, exact: &ExactSolution<2>) -> Result<(f64, f64)> {
    error_norms_in(field, exact, ErrorRegion::All)
}

pub fn error_norms_in(
    field: &Field2,
    exact: &ExactSolution<2>,
    region: ErrorRegion,
) -> Result<(f64, f64)> {
    let g = field.grid();
    let (mut linf, mut l1) = (0.0f64, 0.0);
    for i in axis_nodes(g.ni(), false, region) {
        for j in axis_nodes(g.nj(), false, region) {
            let v = field.get(i, j);
            if !v.is_finite() {
                return Err(Error::SentinelInInterior(vec![i, j]));
            }
            let e = (v - exact.eval(&g.node(i, j))).abs();
            linf = linf.max(e);
            l1 += e * axis_weight(i, g.ni(), false, region) * axis_weight(j, g.nj(), false, region);
        }
    }
    Ok((linf, l1 * g.dx() * g.dy()))
}

/// 3D counterpart of [`error_norms`].
pub fn error_norms3(field: &Field3, exact: &ExactSolution<3>) -> Result<(f64, f64)> {
    error_norms3_in(field, exact, ErrorRegion::All)
}

pub fn error_norms3_in(
    field: &Field3,
    exact: &ExactSolution<3>,
    region: ErrorRegion,
) -> Result<(f64, f64)> {
    let g = field.grid();
    let [ni, nj, nk] = g.cells();
    let (mut linf, mut l1) = (0.0f64, 0.0);
    for i in axis_nodes(ni, false, region) {
        for j in axis_nodes(nj, false, region) {
            for k in axis_nodes(nk, g.periodic_z(), region) {
                let v = field.get(i, j, k);
                if !v.is_finite() {
                    return Err(Error::SentinelInInterior(vec![i, j, k]));
                }
                let e = (v - exact.eval(&g.node(i, j, k))).abs();
                let w = axis_weight(i, ni, false, region)
                    * axis_weight(j, nj, false, region)
                    * axis_weight(k, nk, g.periodic_z(), region);
                linf = linf.max(e);
                l1 += e * w;
            }
        }
    }
    let h = g.spacing();
    Ok((linf, l1 * h[0] * h[1] * h[2]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    /// Cells per axis.
    pub n: usize,
    pub linf: f64,
    pub linf_order: Option<f64>,
    pub l1: f64,
    pub l1_order: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

/// Observed order between two resolutions; `log2(e0 / e1)` when the
/// resolution doubles.
pub fn observed_order(n0: usize, e0: f64, n1: usize, e1: f64) -> Option<f64> {
    (e0 > 0.0 && e1 > 0.0).then(|| (e0 / e1).ln() / (n1 as f64 / n0 as f64).ln())
}

impl ConvergenceTable {
    /// Builds a table from `(n, linf, l1, iterations, converged, seconds)`
    /// rows, filling in the order columns.
    pub fn from_rows(raw: Vec<(usize, f64, f64, usize, bool, f64)>) -> Self {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(raw.len());
        for (n, linf, l1, iterations, converged, seconds) in raw {
            let (linf_order, l1_order) = match rows.last() {
                Some(p) => (
                    observed_order(p.n, p.linf, n, linf),
                    observed_order(p.n, p.l1, n, l1),
                ),
                None => (None, None),
            };
            rows.push(ConvergenceRow {
                n,
                linf,
                linf_order,
                l1,
                l1_order,
                iterations,
                converged,
                seconds,
            });
        }
        Self { rows }
    }
}

impl fmt::Display for ConvergenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = |o: Option<f64>| o.map_or("---".to_string(), |v| format!("{v:.4}"));
        writeln!(
            f,
            "{:>6} {:>12} {:>8} {:>12} {:>8} {:>6} {:>9}",
            "N", "Linf err", "order", "L1 err", "order", "iters", "time[s]"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>6} {:>12.4e} {:>8} {:>12.4e} {:>8} {:>6}{} {:>9.3}",
                r.n,
                r.linf,
                order(r.linf_order),
                r.l1,
                order(r.l1_order),
                r.iterations,
                if r.converged { " " } else { "*" },
                r.seconds
            )?;
        }
        Ok(())
    }
}

/// Solves one problem per resolution, in parallel, and tabulates errors
/// against the problem's exact solution. Rows that fail to converge are
/// kept and flagged.
pub fn convergence_table<P, S>(
    resolutions: &[usize],
    problem: P,
    solve: S,
) -> Result<ConvergenceTable>
where
    P: Fn(usize) -> Result<(ControlProblem2, Grid2)> + Sync,
    S: Fn(&ControlProblem2, &Grid2) -> Result<SolveResult2> + Sync,
{
    if resolutions.is_empty() {
        return Err(Error::InvalidConfig("no resolutions given".into()));
    }
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(format!(
            "resolutions must be strictly increasing, got {resolutions:?}"
        )));
    }
    let raw: Result<Vec<_>> = resolutions
        .par_iter()
        .map(|&n| {
            let (p, grid) = problem(n)?;
            let exact = p
                .exact()
                .ok_or_else(|| {
                    Error::InvalidProblem(format!("{} has no exact solution", p.name()))
                })?
                .clone();
            let t0 = Instant::now();
            let out = solve(&p, &grid)?;
            let secs = t0.elapsed().as_secs_f64();
            let (linf, l1) = error_norms(&out.field, &exact)?;
            Ok((n, linf, l1, out.iterations, out.converged, secs))
        })
        .collect();
    Ok(ConvergenceTable::from_rows(raw?))
}
