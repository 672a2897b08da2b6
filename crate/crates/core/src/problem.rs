//! Control-form problem definitions
//! `-r(x) = inf_{a in A} <f(x, a), grad phi(x)>` with boundary data on a
//! node set, plus constructors for the built-in test problems.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::analysis::{exact_eikonal, ExactSolution};
use crate::error::{Error, Result};
use crate::grid::{Grid2, Grid3, Orientation};

/// Dynamics `f(x, a)`.
pub type Dynamics<const D: usize> = Arc<dyn Fn(&[f64; D], &[f64]) -> [f64; D] + Send + Sync>;
/// A scalar function of position (running cost, obstacle, speed).
pub type ScalarFn<const D: usize> = Arc<dyn Fn(&[f64; D]) -> f64 + Send + Sync>;
/// A Hamiltonian `H(x, grad phi)` in the `H = r` convention.
pub type Hamiltonian<const D: usize> = Arc<dyn Fn(&[f64; D], &[f64; D]) -> f64 + Send + Sync>;

/// Default number of samples on the unit circle.
pub const DEFAULT_CIRCLE_SAMPLES: usize = 400;

/// The admissible control set.
#[derive(Debug, Clone, PartialEq)]
pub enum ControlSet {
    /// An explicit list of control vectors.
    Finite(Vec<Vec<f64>>),
    /// Unit vectors `(cos a_k, sin a_k)` with `a_k = 2 pi k / K`.
    SampledCircle(usize),
    /// Unit vectors `(cos a cos b, sin a cos b, sin b)`: `ka` azimuths times
    /// `kb` interior inclinations, plus both poles.
    SampledSphere { ka: usize, kb: usize },
}

impl ControlSet {
    pub fn validate(&self) -> Result<()> {
        match self {
            ControlSet::Finite(list) => {
                if list.is_empty() {
                    return Err(Error::InvalidProblem("control set is empty".into()));
                }
                for (n, a) in list.iter().enumerate() {
                    if list[..n].contains(a) {
                        return Err(Error::InvalidProblem(format!("duplicate control {a:?}")));
                    }
                }
                Ok(())
            }
            ControlSet::SampledCircle(k) if *k < 4 => Err(Error::InvalidProblem(format!(
                "circle needs at least 4 samples, got {k}"
            ))),
            ControlSet::SampledSphere { ka, kb } if *ka < 4 || *kb < 1 => Err(
                Error::InvalidProblem(format!("sphere sampling too coarse: ka = {ka}, kb = {kb}")),
            ),
            _ => Ok(()),
        }
    }

    /// Materializes the control vectors in enumeration order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        match self {
            ControlSet::Finite(list) => list.clone(),
            ControlSet::SampledCircle(k) => (0..*k)
                .map(|n| {
                    let (c, s) = unit_circle(n, *k);
                    vec![c, s]
                })
                .collect(),
            ControlSet::SampledSphere { ka, kb } => {
                let mut pts = vec![vec![0.0, 0.0, -1.0]];
                for l in 0..*kb {
                    let b = -FRAC_PI_2 + PI * (l as f64 + 0.5) / *kb as f64;
                    for n in 0..*ka {
                        let (c, s) = unit_circle(n, *ka);
                        pts.push(vec![c * b.cos(), s * b.cos(), b.sin()]);
                    }
                }
                pts.push(vec![0.0, 0.0, 1.0]);
                pts
            }
        }
    }
}

/// `(cos, sin)` of `2 pi n / k`, with exact zeros on the axes so that
/// axis-aligned controls read a single neighbor.
fn unit_circle(n: usize, k: usize) -> (f64, f64) {
    if (4 * n).is_multiple_of(k) {
        return match 4 * n / k {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    let a = TAU * n as f64 / k as f64;
    (a.cos(), a.sin())
}

/// A node held fixed at a prescribed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryNode<const D: usize> {
    pub node: [usize; D],
    pub value: f64,
}

/// Artificial viscosity and Hamiltonian used by the Lax-Friedrichs solver.
#[derive(Clone)]
pub struct LfHamiltonian<const D: usize> {
    pub hamiltonian: Hamiltonian<D>,
    pub sigma: [f64; D],
}

/// A steady control problem on a fixed grid.
#[derive(Clone)]
pub struct ControlProblem<const D: usize> {
    name: String,
    controls: ControlSet,
    points: Vec<Vec<f64>>,
    dynamics: Dynamics<D>,
    state_independent: bool,
    dynamics_axis: Option<usize>,
    running_cost: ScalarFn<D>,
    boundary: Vec<BoundaryNode<D>>,
    orientation: Orientation,
    floor: Option<ScalarFn<D>>,
    exact: Option<ExactSolution<D>>,
    lf: Option<LfHamiltonian<D>>,
    initial: Option<f64>,
}

impl<const D: usize> fmt::Debug for ControlProblem<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ControlProblem")
            .field("name", &self.name)
            .field("dim", &D)
            .field("controls", &self.points.len())
            .field("boundary", &self.boundary)
            .field("orientation", &self.orientation)
            .finish_non_exhaustive()
    }
}

impl<const D: usize> ControlProblem<D> {
    pub fn new(
        name: impl Into<String>,
        controls: ControlSet,
        dynamics: Dynamics<D>,
        running_cost: ScalarFn<D>,
        boundary: Vec<BoundaryNode<D>>,
        orientation: Orientation,
    ) -> Result<Self> {
        controls.validate()?;
        if boundary.is_empty() {
            return Err(Error::InvalidProblem("boundary set is empty".into()));
        }
        if let Some(b) = boundary.iter().find(|b| !b.value.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "boundary value at {:?} is not finite",
                b.node
            )));
        }
        Ok(Self {
            name: name.into(),
            points: controls.points(),
            controls,
            dynamics,
            state_independent: false,
            dynamics_axis: None,
            running_cost,
            boundary,
            orientation,
            floor: None,
            exact: None,
            lf: None,
            initial: None,
        })
    }

    /// Declares that `f(x, a)` does not depend on `x`, letting solvers
    /// evaluate the dynamics once per control.
    pub fn state_independent(mut self) -> Self {
        self.state_independent = true;
        self
    }

    /// Declares that `f(x, a)` depends on `x` only through its coordinate
    /// along `axis`, so solvers can tabulate the dynamics per slice.
    pub fn dynamics_along(mut self, axis: usize) -> Result<Self> {
        if axis >= D {
            return Err(Error::InvalidProblem(format!(
                "axis {axis} out of range for dimension {D}"
            )));
        }
        self.dynamics_axis = Some(axis);
        Ok(self)
    }

    /// A pointwise obstacle combined into every update with the problem's
    /// orientation (`max` for supremum problems).
    pub fn with_floor(mut self, floor: ScalarFn<D>) -> Self {
        self.floor = Some(floor);
        self
    }

    pub fn with_exact(mut self, exact: ExactSolution<D>) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn with_hamiltonian(mut self, hamiltonian: Hamiltonian<D>, sigma: [f64; D]) -> Self {
        self.lf = Some(LfHamiltonian { hamiltonian, sigma });
        self
    }

    /// Starts the sweep solvers from a large finite value instead of the
    /// infinite sentinel. Needed when every control moves diagonally, since
    /// such a candidate reads two neighbors and one of them is unresolved
    /// until its own update.
    pub fn with_initial_value(mut self, value: f64) -> Self {
        self.initial = Some(value);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn controls(&self) -> &ControlSet {
        &self.controls
    }
    /// Materialized control vectors.
    pub fn control_points(&self) -> &[Vec<f64>] {
        &self.points
    }
    pub fn is_state_independent(&self) -> bool {
        self.state_independent
    }
    pub fn dynamics_axis(&self) -> Option<usize> {
        self.dynamics_axis
    }
    pub fn boundary(&self) -> &[BoundaryNode<D>] {
        &self.boundary
    }
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
    pub fn exact(&self) -> Option<&ExactSolution<D>> {
        self.exact.as_ref()
    }
    pub fn lf_hamiltonian(&self) -> Option<&LfHamiltonian<D>> {
        self.lf.as_ref()
    }
    pub fn initial_value(&self) -> Option<f64> {
        self.initial
    }

    #[inline]
    pub fn dynamics(&self, x: &[f64; D], control: usize) -> [f64; D] {
        (self.dynamics)(x, &self.points[control])
    }
    #[inline]
    pub fn running_cost(&self, x: &[f64; D]) -> f64 {
        (self.running_cost)(x)
    }
    #[inline]
    pub fn floor(&self, x: &[f64; D]) -> Option<f64> {
        self.floor.as_ref().map(|g| g(x))
    }
}

pub type ControlProblem2 = ControlProblem<2>;
pub type ControlProblem3 = ControlProblem<3>;

/// Norm index `p` of `||grad phi||_p = 1 / v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EikonalNorm {
    One,
    Two,
    Inf,
}

impl std::str::FromStr for EikonalNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(EikonalNorm::One),
            "2" => Ok(EikonalNorm::Two),
            "inf" | "Inf" | "infinity" => Ok(EikonalNorm::Inf),
            _ => Err(Error::InvalidProblem(format!(
                "unknown norm '{s}', expected 1, 2 or inf"
            ))),
        }
    }
}

/// Propagation speed of an eikonal problem.
#[derive(Clone)]
pub enum Speed<const D: usize> {
    Uniform(f64),
    Field(ScalarFn<D>),
}

impl<const D: usize> Speed<D> {
    fn at(&self, x: &[f64; D]) -> f64 {
        match self {
            Speed::Uniform(v) => *v,
            Speed::Field(f) => f(x),
        }
    }
}

fn state_free<const D: usize>() -> Dynamics<D> {
    Arc::new(|_, a| {
        let mut f = [0.0; D];
        f.copy_from_slice(a);
        f
    })
}

/// Sup-norm over the control set of `-<a, p>`, i.e. the dual norm the
/// control set induces.
fn control_hamiltonian<const D: usize>(points: Vec<Vec<f64>>) -> Hamiltonian<D> {
    Arc::new(move |_, p| {
        points
            .iter()
            .map(|a| -a.iter().zip(p).map(|(a, p)| a * p).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    })
}

/// Starting value for problems whose candidates mix several unresolved
/// neighbors, such as all-diagonal controls or the car.
pub const LARGE_INIT: f64 = 1e6;

/// The `p`-norm eikonal equation `||grad phi||_p = 1 / v` in 2D with a point
/// source snapped to the nearest node. `circle_samples` is used only for
/// `p = 2`.
pub fn eikonal_problem(
    p: EikonalNorm,
    speed: Speed<2>,
    grid: &Grid2,
    source: [f64; 2],
    circle_samples: usize,
) -> Result<ControlProblem2> {
    let node = grid.nearest_node(source).ok_or_else(|| {
        Error::InvalidProblem(format!("source {source:?} lies outside the domain"))
    })?;
    for i in 0..=grid.ni() {
        for j in 0..=grid.nj() {
            let v = speed.at(&grid.node(i, j));
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidProblem(format!(
                    "speed must be positive, got {v} at node ({i}, {j})"
                )));
            }
        }
    }
    let controls = match p {
        EikonalNorm::Two => ControlSet::SampledCircle(circle_samples),
        EikonalNorm::One => ControlSet::Finite(vec![
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, -1.0],
        ]),
        EikonalNorm::Inf => ControlSet::Finite(vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ]),
    };
    let hamiltonian: Hamiltonian<2> = match p {
        EikonalNorm::Two => Arc::new(|_, q| q[0].hypot(q[1])),
        _ => control_hamiltonian(controls.points()),
    };
    let cost_speed = speed.clone();
    let running_cost: ScalarFn<2> = Arc::new(move |x| 1.0 / cost_speed.at(x));
    let name = match p {
        EikonalNorm::One => "eikonal-1",
        EikonalNorm::Two => "eikonal-2",
        EikonalNorm::Inf => "eikonal-inf",
    };
    let mut problem = ControlProblem::new(
        name,
        controls,
        state_free(),
        running_cost,
        vec![BoundaryNode { node, value: 0.0 }],
        Orientation::Min,
    )?
    .state_independent()
    .with_hamiltonian(hamiltonian, [1.0, 1.0]);
    if p == EikonalNorm::One {
        problem = problem.with_initial_value(LARGE_INIT);
    }
    if let Speed::Uniform(v) = speed {
        problem = problem.with_exact(ExactSolution::new(name, move |x: &[f64; 2]| {
            exact_eikonal(p, &[x[0] - source[0], x[1] - source[1]]) / v
        }));
    }
    Ok(problem)
}

/// `||grad phi||_2 = |x - x0|` with `phi(x0) = 0`, whose solution
/// `|x - x0|^2 / 2` is smooth.
pub fn smooth_eikonal_problem(
    grid: &Grid2,
    source: [f64; 2],
    circle_samples: usize,
) -> Result<ControlProblem2> {
    let node = grid.nearest_node(source).ok_or_else(|| {
        Error::InvalidProblem(format!("source {source:?} lies outside the domain"))
    })?;
    let running_cost: ScalarFn<2> = Arc::new(move |x| (x[0] - source[0]).hypot(x[1] - source[1]));
    Ok(ControlProblem::new(
        "eikonal-smooth",
        ControlSet::SampledCircle(circle_samples),
        state_free(),
        running_cost,
        vec![BoundaryNode { node, value: 0.0 }],
        Orientation::Min,
    )?
    .state_independent()
    .with_hamiltonian(Arc::new(|_, q| q[0].hypot(q[1])), [1.0, 1.0])
    .with_exact(ExactSolution::new("eikonal-smooth", move |x: &[f64; 2]| {
        ((x[0] - source[0]).powi(2) + (x[1] - source[1]).powi(2)) / 2.0
    })))
}

/// The 3D `p`-norm eikonal equation with a point source. `p = 2` samples the
/// sphere with `sphere` azimuth/inclination counts.
pub fn eikonal3_problem(
    p: EikonalNorm,
    grid: &Grid3,
    source: [f64; 3],
    sphere: (usize, usize),
) -> Result<ControlProblem3> {
    let node = grid.nearest_node(source).ok_or_else(|| {
        Error::InvalidProblem(format!("source {source:?} lies outside the domain"))
    })?;
    let controls = match p {
        EikonalNorm::One => ControlSet::Finite(
            [-1.0, 1.0]
                .iter()
                .flat_map(|&a| {
                    [-1.0, 1.0]
                        .iter()
                        .flat_map(move |&b| [-1.0, 1.0].iter().map(move |&c| vec![a, b, c]))
                })
                .collect(),
        ),
        EikonalNorm::Inf => ControlSet::Finite(
            (0..3)
                .flat_map(|axis| {
                    [1.0, -1.0].into_iter().map(move |s| {
                        let mut a = vec![0.0; 3];
                        a[axis] = s;
                        a
                    })
                })
                .collect(),
        ),
        EikonalNorm::Two => ControlSet::SampledSphere {
            ka: sphere.0,
            kb: sphere.1,
        },
    };
    let hamiltonian = control_hamiltonian(controls.points());
    let name = match p {
        EikonalNorm::One => "eikonal3-1",
        EikonalNorm::Two => "eikonal3-2",
        EikonalNorm::Inf => "eikonal3-inf",
    };
    let problem = ControlProblem::new(
        name,
        controls,
        state_free(),
        Arc::new(|_| 1.0),
        vec![BoundaryNode { node, value: 0.0 }],
        Orientation::Min,
    )?
    .state_independent()
    .with_hamiltonian(hamiltonian, [1.0; 3]);
    let problem = if p == EikonalNorm::One {
        problem.with_initial_value(LARGE_INIT)
    } else {
        problem
    };
    Ok(
        problem.with_exact(ExactSolution::new(name, move |x: &[f64; 3]| {
            let d = [x[0] - source[0], x[1] - source[1], x[2] - source[2]];
            match p {
                EikonalNorm::One => d.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
                EikonalNorm::Two => (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt(),
                EikonalNorm::Inf => d.iter().map(|v| v.abs()).sum(),
            }
        })),
    )
}

/// Visibility from a vantage point among obstacles given by a signed
/// distance `g` (positive inside obstacles). The visible set is
/// `{phi <= 0}`.
pub fn visibility_problem(
    obstacle_sdf: ScalarFn<2>,
    vantage: [f64; 2],
    grid: &Grid2,
) -> Result<ControlProblem2> {
    let [xmin, xmax, ymin, ymax] = grid.bounds();
    if !(vantage[0] > xmin && vantage[0] < xmax && vantage[1] > ymin && vantage[1] < ymax) {
        return Err(Error::InvalidProblem(format!(
            "vantage {vantage:?} must lie strictly inside the domain"
        )));
    }
    let g_star = obstacle_sdf(&vantage);
    if g_star > 0.0 {
        return Err(Error::InvalidProblem(format!(
            "vantage {vantage:?} lies inside an obstacle (g = {g_star})"
        )));
    }
    let node = grid
        .nearest_node(vantage)
        .expect("vantage is inside the domain");
    let dynamics: Dynamics<2> = Arc::new(move |x, _| [vantage[0] - x[0], vantage[1] - x[1]]);
    Ok(ControlProblem::new(
        "visibility",
        ControlSet::Finite(vec![vec![0.0]]),
        dynamics,
        Arc::new(|_| 0.0),
        vec![BoundaryNode {
            node,
            value: g_star,
        }],
        Orientation::Max,
    )?
    .with_floor(obstacle_sdf))
}

/// Parameters of the simple car: maximal angular velocity `w`, distance
/// `d` from the rear axle to the center of mass, and the target
/// configuration `(x, y, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarParams {
    pub w: f64,
    pub d: f64,
    pub target: [f64; 3],
}

impl Default for CarParams {
    fn default() -> Self {
        Self {
            w: 1.0,
            d: 0.1,
            target: [0.5, 0.5, 0.0],
        }
    }
}

impl CarParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.w > 0.0) {
            return Err(Error::InvalidProblem(format!(
                "maximal angular velocity must be positive, got {}",
                self.w
            )));
        }
        if !(self.d >= 0.0) {
            return Err(Error::InvalidProblem(format!(
                "axle offset must be non-negative, got {}",
                self.d
            )));
        }
        Ok(())
    }

    /// Car kinematics in state `(x, y, theta)` under control `(v, omega)`.
    pub fn velocity(&self, state: &[f64; 3], v: f64, omega: f64) -> [f64; 3] {
        let (s, c) = state[2].sin_cos();
        let wd = omega * self.w * self.d;
        [v * c - wd * s, v * s + wd * c, self.w * omega]
    }
}

/// Minimal-time planning for the simple car on a grid whose third axis is
/// the periodic heading.
pub fn car_problem(params: CarParams, grid: &Grid3) -> Result<ControlProblem3> {
    params.validate()?;
    if !grid.periodic_z() {
        return Err(Error::InvalidProblem(
            "the heading axis of the car grid must be periodic".into(),
        ));
    }
    let node = grid.nearest_node(params.target).ok_or_else(|| {
        Error::InvalidProblem(format!(
            "target {:?} lies outside the domain",
            params.target
        ))
    })?;
    let mut controls = Vec::with_capacity(6);
    for v in [-1.0, 1.0] {
        for omega in [-1.0, 0.0, 1.0] {
            controls.push(vec![v, omega]);
        }
    }
    let dynamics: Dynamics<3> = Arc::new(move |x, a| params.velocity(x, a[0], a[1]));
    let (w, wd) = (params.w, params.w * params.d);
    let hamiltonian: Hamiltonian<3> = Arc::new(move |x, p| {
        let (s, c) = x[2].sin_cos();
        (p[0] * c + p[1] * s).abs() + (-wd * p[0] * s + wd * p[1] * c + w * p[2]).abs()
    });
    let sigma_xy = 1.0f64.hypot(wd);
    Ok(ControlProblem::new(
        "car",
        ControlSet::Finite(controls),
        dynamics,
        Arc::new(|_| 1.0),
        vec![BoundaryNode { node, value: 0.0 }],
        Orientation::Min,
    )?
    .dynamics_along(2)?
    .with_hamiltonian(hamiltonian, [sigma_xy, sigma_xy, w])
    .with_initial_value(CAR_INIT))
}

/// Starting value for the car. Travel times on the domain stay well below
/// it, and a smaller value settles the sweeps a little sooner than
/// [`LARGE_INIT`].
pub const CAR_INIT: f64 = 1e3;

/// Components of `(f1, f2)` in the frame rotated counterclockwise by `beta`.
pub fn rotate_coefficients(f1: f64, f2: f64, beta: f64) -> (f64, f64) {
    let (s, c) = beta.sin_cos();
    (c * f1 + s * f2, c * f2 - s * f1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn grid() -> Grid2 {
        Grid2::unit_square(20, 1).unwrap()
    }

    #[test]
    fn rotate_examples() {
        let (a, b) = rotate_coefficients(1.0, 1.0, FRAC_PI_4);
        assert!((a - SQRT_2).abs() < 1e-15 && b.abs() < 1e-15);
        let (a, b) = rotate_coefficients(1.0, -1.0, FRAC_PI_4);
        assert!(a.abs() < 1e-15 && (b + SQRT_2).abs() < 1e-15);
        assert_eq!(rotate_coefficients(0.3, -2.0, 0.0), (0.3, -2.0));
    }

    #[test]
    fn eikonal_control_sets() {
        let g = grid();
        let p1 =
            eikonal_problem(EikonalNorm::One, Speed::Uniform(1.0), &g, [0.0, 0.0], 400).unwrap();
        assert_eq!(p1.control_points().len(), 4);
        assert_eq!(p1.boundary()[0].node, [10, 10]);
        let pinf =
            eikonal_problem(EikonalNorm::Inf, Speed::Uniform(1.0), &g, [0.0, 0.0], 400).unwrap();
        assert!(pinf.control_points().iter().all(|a| a[0] * a[1] == 0.0));
        let p2 =
            eikonal_problem(EikonalNorm::Two, Speed::Uniform(1.0), &g, [0.0, 0.0], 400).unwrap();
        assert_eq!(p2.control_points().len(), 400);
        let exact = p2.exact().unwrap();
        assert_eq!(exact.eval(&[3.0, 4.0]), 5.0);
        assert_eq!(p1.exact().unwrap().eval(&[3.0, -4.0]), 4.0);
        assert_eq!(pinf.exact().unwrap().eval(&[3.0, -4.0]), 7.0);
    }

    #[test]
    fn eikonal_rejects_bad_input() {
        let g = grid();
        assert!(
            eikonal_problem(EikonalNorm::Two, Speed::Uniform(0.0), &g, [0.0, 0.0], 400).is_err()
        );
        let slow: ScalarFn<2> = Arc::new(|x| if x[0] > 0.5 { -1.0 } else { 1.0 });
        assert!(
            eikonal_problem(EikonalNorm::Two, Speed::Field(slow), &g, [0.0, 0.0], 400).is_err()
        );
        assert!(
            eikonal_problem(EikonalNorm::Two, Speed::Uniform(1.0), &g, [2.0, 0.0], 400).is_err()
        );
        assert!(eikonal_problem(EikonalNorm::Two, Speed::Uniform(1.0), &g, [0.0, 0.0], 3).is_err());
    }

    #[test]
    fn smooth_exact_solution() {
        let p = smooth_eikonal_problem(&grid(), [0.0, 0.0], 400).unwrap();
        let e = p.exact().unwrap();
        assert_eq!(e.eval(&[1.0, 0.0]), 0.5);
        assert_eq!(e.eval(&[0.0, 0.0]), 0.0);
        assert!((e.eval(&[0.6, 0.8]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn car_controls_and_dynamics() {
        let g = Grid3::car_domain(10, 1).unwrap();
        let params = CarParams {
            w: 1.5,
            d: 0.2,
            target: [0.5, 0.5, 0.0],
        };
        let p = car_problem(params, &g).unwrap();
        assert_eq!(p.control_points().len(), 6);
        let fwd = p
            .control_points()
            .iter()
            .position(|a| a == &[1.0, 0.0])
            .unwrap();
        assert_eq!(p.dynamics(&[0.1, 0.2, 0.0], fwd), [1.0, 0.0, 0.0]);
        let turn = p
            .control_points()
            .iter()
            .position(|a| a == &[1.0, 1.0])
            .unwrap();
        let f = p.dynamics(&[0.1, 0.2, 0.0], turn);
        assert!((f[0] - 1.0).abs() < 1e-15);
        assert!((f[1] - 1.5 * 0.2).abs() < 1e-15);
        assert_eq!(f[2], 1.5);
        assert!(car_problem(CarParams { w: 0.0, ..params }, &g).is_err());
        let flat = Grid3::unit_cube(10, 1).unwrap();
        assert!(car_problem(params, &flat).is_err());
    }

    #[test]
    fn visibility_setup() {
        let g = grid();
        let p = visibility_problem(Arc::new(|_| -1.0), [0.0, 0.0], &g).unwrap();
        assert_eq!(p.orientation(), Orientation::Max);
        assert_eq!(p.boundary()[0].value, -1.0);
        assert_eq!(p.dynamics(&[0.5, -0.25], 0), [-0.5, 0.25]);
        let disk: ScalarFn<2> = Arc::new(|x| 0.2 - x[0].hypot(x[1]));
        assert!(visibility_problem(disk, [0.0, 0.0], &g).is_err());
        assert!(visibility_problem(Arc::new(|_| -1.0), [1.0, 0.0], &g).is_err());
    }

    #[test]
    fn control_set_validation() {
        assert!(ControlSet::Finite(vec![]).validate().is_err());
        assert!(ControlSet::Finite(vec![vec![1.0], vec![1.0]])
            .validate()
            .is_err());
        assert!(ControlSet::SampledCircle(3).validate().is_err());
        let s = ControlSet::SampledSphere { ka: 8, kb: 4 }.points();
        assert_eq!(s.len(), 8 * 4 + 2);
        for a in s {
            assert!((a.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    /// Dual-norm exact solutions satisfy the eikonal equation away from
    /// their kinks, checked with central differences.
    #[test]
    fn exact_solutions_solve_the_equation() {
        let h = 1e-5;
        let pts = [[0.3, 0.7], [-0.61, 0.2], [0.45, -0.12], [-0.8, -0.33]];
        for p in [EikonalNorm::One, EikonalNorm::Two, EikonalNorm::Inf] {
            for x in pts {
                let phi = |x: [f64; 2]| exact_eikonal(p, &x);
                let gx = (phi([x[0] + h, x[1]]) - phi([x[0] - h, x[1]])) / (2.0 * h);
                let gy = (phi([x[0], x[1] + h]) - phi([x[0], x[1] - h])) / (2.0 * h);
                let norm = match p {
                    EikonalNorm::One => gx.abs() + gy.abs(),
                    EikonalNorm::Two => gx.hypot(gy),
                    EikonalNorm::Inf => gx.abs().max(gy.abs()),
                };
                assert!((norm - 1.0).abs() < 1e-6, "{p:?} at {x:?}: {norm}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn rotation_preserves_norm(f1 in -10.0f64..10.0, f2 in -10.0f64..10.0, b in -3.2f64..3.2) {
            let (g1, g2) = rotate_coefficients(f1, f2, b);
            prop_assert!((g1.hypot(g2) - f1.hypot(f2)).abs() <= 1e-14 * f1.hypot(f2).max(1.0));
        }

        #[test]
        fn car_speed_is_heading_independent(theta in 0.0f64..TAU, v in prop::sample::select(vec![-1.0, 1.0]),
                                            omega in prop::sample::select(vec![-1.0, 0.0, 1.0])) {
            let params = CarParams { w: 1.3, d: 0.25, target: [0.0; 3] };
            let f = params.velocity(&[0.0, 0.0, theta], v, omega);
            let expected = v * v + (omega * 1.3 * 0.25f64).powi(2) + (omega * 1.3f64).powi(2);
            prop_assert!((f.iter().map(|c| c * c).sum::<f64>() - expected).abs() < 1e-13);
        }
    }
}
