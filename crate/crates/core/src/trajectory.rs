//! Optimal paths for the simple car, integrated from a solved travel-time
//! field.

use crate::error::{Error, Result};
use crate::grid::Field3;
use crate::problem::CarParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub v: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub dt: f64,
    pub reached: bool,
}

impl Trajectory {
    /// Time of the last sample.
    pub fn duration(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }
}

/// Trilinear interpolation with a periodic third axis when the grid has
/// one.
pub fn interpolate(field: &Field3, p: [f64; 3]) -> Result<f64> {
    let g = field.grid();
    let b = g.bounds();
    let h = g.spacing();
    let n = g.cells();
    let mut base = [0isize; 3];
    let mut frac = [0.0; 3];
    for a in 0..3 {
        let s = (p[a] - b[2 * a]) / h[a];
        if a == 2 && g.periodic_z() {
            let s = s.rem_euclid(n[2] as f64);
            base[a] = (s.floor() as isize).min(n[2] as isize - 1);
            frac[a] = s - base[a] as f64;
        } else {
            if !(s >= 0.0 && s <= n[a] as f64) {
                return Err(Error::Trajectory(format!(
                    "point {p:?} lies outside the grid"
                )));
            }
            base[a] = (s.floor() as isize).min(n[a] as isize - 1);
            frac[a] = s - base[a] as f64;
        }
    }
    let mut acc = 0.0;
    for corner in 0..8 {
        let o = [corner & 1, (corner >> 1) & 1, (corner >> 2) & 1];
        let v = field.get_signed(
            base[0] + o[0] as isize,
            base[1] + o[1] as isize,
            base[2] + o[2] as isize,
        );
        let w: f64 = (0..3)
            .map(|a| if o[a] == 1 { frac[a] } else { 1.0 - frac[a] })
            .product();
        if w == 0.0 {
            continue;
        }
        if !v.is_finite() {
            return Err(Error::Trajectory(format!(
                "point {p:?} touches an unresolved node"
            )));
        }
        acc += w * v;
    }
    Ok(acc)
}

/// Central differences of the interpolated field with one-cell steps.
pub fn sample_gradient(field: &Field3, point: [f64; 3]) -> Result<[f64; 3]> {
    let h = field.grid().spacing();
    let mut grad = [0.0; 3];
    for a in 0..3 {
        let mut hi = point;
        let mut lo = point;
        hi[a] += h[a];
        lo[a] -= h[a];
        grad[a] = (interpolate(field, hi)? - interpolate(field, lo)?) / (2.0 * h[a]);
    }
    Ok(grad)
}

const SWITCH_TIE: f64 = 1e-12;

/// Bang-bang controls `(v, omega)` minimizing the Hamiltonian at `state`.
/// Ties go to `v = 1` and `omega = 0`.
pub fn car_controls(state: [f64; 3], grad: [f64; 3], params: &CarParams) -> (f64, f64) {
    let (s, c) = state[2].sin_cos();
    let sv = grad[0] * c + grad[1] * s;
    let sw = params.d * (-grad[0] * s + grad[1] * c) + grad[2];
    let v = if sv.abs() <= SWITCH_TIE || sv < 0.0 {
        1.0
    } else {
        -1.0
    };
    let omega = if sw.abs() <= SWITCH_TIE {
        0.0
    } else if sw > 0.0 {
        -1.0
    } else {
        1.0
    };
    (v, omega)
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

/// Integrates the car kinematics with explicit midpoint steps, choosing
/// controls from the field's gradient, until the state is within two cells
/// of the target or `t_max` elapses.
pub fn extract_trajectory(
    field: &Field3,
    start: [f64; 3],
    params: &CarParams,
    dt: f64,
    t_max: f64,
) -> Result<Trajectory> {
    params.validate()?;
    if !(dt > 0.0) || !(t_max >= 0.0) {
        return Err(Error::Trajectory(format!(
            "invalid step {dt} or horizon {t_max}"
        )));
    }
    let g = field.grid();
    let b = g.bounds();
    let h = g.spacing();
    if !(start[0] >= b[0] && start[0] <= b[1] && start[1] >= b[2] && start[1] <= b[3]) {
        return Err(Error::Trajectory(format!(
            "start {start:?} lies outside the domain"
        )));
    }
    let rho = 2.0 * h[0].max(h[1]);
    let rho_theta = 2.0 * h[2];
    let target = params.target;
    let arrived = |s: [f64; 3]| {
        (s[0] - target[0]).hypot(s[1] - target[1]) <= rho && angle_gap(s[2], target[2]) <= rho_theta
    };
    let controls = |s: [f64; 3]| -> Result<(f64, f64)> {
        let grad = sample_gradient(field, s).map_err(|e| {
            Error::Trajectory(format!("path left the resolved region at {s:?}: {e}"))
        })?;
        Ok(car_controls(s, grad, params))
    };

    let mut samples = Vec::new();
    let mut s = start;
    let mut t = 0.0;
    let steps = (t_max / dt).ceil() as usize;
    for step in 0..=steps {
        if arrived(s) {
            // the final sample repeats the last applied controls
            let (v, omega) = samples
                .last()
                .map_or((1.0, 0.0), |p: &TrajectorySample| (p.v, p.omega));
            samples.push(TrajectorySample {
                t,
                x: s[0],
                y: s[1],
                theta: s[2],
                v,
                omega,
            });
            return Ok(Trajectory {
                samples,
                dt,
                reached: true,
            });
        }
        let (v, omega) = controls(s)?;
        samples.push(TrajectorySample {
            t,
            x: s[0],
            y: s[1],
            theta: s[2],
            v,
            omega,
        });
        if step == steps {
            break;
        }
        let f0 = params.velocity(&s, v, omega);
        let mid = [
            s[0] + 0.5 * dt * f0[0],
            s[1] + 0.5 * dt * f0[1],
            s[2] + 0.5 * dt * f0[2],
        ];
        let (vm, wm) = controls(mid)?;
        let f1 = params.velocity(&mid, vm, wm);
        s = [
            s[0] + dt * f1[0],
            s[1] + dt * f1[1],
            (s[2] + dt * f1[2]).rem_euclid(std::f64::consts::TAU),
        ];
        t = (step + 1) as f64 * dt;
    }
    Ok(Trajectory {
        samples,
        dt,
        reached: false,
    })
}
