//! Dimension-generic Gauss-Seidel machinery shared by the 2D and 3D
//! solvers: padded storage, sweep orderings, upwind stencil frames and the
//! per-node candidate minimization.

use std::collections::BTreeMap;

use crate::grid::Orientation;
use crate::problem::ControlProblem;

/// Padded storage layout. Periodic axes carry image layers in place of
/// ghosts so that every stencil read is a fixed flat offset.
#[derive(Debug, Clone)]
pub(crate) struct Lattice<const D: usize> {
    /// Cells per axis.
    pub n: [usize; D],
    /// Distinct node count per axis (`n` on a periodic axis, else `n + 1`).
    pub m: [usize; D],
    pub ghost: usize,
    pub strides: [isize; D],
    pub lo: [f64; D],
    pub h: [f64; D],
    pub periodic: [bool; D],
    /// Whether sweeps also update the outermost nodes of non-periodic axes.
    pub sweep_frame: bool,
    pub len: usize,
}

impl<const D: usize> Lattice<D> {
    pub fn new(
        n: [usize; D],
        lo: [f64; D],
        h: [f64; D],
        ghost: usize,
        periodic: [bool; D],
    ) -> Self {
        let m: [usize; D] = std::array::from_fn(|a| if periodic[a] { n[a] } else { n[a] + 1 });
        let dims: [usize; D] = std::array::from_fn(|a| m[a] + 2 * ghost);
        let mut strides = [0isize; D];
        let mut s = 1isize;
        for a in (0..D).rev() {
            strides[a] = s;
            s *= dims[a] as isize;
        }
        Self {
            n,
            m,
            ghost,
            strides,
            lo,
            h,
            periodic,
            sweep_frame: false,
            len: s as usize,
        }
    }

    pub fn with_frame(mut self, sweep_frame: bool) -> Self {
        self.sweep_frame = sweep_frame;
        self
    }

    #[inline]
    pub fn flat(&self, idx: [usize; D]) -> usize {
        let g = self.ghost as isize;
        let mut f = 0isize;
        for a in 0..D {
            f += (idx[a] as isize + g) * self.strides[a];
        }
        f as usize
    }

    #[inline]
    pub fn offset(&self, step: [isize; D]) -> isize {
        (0..D).map(|a| step[a] * self.strides[a]).sum()
    }

    #[inline]
    pub fn coord(&self, idx: [usize; D]) -> [f64; D] {
        std::array::from_fn(|a| self.lo[a] + idx[a] as f64 * self.h[a])
    }

    /// Inclusive index range a sweep visits along `axis`: interior nodes,
    /// or every node when the axis is periodic or the frame is swept.
    pub fn range(&self, axis: usize) -> (usize, usize) {
        if self.periodic[axis] || self.sweep_frame {
            (0, self.m[axis] - 1)
        } else {
            (1, self.n[axis] - 1)
        }
    }

    /// Visits every swept node in the ordering given by `reverse`, axis 0
    /// outermost.
    pub fn for_each(&self, reverse: [bool; D], mut f: impl FnMut([usize; D], usize)) {
        let ranges: [(usize, usize); D] = std::array::from_fn(|a| self.range(a));
        let start: [usize; D] =
            std::array::from_fn(|a| if reverse[a] { ranges[a].1 } else { ranges[a].0 });
        let mut idx = start;
        loop {
            f(idx, self.flat(idx));
            let mut a = D;
            loop {
                if a == 0 {
                    return;
                }
                a -= 1;
                let (lo, hi) = ranges[a];
                if reverse[a] {
                    if idx[a] > lo {
                        idx[a] -= 1;
                        break;
                    }
                } else if idx[a] < hi {
                    idx[a] += 1;
                    break;
                }
                idx[a] = start[a];
            }
        }
    }

    /// Every stored node (not ghosts), in storage order.
    pub fn for_each_node(&self, mut f: impl FnMut([usize; D], usize)) {
        let mut idx = [0usize; D];
        loop {
            f(idx, self.flat(idx));
            let mut a = D;
            loop {
                if a == 0 {
                    return;
                }
                a -= 1;
                if idx[a] + 1 < self.m[a] {
                    idx[a] += 1;
                    break;
                }
                idx[a] = 0;
            }
        }
    }

    /// Writes `v` at a node and at its periodic images.
    #[inline]
    pub fn write(&self, values: &mut [f64], idx: [usize; D], flat: usize, v: f64) {
        values[flat] = v;
        for a in 0..D {
            if self.periodic[a] {
                let span = self.m[a] as isize * self.strides[a];
                if idx[a] < self.ghost {
                    values[(flat as isize + span) as usize] = v;
                }
                if idx[a] + self.ghost >= self.m[a] {
                    values[(flat as isize - span) as usize] = v;
                }
            }
        }
    }
}

/// The `2^D` sweep orderings, a reflected Gray code with the last axis
/// toggling fastest. In 2D: `(+,+)`, `(+,-)`, `(-,-)`, `(-,+)`.
pub(crate) fn sweep_orders<const D: usize>() -> Vec<[bool; D]> {
    (0..1usize << D)
        .map(|n| {
            let g = n ^ (n >> 1);
            std::array::from_fn(|a| (g >> (D - 1 - a)) & 1 == 1)
        })
        .collect()
}

/// An orthogonal set of lattice directions with unit vectors for projecting
/// the dynamics and the physical length of one step along each.
#[derive(Debug, Clone)]
pub(crate) struct Frame<const D: usize> {
    pub axes: [[isize; D]; D],
    pub unit: [[f64; D]; D],
    pub ds: [f64; D],
}

impl<const D: usize> Frame<D> {
    pub fn axis_aligned(h: [f64; D]) -> Self {
        Self {
            axes: std::array::from_fn(|a| std::array::from_fn(|b| (a == b) as isize)),
            unit: std::array::from_fn(|a| std::array::from_fn(|b| (a == b) as u8 as f64)),
            ds: h,
        }
    }

    pub fn reach(&self) -> usize {
        self.axes
            .iter()
            .flat_map(|u| u.iter().map(|c| c.unsigned_abs()))
            .max()
            .unwrap_or(0)
    }

    /// Projected dynamics along each axis.
    #[inline]
    pub fn project(&self, f: &[f64; D]) -> [f64; D] {
        std::array::from_fn(|l| {
            let u = &self.unit[l];
            let mut s = 0.0;
            for a in 0..D {
                s += u[a] * f[a];
            }
            s
        })
    }

    /// Weights `|fbar| / ds` and upwind step signs for dynamics `f`.
    #[inline]
    pub fn weights(&self, f: &[f64; D]) -> ([f64; D], [i8; D]) {
        let fb = self.project(f);
        let mut w = [0.0; D];
        let mut s = [0i8; D];
        for l in 0..D {
            if fb[l] != 0.0 {
                w[l] = fb[l].abs() / self.ds[l];
                s[l] = if fb[l] > 0.0 { 1 } else { -1 };
            }
        }
        (w, s)
    }

    /// Lattice step of the upwind neighbor along axis `l`.
    #[inline]
    pub fn step(&self, l: usize, sign: i8) -> [isize; D] {
        std::array::from_fn(|a| self.axes[l][a] * sign as isize)
    }
}

/// The upwind candidate `(r + sum w phi) / sum w`, or `None` for degenerate
/// dynamics or a non-finite neighbor read.
#[inline]
pub(crate) fn frame_candidate<const D: usize>(
    frame: &Frame<D>,
    f: &[f64; D],
    r: f64,
    read: impl Fn([isize; D]) -> f64,
) -> Option<f64> {
    let (w, s) = frame.weights(f);
    let mut num = r;
    let mut den = 0.0;
    for l in 0..D {
        if s[l] != 0 {
            let v = read(frame.step(l, s[l]));
            if !v.is_finite() {
                return None;
            }
            num += w[l] * v;
            den += w[l];
        }
    }
    (den > 0.0).then(|| num / den)
}

/// Controls of one frame that share an upwind neighbor set, so the
/// neighbors are read once and the candidates evaluated in a tight loop.
#[derive(Debug, Clone)]
pub(crate) struct Group {
    pub offsets: Vec<isize>,
    /// Row-major `controls x offsets.len()` weights.
    pub w: Vec<f64>,
    pub den: Vec<f64>,
}

pub(crate) fn build_groups<const D: usize>(
    lat: &Lattice<D>,
    frame: &Frame<D>,
    forces: &[[f64; D]],
) -> Vec<Group> {
    let mut by_sign: BTreeMap<[i8; D], Group> = BTreeMap::new();
    for f in forces {
        let (w, s) = frame.weights(f);
        if s.iter().all(|&v| v == 0) {
            continue;
        }
        let g = by_sign.entry(s).or_insert_with(|| Group {
            offsets: (0..D)
                .filter(|&l| s[l] != 0)
                .map(|l| lat.offset(frame.step(l, s[l])))
                .collect(),
            w: Vec::new(),
            den: Vec::new(),
        });
        let mut den = 0.0;
        for l in 0..D {
            if s[l] != 0 {
                g.w.push(w[l]);
                den += w[l];
            }
        }
        g.den.push(den);
    }
    by_sign.into_values().collect()
}

/// Extremum over one group's candidates at flat node `n`; `None` when a
/// neighbor is non-finite.
#[inline]
pub(crate) fn group_best(
    g: &Group,
    values: &[f64],
    n: usize,
    r: f64,
    orient: Orientation,
) -> Option<f64> {
    let k = g.offsets.len();
    let mut nb = [0.0f64; 4];
    for (t, &o) in g.offsets.iter().enumerate() {
        let v = values[(n as isize + o) as usize];
        if !v.is_finite() {
            return None;
        }
        nb[t] = v;
    }
    let mut best = orient.sentinel();
    match (k, orient) {
        (1, Orientation::Min) => {
            for (w, d) in g.w.iter().zip(&g.den) {
                best = best.min((r + w * nb[0]) / d);
            }
        }
        (2, Orientation::Min) => {
            for (w, d) in g.w.chunks_exact(2).zip(&g.den) {
                best = best.min((r + w[0] * nb[0] + w[1] * nb[1]) / d);
            }
        }
        (3, Orientation::Min) => {
            for (w, d) in g.w.chunks_exact(3).zip(&g.den) {
                best = best.min((r + w[0] * nb[0] + w[1] * nb[1] + w[2] * nb[2]) / d);
            }
        }
        _ => {
            for (w, d) in g.w.chunks_exact(k).zip(&g.den) {
                let mut num = r;
                for t in 0..k {
                    num += w[t] * nb[t];
                }
                best = orient.better(num / d, best);
            }
        }
    }
    Some(best)
}

/// Solver state for one control problem on one lattice.
pub(crate) struct Engine<'p, const D: usize> {
    pub lat: Lattice<D>,
    pub problem: &'p ControlProblem<D>,
    pub values: Vec<f64>,
    pub r: Vec<f64>,
    pub floor: Option<Vec<f64>>,
    pub frozen: Vec<bool>,
    pub frames: Vec<Frame<D>>,
    /// Candidate groups indexed by slice and frame, present when the
    /// dynamics are tabulated: one slice for state-independent dynamics, or
    /// one per node along the axis they depend on.
    pub groups: Option<Vec<Vec<Vec<Group>>>>,
    pub slice_axis: Option<usize>,
    pub orient: Orientation,
}

impl<'p, const D: usize> Engine<'p, D> {
    /// Sets up storage with boundary data applied and every other node,
    /// ghosts included, at the problem's initial value or else the
    /// orientation's sentinel.
    pub fn new(lat: Lattice<D>, problem: &'p ControlProblem<D>, frames: Vec<Frame<D>>) -> Self {
        let orient = problem.orientation();
        let mut r = vec![0.0; lat.len];
        let mut floor = problem
            .floor(&lat.lo)
            .map(|_| vec![orient.sentinel(); lat.len]);
        lat.for_each_node(|idx, n| {
            let x = lat.coord(idx);
            r[n] = problem.running_cost(&x);
            if let Some(fl) = floor.as_mut() {
                fl[n] = problem.floor(&x).unwrap();
            }
        });
        let mut values = vec![problem.initial_value().unwrap_or(orient.sentinel()); lat.len];
        let mut frozen = vec![false; lat.len];
        for b in problem.boundary() {
            let n = lat.flat(b.node);
            frozen[n] = true;
            lat.write(&mut values, b.node, n, b.value);
        }
        let slice_axis = if problem.is_state_independent() {
            None
        } else {
            problem.dynamics_axis()
        };
        let tabulated = problem.is_state_independent() || slice_axis.is_some();
        let groups = tabulated.then(|| {
            let slices = slice_axis.map_or(1, |a| lat.m[a]);
            (0..slices)
                .map(|k| {
                    let mut x = lat.lo;
                    if let Some(a) = slice_axis {
                        x[a] += k as f64 * lat.h[a];
                    }
                    let forces: Vec<[f64; D]> = (0..problem.control_points().len())
                        .map(|c| problem.dynamics(&x, c))
                        .collect();
                    frames
                        .iter()
                        .map(|fr| build_groups(&lat, fr, &forces))
                        .collect()
                })
                .collect()
        });
        Self {
            lat,
            problem,
            values,
            r,
            floor,
            frozen,
            frames,
            groups,
            slice_axis,
            orient,
        }
    }

    /// Extremum over all controls and the given frames at a node; the
    /// sentinel when no candidate exists.
    pub fn best_candidate(&self, idx: [usize; D], n: usize, frames: &[usize]) -> f64 {
        let r = self.r[n];
        let mut best = self.orient.sentinel();
        if let Some(groups) = &self.groups {
            let groups = &groups[self.slice_axis.map_or(0, |a| idx[a])];
            for &fi in frames {
                for g in &groups[fi] {
                    if let Some(c) = group_best(g, &self.values, n, r, self.orient) {
                        best = self.orient.better(c, best);
                    }
                }
            }
        } else {
            let x = self.lat.coord(idx);
            let read = |s: [isize; D]| self.values[(n as isize + self.lat.offset(s)) as usize];
            for c in 0..self.problem.control_points().len() {
                let f = self.problem.dynamics(&x, c);
                for &fi in frames {
                    if let Some(v) = frame_candidate(&self.frames[fi], &f, r, read) {
                        best = self.orient.better(v, best);
                    }
                }
            }
        }
        best
    }

    /// Combines a candidate with the current value and the floor, then
    /// stores it.
    #[inline]
    pub fn commit(&mut self, idx: [usize; D], n: usize, candidate: f64) {
        let mut v = self.orient.better(candidate, self.values[n]);
        if let Some(fl) = &self.floor {
            v = self.orient.better(fl[n], v);
        }
        if v != self.values[n] {
            self.lat.write(&mut self.values, idx, n, v);
        }
    }

    /// One full pass of `2^D` sweeps with the given frames.
    pub fn pass(&mut self, frames: &[usize]) {
        for order in sweep_orders::<D>() {
            let lat = self.lat.clone();
            lat.for_each(order, |idx, n| {
                if self.frozen[n] {
                    return;
                }
                let c = self.best_candidate(idx, n, frames);
                self.commit(idx, n, c);
            });
        }
    }

    /// Max change over swept, non-frozen nodes. A change between a sentinel
    /// and a finite value counts as infinite.
    pub fn residual(&self, prev: &[f64]) -> f64 {
        let mut res = 0.0f64;
        self.lat.for_each([false; D], |_, n| {
            if self.frozen[n] {
                return;
            }
            let (a, b) = (self.values[n], prev[n]);
            if a != b {
                res = res.max((a - b).abs());
            }
        });
        if res.is_nan() {
            f64::INFINITY
        } else {
            res
        }
    }

    /// Reads a stored node value, for copying results out.
    pub fn value(&self, idx: [usize; D]) -> f64 {
        self.values[self.lat.flat(idx)]
    }
}
