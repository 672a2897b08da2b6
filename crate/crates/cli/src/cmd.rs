//! Argument definitions and subcommand dispatch.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hjsweep::{
    car_problem, convergence_table, corner_rotations, edge_rotations, eikonal3_problem,
    eikonal_problem, enumerate_rotations, error_norms, error_norms3, extract_trajectory, lf_solve,
    lf_solve3, rotation3_from_triple, smooth_eikonal_problem, sweep_solve, sweep_solve3,
    visibility_problem, CarParams, ControlProblem2, EikonalNorm, Field3, Grid2, Grid3, LfConfig,
    RotationDir2, RotationDir3, RotationMode, Scheme, SolveResult2, SolveResult3, SolverConfig,
    SolverConfig3, Speed,
};

use crate::io;

#[derive(Debug, Parser)]
#[command(
    name = "hjsweep",
    version,
    about = "Fast sweeping solvers for steady HJB equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write the field.
    Solve(SolveArgs),
    /// Tabulate errors and observed orders over a ladder of grids.
    Converge(ConvergeArgs),
    /// Solve the car problem and integrate an optimal path.
    Trajectory(TrajectoryArgs),
    /// Compute the visibility function and mask for disk obstacles.
    Visibility(VisibilityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    /// `||grad phi||_p = 1` on `[-1, 1]^2`.
    Eikonal,
    /// `||grad phi||_2 = |x|` on `[-1, 1]^2`, smooth solution.
    Smooth,
    /// `||grad phi||_p = 1` on `[-1, 1]^3`.
    Eikonal3,
    /// Time-optimal simple car on `[-1, 1]^2 x [0, 2pi)`.
    Car,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    Basic,
    Rotated,
    Weno,
    Lf,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value = "basic")]
    pub scheme: SchemeKind,
    /// Convergence tolerance; defaults to 1e-8, or 1e-4 for the car.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    /// Explicit rotations as `i,j` pairs, e.g. "1,1;2,1;1,2".
    #[arg(long)]
    pub rotations: Option<String>,
    /// Use every rotation with components up to M.
    #[arg(long, value_name = "M")]
    pub max_rot: Option<usize>,
    /// Draw this many rotations from the pool in each iteration.
    #[arg(long, value_name = "K")]
    pub rand_rot: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// 3D rotations: "edges", "corners", "corner", or entries such as
    /// "z:1,1", "y:1,1", "x:1,1", "g:1,-1,1", separated by ';'.
    #[arg(long)]
    pub rot3: Option<String>,
    /// Keep the grid boundary nodes at their initial value instead of
    /// sweeping them.
    #[arg(long)]
    pub interior_only: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum, default_value = "eikonal")]
    pub problem: ProblemKind,
    /// Norm of the eikonal equation: 1, 2 or inf.
    #[arg(long, default_value = "2")]
    pub p: EikonalNorm,
    /// Control samples on the unit circle for p = 2.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    /// Azimuth and inclination counts on the sphere for 3D p = 2.
    #[arg(long, default_value = "40,20")]
    pub sphere: String,
    /// Point source, "x,y" or "x,y,z".
    #[arg(long)]
    pub source: Option<String>,
    #[command(flatten)]
    pub car: CarArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CarArgs {
    /// Maximum turning rate of the car.
    #[arg(long, default_value_t = CarParams::default().w)]
    pub w: f64,
    /// Distance from the rear axle to the center of mass.
    #[arg(long, default_value_t = CarParams::default().d)]
    pub d: f64,
    /// Final configuration "x,y,theta".
    #[arg(long, default_value = "0.5,0.5,0")]
    pub target: String,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Cells per axis.
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    /// Cells along y when different from --grid (2D problems only).
    #[arg(long)]
    pub grid_y: Option<usize>,
    /// Field output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// For 3D problems, write only the slice nearest this third coordinate.
    #[arg(long)]
    pub slice_theta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Strictly increasing cell counts, e.g. "50,100,200,400".
    #[arg(long, default_value = "50,100,200,400")]
    pub grids: String,
    /// Also write the table to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub car: CarArgs,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    /// Initial configuration "x,y,theta".
    #[arg(long, allow_hyphen_values = true)]
    pub start: String,
    /// Integration step; defaults to half a cell.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    /// Path output file (CSV).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the solved travel-time field.
    #[arg(long)]
    pub field_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VisibilityArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    /// Vantage point "x,y".
    #[arg(long, allow_hyphen_values = true)]
    pub vantage: String,
    /// Disk obstacle "cx,cy,r"; repeat for several.
    #[arg(long = "disk", allow_hyphen_values = true)]
    pub disks: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Visibility mask output (1 = visible).
    #[arg(long)]
    pub mask: Option<PathBuf>,
}

/// What a finished command reports back to `main`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    NotConverged,
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .with_context(|| format!("{what}: '{t}' is not a number"))
        })
        .collect()
}

fn parse_point<const N: usize>(s: &str, flag: &str) -> Result<[f64; N]> {
    let v = parse_list(s, flag)?;
    ensure!(
        v.len() == N,
        "{flag} expects {N} comma-separated numbers, got '{s}'"
    );
    Ok(std::array::from_fn(|a| v[a]))
}

fn parse_pairs(s: &str) -> Result<Vec<(i64, i64)>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v: Vec<&str> = t.split(',').map(str::trim).collect();
            ensure!(v.len() == 2, "--rotations: '{t}' is not an 'i,j' pair");
            let a = v[0]
                .parse()
                .with_context(|| format!("--rotations: bad component '{}'", v[0]))?;
            let b = v[1]
                .parse()
                .with_context(|| format!("--rotations: bad component '{}'", v[1]))?;
            Ok((a, b))
        })
        .collect()
}

fn sci(v: f64) -> String {
    let s = format!("{v:.4e}");
    let (m, e) = s.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap();
    format!("{m}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

fn default_tol(problem: ProblemKind) -> f64 {
    if problem == ProblemKind::Car {
        SolverConfig3::car().tol
    } else {
        SolverConfig::default().tol
    }
}

fn check_tol(tol: f64) -> Result<f64> {
    ensure!(
        tol > 0.0 && tol.is_finite(),
        "--tol must be positive, got {tol}"
    );
    Ok(tol)
}

/// The 2D solver configuration described by the flags.
pub fn solver_config(s: &SchemeArgs, grid: &Grid2) -> Result<SolverConfig> {
    let tol = check_tol(s.tol.unwrap_or(SolverConfig::default().tol))?;
    ensure!(s.max_iters > 0, "--max-iters must be at least 1");
    ensure!(s.rot3.is_none(), "--rot3 applies to 3D problems only");
    let has_rot = s.rotations.is_some() || s.max_rot.is_some();
    let scheme = match s.scheme {
        SchemeKind::Basic | SchemeKind::Lf => {
            ensure!(
                !has_rot && s.rand_rot.is_none(),
                "--rotations, --max-rot and --rand-rot need --scheme rotated"
            );
            Scheme::Basic
        }
        SchemeKind::Weno => {
            ensure!(
                !has_rot && s.rand_rot.is_none(),
                "--scheme weno cannot be combined with --rotations, --max-rot or --rand-rot"
            );
            Scheme::Weno
        }
        SchemeKind::Rotated => {
            ensure!(has_rot, "--scheme rotated needs --rotations or --max-rot");
            ensure!(
                grid.is_square(),
                "--rotations/--max-rot need equal spacing in x and y; drop --grid-y"
            );
            let mut pool: Vec<RotationDir2> = Vec::new();
            if let Some(m) = s.max_rot {
                ensure!(m >= 1, "--max-rot must be at least 1");
                pool.extend(enumerate_rotations(m, grid.dx(), grid.dy())?);
            }
            if let Some(r) = &s.rotations {
                for (a, b) in parse_pairs(r)? {
                    ensure!(
                        a >= 0 && b >= 0,
                        "--rotations: components must be non-negative"
                    );
                    let d = RotationDir2::new(a as usize, b as usize, grid.dx(), grid.dy())
                        .context("--rotations")?;
                    if !pool
                        .iter()
                        .any(|p| p.ihat() == d.ihat() && p.jhat() == d.jhat())
                    {
                        pool.push(d);
                    }
                }
            }
            match s.rand_rot {
                Some(k) => {
                    ensure!(
                        k >= 1 && k <= pool.len(),
                        "--rand-rot {k} must lie between 1 and the pool size {}",
                        pool.len()
                    );
                    Scheme::RotatedRandom {
                        pool,
                        k,
                        seed: s.seed,
                    }
                }
                None => Scheme::Rotated(pool),
            }
        }
    };
    Ok(SolverConfig {
        tol,
        max_iters: s.max_iters,
        scheme,
        sweep_frame: !s.interior_only,
        ..SolverConfig::default()
    })
}

fn lf_config(s: &SchemeArgs, tol: f64) -> Result<LfConfig> {
    let mut c = LfConfig::default().with_tol(check_tol(tol)?);
    c.sweep_frame = !s.interior_only;
    if s.max_iters != SchemeArgs::DEFAULT_MAX_ITERS {
        c.max_iters = s.max_iters;
    }
    Ok(c)
}

impl SchemeArgs {
    const DEFAULT_MAX_ITERS: usize = 1000;
}

/// The 3D rotations described by `--rotations` (planar in x-y) and `--rot3`.
pub fn rotations3(s: &SchemeArgs, grid: &Grid3) -> Result<Vec<RotationDir3>> {
    let mut out = Vec::new();
    ensure!(
        s.rand_rot.is_none(),
        "--rand-rot is only available for 2D problems"
    );
    if let Some(m) = s.max_rot {
        let h = grid.spacing();
        ensure!(
            grid.is_square_xy(),
            "--max-rot needs equal spacing in x and y"
        );
        for r in enumerate_rotations(m, h[0], h[1])? {
            out.push(rotation3_from_triple(
                r.ihat() as i64,
                r.jhat() as i64,
                0,
                grid,
                RotationMode::AxisFixedZ,
            )?);
        }
    }
    if let Some(r) = &s.rotations {
        for (a, b) in parse_pairs(r)? {
            out.push(
                rotation3_from_triple(a, b, 0, grid, RotationMode::AxisFixedZ)
                    .context("--rotations")?,
            );
        }
    }
    if let Some(spec) = &s.rot3 {
        for item in spec.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            match item {
                "edges" => out.extend(edge_rotations(grid)?),
                "corners" => out.extend(corner_rotations(grid)?),
                "corner" => out.push(corner_rotations(grid)?[0]),
                _ => {
                    let (mode, nums) = item
                        .split_once(':')
                        .with_context(|| format!("--rot3: cannot read '{item}'"))?;
                    let v: Vec<i64> = nums
                        .split(',')
                        .map(|t| t.trim().parse::<i64>())
                        .collect::<std::result::Result<_, _>>()
                        .with_context(|| format!("--rot3: bad components in '{item}'"))?;
                    let t = match (mode, v.as_slice()) {
                        ("z", [i, j]) => (*i, *j, 0, RotationMode::AxisFixedZ),
                        ("y", [i, k]) => (*i, 0, *k, RotationMode::AxisFixedY),
                        ("x", [j, k]) => (0, *j, *k, RotationMode::AxisFixedX),
                        ("g", [i, j, k]) => (*i, *j, *k, RotationMode::General),
                        _ => bail!("--rot3: cannot read '{item}'"),
                    };
                    out.push(rotation3_from_triple(t.0, t.1, t.2, grid, t.3).context("--rot3")?);
                }
            }
        }
    }
    Ok(out)
}

fn car_params(c: &CarArgs) -> Result<CarParams> {
    let p = CarParams {
        w: c.w,
        d: c.d,
        target: parse_point::<3>(&c.target, "--target")?,
    };
    p.validate().context("--w/--d")?;
    Ok(p)
}

fn source2(p: &ProblemArgs) -> Result<[f64; 2]> {
    p.source
        .as_deref()
        .map_or(Ok([0.0; 2]), |s| parse_point::<2>(s, "--source"))
}

fn problem2(p: &ProblemArgs, grid: &Grid2) -> Result<ControlProblem2> {
    let src = source2(p)?;
    Ok(match p.problem {
        ProblemKind::Eikonal => eikonal_problem(p.p, Speed::Uniform(1.0), grid, src, p.samples)?,
        ProblemKind::Smooth => smooth_eikonal_problem(grid, src, p.samples)?,
        _ => unreachable!("3D problems are dispatched separately"),
    })
}

fn grid2(n: usize, ny: Option<usize>) -> Result<Grid2> {
    Grid2::new([-1.0, 1.0, -1.0, 1.0], n, ny.unwrap_or(n), 1).context("--grid")
}

fn solve2(problem: &ControlProblem2, grid: &Grid2, s: &SchemeArgs) -> Result<SolveResult2> {
    let cfg = solver_config(s, grid)?;
    Ok(match s.scheme {
        SchemeKind::Lf => lf_solve(problem, grid, &lf_config(s, cfg.tol)?)?,
        _ => sweep_solve(problem, grid, &cfg)?,
    })
}

fn solve3(
    problem: &hjsweep::ControlProblem3,
    grid: &Grid3,
    s: &SchemeArgs,
    default_tol: f64,
) -> Result<SolveResult3> {
    let tol = check_tol(s.tol.unwrap_or(default_tol))?;
    ensure!(s.max_iters > 0, "--max-iters must be at least 1");
    match s.scheme {
        SchemeKind::Weno => bail!("--scheme weno is only available for 2D problems"),
        SchemeKind::Lf => {
            ensure!(
                s.rotations.is_none() && s.rot3.is_none() && s.max_rot.is_none(),
                "rotation flags need --scheme rotated"
            );
            Ok(lf_solve3(problem, grid, &lf_config(s, tol)?)?)
        }
        SchemeKind::Basic | SchemeKind::Rotated => {
            let rots = rotations3(s, grid)?;
            if s.scheme == SchemeKind::Basic {
                ensure!(rots.is_empty(), "rotation flags need --scheme rotated");
            } else {
                ensure!(
                    !rots.is_empty(),
                    "--scheme rotated needs --rotations, --max-rot or --rot3"
                );
            }
            let cfg = SolverConfig3 {
                tol,
                max_iters: s.max_iters,
                rotations: rots,
                sweep_frame: !s.interior_only,
            };
            Ok(sweep_solve3(problem, grid, &cfg)?)
        }
    }
}

fn problem3(p: &ProblemArgs, n: usize) -> Result<(hjsweep::ControlProblem3, Grid3)> {
    match p.problem {
        ProblemKind::Car => {
            let grid = Grid3::car_domain(n, 1).context("--grid")?;
            Ok((car_problem(car_params(&p.car)?, &grid)?, grid))
        }
        ProblemKind::Eikonal3 => {
            let grid = Grid3::unit_cube(n, 1).context("--grid")?;
            let src = p
                .source
                .as_deref()
                .map_or(Ok([0.0; 3]), |s| parse_point::<3>(s, "--source"))?;
            let sph = parse_list(&p.sphere, "--sphere")?;
            ensure!(
                sph.len() == 2,
                "--sphere expects 'azimuth,inclination' counts"
            );
            let sphere = (sph[0] as usize, sph[1] as usize);
            Ok((eikonal3_problem(p.p, &grid, src, sphere)?, grid))
        }
        _ => unreachable!("2D problems are dispatched separately"),
    }
}

fn write(path: &PathBuf, text: String) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn nearest_k(field: &Field3, theta: f64) -> Result<usize> {
    let g = field.grid();
    let b = g.bounds();
    let h = g.spacing()[2];
    let nk = g.cells()[2];
    let mut s = (theta - b[4]) / h;
    if g.periodic_z() {
        s = s.rem_euclid(nk as f64);
        Ok((s.round() as usize) % nk)
    } else {
        ensure!(
            s >= -0.5 && s <= nk as f64 + 0.5,
            "--slice-theta {theta} lies outside the grid"
        );
        Ok(s.round().clamp(0.0, nk as f64) as usize)
    }
}

fn is_3d(p: ProblemKind) -> bool {
    matches!(p, ProblemKind::Car | ProblemKind::Eikonal3)
}

fn outcome(converged: bool) -> Outcome {
    if converged {
        Outcome::Converged
    } else {
        Outcome::NotConverged
    }
}

pub fn solve(a: &SolveArgs) -> Result<Outcome> {
    if is_3d(a.problem.problem) {
        ensure!(a.grid_y.is_none(), "--grid-y applies to 2D problems only");
        let (problem, grid) = problem3(&a.problem, a.grid)?;
        let out = solve3(&problem, &grid, &a.scheme, default_tol(a.problem.problem))?;
        let mut line = format!("iters={}", out.iterations);
        if let Some(ex) = problem.exact() {
            let (linf, l1) = error_norms3(&out.field, ex)?;
            line += &format!(", Linf={}, L1={}", sci(linf), sci(l1));
        }
        println!("{line}, converged={}", out.converged);
        if let Some(path) = &a.out {
            match a.slice_theta {
                Some(theta) => {
                    let k = nearest_k(&out.field, theta)?;
                    write(path, io::field2_to_string(&out.field.slice_z(k)))?;
                }
                None => write(path, io::field3_to_string(&out.field))?,
            }
        }
        return Ok(outcome(out.converged));
    }
    ensure!(
        a.slice_theta.is_none(),
        "--slice-theta applies to 3D problems only"
    );
    let grid = grid2(a.grid, a.grid_y)?;
    let problem = problem2(&a.problem, &grid)?;
    let out = solve2(&problem, &grid, &a.scheme)?;
    let mut line = format!("iters={}", out.iterations);
    if let Some(ex) = problem.exact() {
        let (linf, l1) = error_norms(&out.field, ex)?;
        line += &format!(", Linf={}, L1={}", sci(linf), sci(l1));
    }
    println!("{line}, converged={}", out.converged);
    if let Some(path) = &a.out {
        io::export_field(&out.field, path)?;
    }
    Ok(outcome(out.converged))
}

pub fn converge(a: &ConvergeArgs) -> Result<Outcome> {
    ensure!(
        !is_3d(a.problem.problem),
        "converge supports the 2D problems only"
    );
    let grids: Vec<usize> = a
        .grids
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .with_context(|| format!("--grids: '{t}' is not a count"))
        })
        .collect::<Result<_>>()?;
    // validate the flags once up front so usage errors are not reported per row
    solver_config(&a.scheme, &grid2(grids[0], None)?)?;
    let table = convergence_table(
        &grids,
        |n| {
            let grid = Grid2::unit_square(n, 1)?;
            let problem = match a.problem.problem {
                ProblemKind::Eikonal => eikonal_problem(
                    a.problem.p,
                    Speed::Uniform(1.0),
                    &grid,
                    [0.0; 2],
                    a.problem.samples,
                )?,
                _ => smooth_eikonal_problem(&grid, [0.0; 2], a.problem.samples)?,
            };
            Ok((problem, grid))
        },
        |problem, grid| {
            let cfg = solver_config(&a.scheme, grid)
                .map_err(|e| hjsweep::Error::InvalidConfig(e.to_string()))?;
            match a.scheme.scheme {
                SchemeKind::Lf => {
                    let mut c = LfConfig::default().with_tol(cfg.tol);
                    c.sweep_frame = cfg.sweep_frame;
                    lf_solve(problem, grid, &c)
                }
                _ => sweep_solve(problem, grid, &cfg),
            }
        },
    )?;
    print!("{table}");
    if let Some(path) = &a.out {
        write(path, table.to_string())?;
    }
    Ok(outcome(table.rows.iter().all(|r| r.converged)))
}

pub fn trajectory(a: &TrajectoryArgs) -> Result<Outcome> {
    let params = car_params(&a.car)?;
    let grid = Grid3::car_domain(a.grid, 1).context("--grid")?;
    let problem = car_problem(params, &grid)?;
    let out = solve3(&problem, &grid, &a.scheme, SolverConfig3::car().tol)?;
    if let Some(path) = &a.field_out {
        write(path, io::field3_to_string(&out.field))?;
    }
    let start = parse_point::<3>(&a.start, "--start")?;
    let dt = a.dt.unwrap_or(0.5 * grid.spacing()[0]);
    let path = extract_trajectory(&out.field, start, &params, dt, a.t_max)?;
    println!(
        "iters={}, converged={}, reached={}, duration={}, value_at_start={}",
        out.iterations,
        out.converged,
        path.reached,
        sci(path.duration()),
        sci(hjsweep::trajectory::interpolate(&out.field, start)?)
    );
    if let Some(p) = &a.out {
        write(p, io::trajectory_to_csv(&path))?;
    }
    Ok(outcome(out.converged))
}

/// Signed distance to a union of disks, positive inside; `-1` everywhere
/// when there are none.
pub fn disks_sdf(disks: Vec<[f64; 3]>) -> hjsweep::problem::ScalarFn<2> {
    if disks.is_empty() {
        return Arc::new(|_| -1.0);
    }
    Arc::new(move |x: &[f64; 2]| {
        disks
            .iter()
            .map(|d| d[2] - (x[0] - d[0]).hypot(x[1] - d[1]))
            .fold(f64::NEG_INFINITY, f64::max)
    })
}

pub fn visibility(a: &VisibilityArgs) -> Result<Outcome> {
    let grid = grid2(a.grid, None)?;
    let vantage = parse_point::<2>(&a.vantage, "--vantage")?;
    let disks = a
        .disks
        .iter()
        .map(|d| {
            let v = parse_point::<3>(d, "--disk")?;
            ensure!(v[2] > 0.0, "--disk radius must be positive, got {}", v[2]);
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    ensure!(
        a.scheme.scheme != SchemeKind::Lf,
        "--scheme lf does not apply to visibility"
    );
    ensure!(
        a.scheme.scheme != SchemeKind::Weno,
        "--scheme weno does not apply to visibility"
    );
    let problem = visibility_problem(disks_sdf(disks), vantage, &grid)?;
    let out = sweep_solve(&problem, &grid, &solver_config(&a.scheme, &grid)?)?;
    let total = (grid.ni() + 1) * (grid.nj() + 1);
    let visible: usize = out
        .field
        .node_rows()
        .map(|r| r.iter().filter(|&&v| v <= 0.0).count())
        .sum();
    println!(
        "iters={}, converged={}, visible={:.2}%",
        out.iterations,
        out.converged,
        100.0 * visible as f64 / total as f64
    );
    if let Some(path) = &a.out {
        io::export_field(&out.field, path)?;
    }
    if let Some(path) = &a.mask {
        write(path, io::mask_to_string(&out.field))?;
    }
    Ok(outcome(out.converged))
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Converge(a) => converge(a),
        Command::Trajectory(a) => trajectory(a),
        Command::Visibility(a) => visibility(a),
    }
}
