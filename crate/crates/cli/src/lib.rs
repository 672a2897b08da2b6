//! Library half of the `hjsweep` command-line tool, split out so the
//! commands can be driven from tests.

pub mod cmd;
pub mod io;

use clap::Parser;

pub use cmd::{Cli, Outcome};

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code: 0 on success, 1 on bad usage or I/O failure, 2 when
/// the solver hits its iteration cap.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return 1;
    }
    match cmd::dispatch(&cli) {
        Ok(Outcome::Converged) => 0,
        Ok(Outcome::NotConverged) => {
            eprintln!("warning: iteration cap reached before convergence");
            2
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Caps the worker pool from `HJSWEEP_THREADS` when set.
fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("HJSWEEP_THREADS") else {
        return Ok(());
    };
    let n: usize =
        v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            anyhow::anyhow!("HJSWEEP_THREADS must be a positive integer, got '{v}'")
        })?;
    // a pool built earlier in the same process wins; that is fine
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}
