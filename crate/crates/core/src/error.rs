use thiserror::Error;

/// Errors raised while building grids, problems and solver configurations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid rotation: {0}")]
    InvalidRotation(String),

    #[error("rotations require a square grid (dx = {dx}, dy = {dy})")]
    NonSquareGrid { dx: f64, dy: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("ghost layer of width {have} is too narrow, stencil needs {need}")]
    GhostTooNarrow { have: usize, need: usize },

    #[error("field holds a sentinel value at node {0:?}")]
    SentinelInInterior(Vec<usize>),

    #[error("trajectory: {0}")]
    Trajectory(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
