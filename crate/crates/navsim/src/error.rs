//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid world: {0}")]
    InvalidWorld(String),

    #[error("agent state outside world bounds at ({x:.3}, {y:.3})")]
    OutOfBounds { x: f64, y: f64 },

    #[error("degenerate camera intrinsics: {0}")]
    BadIntrinsics(String),

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("zero-length polyline")]
    ZeroLengthPath,

    #[error("no route from cell ({0}, {1}) to cell ({2}, {3})")]
    NoRoute(usize, usize, usize, usize),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("flow time {0} outside [0, 1]")]
    FlowTimeRange(f64),

    #[error("empty batch")]
    EmptyBatch,

    #[error("training diverged at step {step}: loss {loss}")]
    Diverged { step: usize, loss: f64 },

    #[error("humanoid placement failed: {0}")]
    Placement(String),

    #[error("map format: {0}")]
    MapFormat(String),

    #[error("dataset format: {0}")]
    DatasetFormat(String),

    #[error("checkpoint format: {0}")]
    CheckpointFormat(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable one-word category for machine-parsable CLI error lines.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidWorld(_) | Error::MapFormat(_) => "world",
            Error::OutOfBounds { .. } => "out-of-bounds",
            Error::BadIntrinsics(_) => "intrinsics",
            Error::EmptyTrajectory | Error::ZeroLengthPath => "trajectory",
            Error::NoRoute(..) => "no-route",
            Error::Contract(_) => "contract",
            Error::NonFinite(_) => "non-finite",
            Error::FlowTimeRange(_) => "flow-time",
            Error::EmptyBatch => "empty-batch",
            Error::Diverged { .. } => "divergence",
            Error::Placement(_) => "placement",
            Error::DatasetFormat(_) => "dataset",
            Error::CheckpointFormat(_) => "checkpoint",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
