use thiserror::Error;

/// Errors produced by the simulator and its oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The homology / voxel oracles are desk-scale validators with hard caps.
    #[error("oracle scale exceeded: {0}")]
    OracleScaleExceeded(String),

    #[error("unknown cluster id {0}")]
    UnknownCluster(usize),

    #[error("dual vertex {0:?} is outside the window")]
    OutsideWindow(Vec<i64>),

    /// A per-seed indicator decreased along increasing p under the shared
    /// uniform coupling. This should be impossible; it aborts the sweep.
    #[error("coupling monotonicity violated: {0}")]
    MonotonicityViolation(String),

    /// The per-configuration trifurcation surface bound tripped.
    #[error("trifurcation surface bound violated: {0}")]
    SurfaceBoundViolation(String),

    #[error("no curve crossing found: {0}")]
    NoCrossing(String),

    #[error("snapshot format: {0}")]
    SnapshotFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
