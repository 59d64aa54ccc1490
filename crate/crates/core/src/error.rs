use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeomError>;

/// Failures raised by the geometric primitives and the scans built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point ({x}, {y}) is not inside the open unit disk")]
    OutsideDisk { x: f64, y: f64 },

    #[error("point is not inside the open unit ball (|u|^2 = {norm_sq})")]
    OutsideBall { norm_sq: f64 },

    #[error("point ({x}, {y}) is not in the open upper half-plane")]
    OutsideHalfPlane { x: f64, y: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported ball dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("pseudo-hyperbolic distance {0} is too close to 1 for a finite metric value")]
    Range(f64),

    #[error("{what} must lie in {expected}, got {value}")]
    Domain {
        what: &'static str,
        expected: &'static str,
        value: f64,
    },

    #[error("hyperbolic radius {0} saturates at the disk boundary (limit 35)")]
    Saturated(f64),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bisection could not bracket a vertex parameter for side length {0}")]
    SolverFailure(f64),

    #[error("finite-difference stencil of size {h} leaves the disk at ({x}, {y})")]
    StepTooLarge { h: f64, x: f64, y: f64 },

    #[error("map `{name}` sent a point outside the disk: ({x}, {y})")]
    MapLeftDisk { name: String, x: f64, y: f64 },

    #[error("image is degenerate: smallest image distance {0:e} is below 1e-14")]
    ImageDegenerate(f64),

    #[error("map `{0}` has no claimed dilatation K")]
    MissingClaimedK(String),

    #[error("map does not fix the origin: |f(0)| = {0:e}")]
    FixedPointViolation(f64),

    #[error("chain descent stalled at round {round}: distance {before} -> {after}")]
    NoProgress {
        round: usize,
        before: f64,
        after: f64,
    },

    #[error("quotient points belong to different groups")]
    GroupMismatch,

    #[error("lift is not equivariant: error {error:e} at ({x}, {y})")]
    EquivarianceViolation { error: f64, x: f64, y: f64 },

    #[error("triangle side {side} is not below half the translation length {limit}")]
    SideTooLarge { side: f64, limit: f64 },

    #[error("sample {index}: {source}")]
    AtSample { index: usize, source: Box<GeomError> },
}

impl GeomError {
    /// The underlying failure, without sample context.
    pub fn root(&self) -> &GeomError {
        match self {
            GeomError::AtSample { source, .. } => source.root(),
            e => e,
        }
    }

    /// Index of the sample that failed, when known.
    pub fn sample_index(&self) -> Option<usize> {
        match self {
            GeomError::AtSample { index, .. } => Some(*index),
            _ => None,
        }
    }
}
