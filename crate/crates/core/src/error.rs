use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate corner: coincident endpoint")]
    DegenerateCorner,
    #[error("point ({u}, {v}) is not inside the unit disk")]
    OutsideDisk { u: f64, v: f64 },
    #[error("reduction diverged after {0} steps")]
    ReductionDiverged(usize),
    #[error("invalid group word {0:?}")]
    InvalidWord(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid mapping: {0}")]
    InvalidMapping(String),
    #[error("weight on directed edge {edge} is not positive: {value}")]
    NonPositiveWeight { edge: usize, value: f64 },
    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("converged to non-embedding (residual {residual:e}, min angle {theta_min:e})")]
    NonEmbedding { residual: f64, theta_min: f64 },
    #[error("mapping on boundary ∂X: {0}")]
    OnBoundary(String),
    #[error("different homotopy class")]
    DifferentHomotopyClass,
    #[error("star of vertex {0} is not embedded")]
    StarNotEmbedded(usize),
    #[error("kernel has empty interior")]
    EmptyKernel,
    #[error("point is outside the kernel")]
    OutsideKernel,
    #[error("point is not strictly inside the disk")]
    NotInterior,
    #[error("projection undefined at center")]
    ProjectionAtCenter,
    #[error("Karcher descent stalled (gradient norm {grad:e})")]
    KarcherStalled { grad: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
