//! Separable-state world approximated from outside by symmetric-extension
//! witness cones.

#[derive(Debug, thiserror::Error)]
pub enum SepError {
    #[error("tensor error: {0}")]
    Tensor(#[from] tensor_core::TensorError),
    #[error("solver error: {0}")]
    Solver(#[from] conic_solver::SolverError),
    #[error("box error: {0}")]
    Box(#[from] box_models::BoxError),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, SepError>;
