//! Matrix-product connector tensor networks and their optimisation loops.

#[derive(Debug, thiserror::Error)]
pub enum MpctnError {
    #[error("tensor error: {0}")]
    Tensor(#[from] tensor_core::TensorError),
    #[error("solver error: {0}")]
    Solver(#[from] conic_solver::SolverError),
    #[error("box error: {0}")]
    Box(#[from] box_models::BoxError),
    #[error("local-world error: {0}")]
    Loc(#[from] loc_world::LocError),
    #[error("quantum-world error: {0}")]
    Quant(#[from] quant_world::QuantError),
    #[error("separable-world error: {0}")]
    Sep(#[from] sep_world::SepError),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, MpctnError>;
