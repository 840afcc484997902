//! Dense linear and semidefinite programming, sized for certification
//! problems with a few thousand variables.

pub mod linalg;
pub mod lp;
pub mod sdp;

pub use lp::{check_lp_infeasible, check_lp_optimal, solve_lp, LpProblem, LpSolution, LpStatus};
pub use sdp::{
    check_sdp_solution, solve_sdp, Block, BlockDim, BlockMat, NtIpm, SdpBackend, SdpProblem,
    SdpSolution, SdpStatus, SparseSym,
};

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("dimension mismatch: {0}")]
    Dims(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("iteration limit reached: {0}")]
    IterationLimit(String),
    #[error("bad problem: {0}")]
    BadProblem(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;
