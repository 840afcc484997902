//! Local-box world: membership tests, connector optimisation and exact tree
//! bounds over the classical polytope.
//!
//! Boxes live in abbreviated no-signalling coordinates throughout; connectors
//! are stored as matrices acting on those coordinates and only expanded to
//! standard doubled-leg tensors on demand.  Every optimisation routine returns
//! a certificate that can be re-checked offline without re-solving.

pub mod abbrev_map;
pub mod chsh;
pub mod connector;
pub mod functional;
pub mod io;
pub mod lpbuild;
pub mod membership;
pub mod optimize;
pub mod tree;
pub mod vertices;
pub mod wiring;

pub use abbrev_map::AbbreviationMap;
pub use chsh::{
    appendix_e_connector, chsh_connector, chsh_double_prime_table, chsh_e_table,
    chsh_prime_table, chsh_table, table_value, CHSH_PAIR_VALUE,
};
pub use connector::{check_loc_feasibility, loc_feasibility, Connector, LocFeasibility, World};
pub use functional::{evaluate_std, PositiveFunctionalCertificate};
pub use io::{
    connector_from_text, connector_to_text, network_from_text, network_to_text, read_connector,
    read_network, write_connector, write_network,
};
pub use membership::{local_membership, BellFunctional, LocalModel, MembershipVerdict};
pub use optimize::{
    optimize_2to1_fast, optimize_connector, ConnectorLpCertificate, Fast2to1Certificate,
};
pub use tree::{chsh_tree, chsh_tree_with_root, ns_min_value, verify_ns_min, ConnectorNetwork, NetworkNode, NsMinCertificate, Port};
pub use vertices::{vertex_count, VertexSet, MAX_VERTICES};
pub use wiring::{identity_wiring, pair_wiring, wiring, WiringGroup};

/// Residual tolerance for certificate equalities.
pub const FEAS_TOL: f64 = 1e-8;
/// Tolerance below which certified multipliers may dip under zero.
pub const POS_TOL: f64 = 1e-10;
/// Classification slack separating clear verdicts from marginal ones.
pub const MARGIN_TOL: f64 = 1e-7;

#[derive(Debug, thiserror::Error)]
pub enum LocError {
    #[error("tensor error: {0}")]
    Tensor(#[from] tensor_core::TensorError),
    #[error("solver error: {0}")]
    Solver(#[from] conic_solver::SolverError),
    #[error("box error: {0}")]
    Box(#[from] box_models::BoxError),
    #[error("scenario too large: {0}")]
    TooLarge(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("optimisation failed: {0}")]
    Optimize(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, LocError>;
