//! Behaviour boxes for Bell scenarios and the quantum states behind them.
//!
//! A *box* is a conditional distribution P(a1..am | x1..xm) over the outputs
//! of m parties given their inputs. This crate provides:
//!
//! - [`Scenario`] and the index conventions shared by every other crate:
//!   the doubled per-party index y = a*I + x and the abbreviated
//!   (no-signalling minimal) parametrization with the empty symbol first;
//! - [`NsBox`], a box in dense standard, dense abbreviated or matrix-product
//!   form, with physicality (positivity + normalization + no-signalling)
//!   verification;
//! - constructors for every box family used downstream: deterministic boxes,
//!   XOR boxes (PR, Svetlichny), their matrix-product forms, GHZ Pauli boxes,
//!   finitely correlated chains and unextendible-product-basis states;
//! - complex matrices, quantum models and Born-rule evaluation;
//! - seeded samplers for states, unitaries and local boxes;
//! - a lossless text file format for boxes.

pub mod abbrev;
pub mod cmat;
pub mod fcs;
pub mod io;
pub mod mps_families;
pub mod nsbox;
pub mod quantum;
pub mod sample;
pub mod scenario;
pub mod upb;

pub use abbrev::{abbrev_to_std, std_to_abbrev, PartyMaps};
pub use cmat::{CMat, C64};
pub use fcs::{
    fcs_chain_box, fcs_chain_state, pair_box, pair_pauli_coeffs, pauli_transfer16, singlet_state,
    tilted_pair_state, MixedPairChannel, PauliMps,
};
pub use io::{box_from_text, box_to_text, hex_f64, parse_hex_f64, read_box, write_box};
pub use mps_families::{consecutive_ones_mps, majority_mps, svetlichny_mps};
pub use nsbox::{
    boolean_xor_box, consecutive_ones_fn, deterministic_box, enumerate_assignments, majority_fn,
    ring_xor_fn, BoxData, NsBox, Representation,
};
pub use quantum::{
    ghz_model, ghz_pauli_mps, ghz_state, pauli, pauli_projectors, quantum_box, QState, QuantumModel,
};
pub use sample::{
    haar_unitary, random_density, random_local_box, random_product_pure, random_projective_meas,
    random_pure, rng,
};
pub use scenario::Scenario;
pub use upb::{product_basis_pair, shifts_basis, upb_state, ProductVector};

#[derive(Debug, thiserror::Error)]
pub enum BoxError {
    #[error("tensor error: {0}")]
    Tensor(#[from] tensor_core::TensorError),
    #[error("bad scenario: {0}")]
    BadScenario(String),
    #[error("bad box: {0}")]
    BadBox(String),
    #[error("bad model: {0}")]
    BadModel(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, BoxError>;
