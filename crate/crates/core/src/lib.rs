//! LHZ parity-architecture layout, codec, compiler and simulator.

pub mod circuit;
pub mod codec;
pub mod compiler;
pub mod error;
pub mod error_model;
pub mod format;
pub mod layout;
pub mod pauli;
pub mod peephole;
pub mod qubit;
pub mod sim;
pub mod budget;
pub mod verify;

pub use error::{Error, Result};
pub use layout::{build_layout, Layout};
pub use qubit::QubitId;
