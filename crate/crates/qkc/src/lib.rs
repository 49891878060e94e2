//! Desk-scale quantum information toolkit: density-matrix numerics
//! (fidelity, von Neumann entropy, Holevo chi), symmetric-subspace codecs
//! for tensor-power states, typical-subspace block compression, and
//! exhaustive shortest-program search over a small bit-level gate
//! interpreter.
//!
//! Everything is deterministic: the eigensolver is a fixed-order Jacobi
//! iteration, randomness always flows from explicit seeds through a
//! counter-based splitter, and Monte-Carlo reductions are accumulated in a
//! fixed block order so results do not depend on how work is sharded.

pub mod error;
pub mod io;
pub mod kolm;
pub mod matrix;
pub mod random;
pub mod state;
pub mod sym;
pub mod typical;
pub mod verify;

pub use error::{QkcError, Result};
pub use matrix::{C64, ComplexMatrix, EigenDecomposition};
pub use state::{DensityMatrix, Ensemble, PureState, QuantumChannel};
