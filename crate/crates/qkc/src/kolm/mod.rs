//! Resource-bounded description complexity over a fixed gate interpreter.
//!
//! The reference machine runs bit-string programs (see [`interp`] for the
//! exact wire format) and [`search`] enumerates them shortest-first to
//! measure how many bits a target state needs at a given fidelity.
//! [`classical`] restricts the same machine to deterministic bit
//! operations, [`block`] provides the enumerative entropy coder used as
//! the classical yardstick, and [`analysis`] assembles the ensemble-level
//! comparisons (counting floors, cross-interpreter invariance,
//! subadditivity, copy anomalies).

pub mod analysis;
pub mod block;
pub mod classical;
pub mod interp;
pub mod program;
pub mod search;

pub use analysis::{
    CopiesGapReport, CountingCheck, IncompressibilityReport, InvarianceReport,
    SubadditivityReport, copies_gap, counting_check, invariance_demo, subadditivity_spotcheck,
    verify_incompressibility,
};
pub use block::{BlockCode, block_entropy_decode, block_entropy_encode};
pub use classical::{bits_of, classical_kc_search};
pub use interp::{
    DecodedProgram, EMULATION_COST_BITS, Instr, MAX_AUX_QUBITS, MAX_REGISTER_QUBITS, decode,
    interpret, literal_program, run,
};
pub use program::{BitString, InterpreterId, Program};
pub use search::{
    MAX_SEARCH_LEN, QcEstimate, qc_conditional_search, qc_conditional_search_sharded, qc_search,
    qc_search_on, qc_search_sharded,
};
