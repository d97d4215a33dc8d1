//! Unified-(q,s) entropy entanglement measures for multi-qubit states and
//! numerical checks of Hamming-weight-weighted monogamy and polygamy
//! inequalities.
//!
//! * [`qstate`]: pure and mixed states, partial traces, spectra, sampling.
//! * [`entropy`]: the unified-(q,s) entropy and its limits.
//! * [`measures`]: UE / UEoA, including the decomposition (roof) search.
//! * [`hamming`]: binary expansions and Hamming weights.
//! * [`inequality`]: monogamy / polygamy checkers and their reports.
//! * [`harness`]: sweeps, report files and the acceptance suite.

pub mod entropy;
pub mod error;
pub mod hamming;
pub mod harness;
pub mod inequality;
pub mod measures;
pub mod qstate;

pub use error::{Error, Result};
