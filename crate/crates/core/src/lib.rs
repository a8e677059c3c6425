//! Backward checker for DRUP/DRAT refutation proofs.
//!
//! The pipeline promotes formula-implied units, checks unit-anchored proof
//! segments against the formula alone, verifies the remaining inferences
//! inside a sliding window of recent small clauses and falls back to exact
//! RUP and RAT checks only for what is left.

pub mod clause;
pub mod cli;
pub mod config;
pub mod dimacs;
pub mod driver;
pub mod error;
pub mod proof;
pub mod propagation;
pub mod rat;
pub mod rup;
pub mod session;
pub mod testkit;

pub use clause::{Clause, Formula, Literal};
pub use config::{Config, Limit};
pub use driver::{verify, verify_files, Rejection, Stats, Verdict};
pub use error::{Error, Result};
pub use proof::{load_proof, load_proof_bytes, load_proof_str, ProofDb};
pub use session::Session;
