//! Synthesis, lowering, counting and verification of `O(log M)` circuits that
//! prepare the uniform superposition `(1/√M) Σ_{j<M} |j⟩`, plus the family of
//! block-structured nonuniform states reachable by changing its rotation angles.
//!
//! Qubit indexing is little-endian throughout: qubit 0 is the least significant
//! bit of the basis-state index.

pub mod analytics;
pub mod builder;
pub mod circuit;
mod error;
pub mod lowering;
pub mod planner;
pub mod qasm;
pub mod simulator;
pub mod verify;

pub use error::{Error, Result};

pub use builder::{build_general, build_general_from_pairs, build_qba, build_uniform};
pub use circuit::{Circuit, Gate, GateKind, Tally};
pub use planner::{decompose, AmplitudeProfile, BitPlan, CoefficientPair};
pub use simulator::{Simulator, Statevector};
