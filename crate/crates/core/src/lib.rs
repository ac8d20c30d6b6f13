//! Event structures, branching cells and the probabilities they carry.
//!
//! Structures are finite and small: every analysis enumerates
//! configurations exhaustively.

pub mod cells;
pub mod cli;
pub mod error;
pub mod eventset;
pub mod fixtures;
pub mod io;
pub mod prime;
pub mod probability;
pub mod stable;
pub mod structure;
pub mod translation;

pub use error::{Error, Result};
pub use eventset::EventSet;
pub use prime::{validate_prime, PrimeEs, RawPrime};
pub use stable::{validate_stable, RawStable, StableEs};
pub use structure::{EventStructure, Names};
