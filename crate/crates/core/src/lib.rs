//! Exact minimal log discrepancies of determinantal pairs, with independent
//! oracles built from jet-space orbits, the straightening law and the Nash
//! ideal.

pub mod cli;
pub mod error;
pub mod forms;
mod linalg;
pub mod mld;
pub mod oracle;
pub mod orbit;
pub mod pairs;
pub mod poly;
pub mod tableaux;

pub use error::{Error, Result};
pub use pairs::{DeterminantalPair, ExtendedPartition, MldValue, Order, Rational};
