//! Partitions of `[0, m]` into two sets with equal representation functions.
//!
//! The crate builds the known balanced families, reconstructs the unique
//! candidate for a prescribed shared set, searches small `m` exhaustively,
//! and checks the generating-function identities and digit lemmas that
//! describe these pairs.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod genfun;
pub mod lemmas;
pub mod natset;
pub mod repfn;
pub mod search;
pub mod solver;

pub use constructions::{Family, PartitionPair};
pub use error::{Error, Result};
pub use natset::{tm_class, tm_prefix, NatSet, TmClass};
pub use repfn::RepProfile;
