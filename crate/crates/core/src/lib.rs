//! Exact laboratory for decision-making and theory confirmation in
//! branching toy multiverses.
//!
//! The crate simulates four flavours of classical branching machine with
//! exact big-integer/rational arithmetic, ranks bets under a catalog of
//! betting strategies, runs confirmation censuses that separate caring
//! measures from explanatory counting measures, tests incompressibility
//! hypotheses on binary data, and computes a one-world-versus-many-worlds
//! species model. Everything is driven either as a library or through the
//! JSON scenario runner in the `branchlab` binary.

pub mod coding;
pub mod confirmation;
pub mod evolution;
pub mod exact;
pub mod multiverse;
pub mod scenario;
pub mod strategy;

pub use exact::{Int, Nat, Rat};
