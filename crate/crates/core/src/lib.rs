//! Combinatorics of limiting blocks of Brauer algebras in odd characteristic.
//!
//! Partitions are represented on a `p`-runner abacus whose runners `t` and
//! `p - t` are joined by an arc. Two bead moves (`a`: slide along runners,
//! `d`: swing over the arc) generate the limiting blocks, which coincide with
//! orbits of the affine Weyl group of type D under a shifted action. The
//! crate computes those orbits, certifies block membership with explicit
//! move traces, predicts non-zero homomorphisms between cell modules, and
//! implements the underlying Brauer diagram arithmetic.

pub mod abacus;
pub mod blocks;
pub mod diagram;
pub mod error;
pub mod homs;
pub mod par;
pub mod partition;
pub mod reduction;
pub mod weyl;

pub use abacus::{Abacus, Move, MoveKind, MoveTrace, OddPrime, OrbitInvariant};
pub use error::{Error, Result};
pub use partition::{Node, Partition};
