//! Computational engine for partition (equivalence) lattices.
//!
//! The crate revolves around `Equ(n)`, the lattice of all equivalence
//! relations on `{0..n-1}` ordered by inclusion. It provides:
//!
//! * canonical partitions with meet/join/order ([`partition`]),
//! * Bell numbers and subset ranking ([`counting`]),
//! * finite lattice contexts including direct products ([`context`]),
//! * sublattice closure and generation tests ([`closure`]),
//! * exact, checkpointed enumeration of four-element generating sets
//!   ([`enumeration`]),
//! * uniform random partition sampling and confidence-interval statistics
//!   ([`sampling`], [`stats`]),
//! * lattice term machinery over labeled zigzag configurations ([`term`],
//!   [`zigzag`]), a closed-form lower bound with its explicit witness family
//!   ([`bound`]),
//! * bit-vector antichain combinatorics and four-generation of direct
//!   products of partition lattices ([`bits`], [`products`]).

pub mod bits;
pub mod bound;
pub mod closure;
pub mod context;
pub mod counting;
pub mod enumeration;
pub mod error;
pub mod partition;
pub mod products;
pub mod sampling;
pub mod stats;
pub mod term;
pub mod zigzag;

pub use error::{Error, Result};
pub use partition::Partition;
