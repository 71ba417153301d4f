//! Combinatorics of shrinkable pasting schemes for generalized props.
//!
//! The crate is organised bottom-up:
//!
//! * [`profiles`]: colored profiles, permutations and the groupoid of profile pairs.
//! * [`graph`]: colored wheeled graphs, weak/strict isomorphism, canonical keys
//!   and automorphism groups.
//! * [`ops`]: graph substitution, input/output extension and edge shrinking.
//! * [`schemes`]: the built-in pasting schemes, bounded graph enumeration and
//!   the axiom/shrinkability checkers.
//! * [`marked`]: marked graphs, wellness, reduction and enumeration of reduced
//!   marked graphs.
//! * [`equivariant`]: finite sets and rational vector spaces with finite group
//!   actions, induction, pushouts and the Q-construction.
//! * [`sample`]: seeded random members and markings for randomized checks.
//! * [`prop`]: collections, free props, the brute-force pushout oracle and the
//!   pushout filtration.

pub mod budget;
pub mod equivariant;
pub mod error;
pub mod graph;
pub mod marked;
pub mod ops;
pub mod profiles;
pub mod prop;
pub mod sample;
pub mod schemes;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeKind, Graph, Port, Vertex};
pub use profiles::{Color, ColorSet, Perm, Profile, ProfilePair};
