//! Slow reference computations for the test suites. Nothing here shares
//! code paths with the engine's search routines beyond the graph data type.

pub mod counts;
pub mod iso;
pub mod reduced;

pub use counts::{binary_tree_count, binomial, q_closed_form};
pub use iso::{brute_automorphism_count, brute_key, brute_strict_iso, brute_weak_iso, BruteKey};
pub use reduced::{is_reduced, is_well_marked, reduced_by_filter};
