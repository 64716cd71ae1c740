//! Certified packing/covering dichotomy for cycles under graph distance.
//!
//! For any finite simple graph G and targets k >= 1, d >= 1, [`solver::solve`]
//! constructs one of two verified certificates: k cycles pairwise further
//! than d apart, or a set X of at most `f(k)` vertices whose radius-`19d`
//! balls meet every cycle of G. Every certificate is re-verified from
//! scratch before it is returned; [`oracle`] holds exact brute-force
//! baselines for cross-checking on small instances.

#![forbid(unsafe_code)]

pub mod cycle;
pub mod generate;
pub mod graph;
pub mod helly;
pub mod machinery;
pub mod oracle;
pub mod selftest;
pub mod solver;
pub mod subcubic;
pub mod unicycle;
