//! Exact classification of step functions of two variables.
//!
//! A [`StepFunction`] is a matrix over a finite alphabet whose rows and
//! columns carry exact rational weights. Two such functions are equivalent
//! when a weight-preserving relabeling of the rows and an independent one of
//! the columns carries one onto the other. This crate computes the invariants
//! that decide that question exactly:
//!
//! - purity partitions, the pure quotient and symmetry groups ([`purity`]);
//! - systems of joint distributions of sections ([`sjd`]);
//! - stable colorings, canonical images and equivalence witnesses for the
//!   main, diagonal and skew equivalences ([`canonical`]);
//! - matrix distributions: seeded sampling, exact corner marginals and
//!   reconstruction of a function from a sampled matrix ([`matrixdist`]).
//!
//! All measure arithmetic uses arbitrary-precision rationals. The crate is
//! `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod canonical;
mod error;
pub mod fixtures;
pub mod generate;
pub mod matrixdist;
pub mod model;
pub mod purity;
pub mod rational;
pub mod rng;
pub mod sjd;

pub use error::{Error, Result};
pub use model::{
    apply_permutations, Alphabet, Axis, Distribution, Permutation, StepFunction, Symbol,
    WeightedSpace,
};
pub use rational::Rational;

/// Enumeration limits shared by the exhaustive parts of the engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Highest level for which a full joint-distribution table is built.
    pub max_level: usize,
    /// Largest number of tuples in one full signature table.
    pub max_table_entries: u64,
    /// Largest number of index assignments enumerated for an exact marginal.
    pub max_assignments: u64,
    /// Largest `|X|! * |Y|!` accepted by the brute-force oracles.
    pub max_factorial_product: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_level: 5,
            max_table_entries: 1_000_000,
            max_assignments: 100_000_000,
            max_factorial_product: 50_000_000,
        }
    }
}
