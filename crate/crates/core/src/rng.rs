//! Seedable, splittable pseudo-random numbers.
//!
//! [`SplitMix64`] drives every stochastic operation. Independent substreams
//! come from [`SplitMix64::fork`], which hashes a key into the parent state,
//! so a stream for "row 17 of sample 3" can be derived without advancing any
//! other stream.
//!
//! Atoms of a weighted space are drawn by inverse CDF: a 64-bit draw `u`
//! selects the first atom `i` with `u < ceil(C_i * 2^64)`, where `C_i` is the
//! exact cumulative weight of atoms `0..=i`. The thresholds are computed once
//! in exact arithmetic, so the mapping from draws to atoms is bit-exact.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::Rational;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// An independent stream identified by `key`; does not advance `self`.
    pub fn fork(&self, key: u64) -> SplitMix64 {
        SplitMix64 { state: mix64(self.state ^ mix64(key.wrapping_add(GOLDEN))) }
    }

    /// Uniform integer in `0..n` (Lemire's multiply-and-reject).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = u128::from(self.next_u64()) * u128::from(n);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Inverse-CDF sampler over the atoms of a weighted space.
#[derive(Clone, Debug)]
pub struct InverseCdf {
    thresholds: Vec<u128>,
}

impl InverseCdf {
    /// `weights` must be positive and sum to one.
    pub fn new(weights: &[Rational]) -> Self {
        let scale = Rational::from_integer(BigInt::from(1u128 << 64));
        let mut cumulative = Rational::zero();
        let thresholds = weights
            .iter()
            .map(|w| {
                cumulative += w;
                (&cumulative * &scale).ceil().to_integer().to_u128().expect("cumulative weight <= 1")
            })
            .collect();
        InverseCdf { thresholds }
    }

    #[inline]
    pub fn atom(&self, u: u64) -> usize {
        let u = u128::from(u);
        self.thresholds.partition_point(|&t| t <= u)
    }

    pub fn sample(&self, rng: &mut SplitMix64) -> usize {
        self.atom(rng.next_u64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn deterministic_and_forks_differ() {
        let mut a = SplitMix64::new(1);
        let mut b = SplitMix64::new(1);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let root = SplitMix64::new(7);
        assert_ne!(root.fork(0).next_u64(), root.fork(1).next_u64());
        assert_eq!(root.fork(3), root.fork(3));
    }

    #[test]
    fn inverse_cdf_boundaries() {
        let cdf = InverseCdf::new(&[ratio(1, 4), ratio(1, 2), ratio(1, 4)]);
        assert_eq!(cdf.atom(0), 0);
        assert_eq!(cdf.atom((1u64 << 62) - 1), 0);
        assert_eq!(cdf.atom(1u64 << 62), 1);
        assert_eq!(cdf.atom(3u64 << 62), 2);
        assert_eq!(cdf.atom(u64::MAX), 2);
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = SplitMix64::new(42);
        let mut hits = [0u32; 3];
        for _ in 0..3000 {
            hits[r.below(3) as usize] += 1;
        }
        assert!(hits.iter().all(|&h| h > 800));
    }
}
