//! Fixture generators: seeded random functions and exhaustive families.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::rng::SplitMix64;
use crate::{Alphabet, Error, Permutation, Rational, Result, StepFunction, Symbol, WeightedSpace};

/// Positive weights for `n` atoms, each of the form `c/d` with a random
/// `d` in `n..=max_denominator`.
pub fn random_weights(n: usize, max_denominator: u64, rng: &mut SplitMix64) -> Result<WeightedSpace> {
    if n == 0 {
        return Err(Error::InvalidParameter("a space needs at least one atom".into()));
    }
    if (n as u64) > max_denominator {
        return Err(Error::InvalidParameter(alloc::format!(
            "{n} positive weights with denominators <= {max_denominator} cannot sum to 1"
        )));
    }
    let lo = n as u64;
    let d = lo + rng.below(max_denominator - lo + 1);
    random_grid_weights(n, d, rng)
}

/// Positive weights for `n` atoms, all multiples of `1/denominator`.
pub fn random_grid_weights(n: usize, denominator: u64, rng: &mut SplitMix64) -> Result<WeightedSpace> {
    if n == 0 || (n as u64) > denominator {
        return Err(Error::InvalidParameter(alloc::format!(
            "{n} positive multiples of 1/{denominator} cannot sum to 1"
        )));
    }
    let mut points: Vec<u64> = (1..denominator).collect();
    rng.shuffle(&mut points);
    let mut cuts: Vec<u64> = points[..n - 1].to_vec();
    cuts.sort_unstable();
    cuts.push(denominator);
    let mut prev = 0;
    let weights = cuts
        .into_iter()
        .map(|c| {
            let w = Rational::new(BigInt::from(c - prev), BigInt::from(denominator));
            prev = c;
            w
        })
        .collect();
    WeightedSpace::new(weights)
}

/// A seeded random step function.
///
/// Values are uniform over the first `alphabet_size` letters; weights come
/// from [`random_weights`]. The same arguments always give the same function.
pub fn random_function(
    rows: usize,
    cols: usize,
    alphabet_size: usize,
    max_denominator: u64,
    seed: u64,
) -> Result<StepFunction> {
    if rows == 0 || cols == 0 || alphabet_size == 0 || max_denominator == 0 {
        return Err(Error::InvalidParameter("all sizes must be >= 1".into()));
    }
    if alphabet_size > usize::from(Symbol::MAX) + 1 {
        return Err(Error::AlphabetTooLarge(alphabet_size));
    }
    let root = SplitMix64::new(seed);
    let row_space = random_weights(rows, max_denominator, &mut root.fork(1))?;
    let col_space = random_weights(cols, max_denominator, &mut root.fork(2))?;
    let mut values_rng = root.fork(3);
    let values = (0..rows * cols).map(|_| values_rng.below(alphabet_size as u64) as Symbol).collect();
    StepFunction::from_flat(Alphabet::letters(alphabet_size), row_space, col_space, values)
}

/// Like [`random_function`], with every weight a multiple of `1/denominator`.
pub fn random_grid_function(
    rows: usize,
    cols: usize,
    alphabet_size: usize,
    denominator: u64,
    seed: u64,
) -> Result<StepFunction> {
    if rows == 0 || cols == 0 || alphabet_size == 0 {
        return Err(Error::InvalidParameter("all sizes must be >= 1".into()));
    }
    if alphabet_size > usize::from(Symbol::MAX) + 1 {
        return Err(Error::AlphabetTooLarge(alphabet_size));
    }
    let root = SplitMix64::new(seed);
    let row_space = random_grid_weights(rows, denominator, &mut root.fork(1))?;
    let col_space = random_grid_weights(cols, denominator, &mut root.fork(2))?;
    let mut values_rng = root.fork(3);
    let values = (0..rows * cols).map(|_| values_rng.below(alphabet_size as u64) as Symbol).collect();
    StepFunction::from_flat(Alphabet::letters(alphabet_size), row_space, col_space, values)
}

/// A uniformly random permutation that maps every atom to one of equal weight.
pub fn random_weight_preserving_permutation(space: &WeightedSpace, rng: &mut SplitMix64) -> Permutation {
    let mut groups: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
    for (i, w) in space.weights().iter().enumerate() {
        groups.entry(w).or_default().push(i);
    }
    let mut images = alloc::vec![0; space.size()];
    for members in groups.values() {
        let mut targets = members.clone();
        rng.shuffle(&mut targets);
        for (&i, &t) in members.iter().zip(&targets) {
            images[i] = t;
        }
    }
    Permutation::new(images).expect("shuffled within groups")
}

/// Every function on uniform `rows x cols` spaces over the first
/// `alphabet_size` letters, in lexicographic row-major order.
pub fn exhaustive_family(
    rows: usize,
    cols: usize,
    alphabet_size: usize,
) -> impl Iterator<Item = StepFunction> {
    let cells = rows * cols;
    let total = (alphabet_size as u64).checked_pow(cells as u32).expect("family too large");
    let alphabet = Alphabet::letters(alphabet_size);
    (0..total).map(move |mut code| {
        let mut values = alloc::vec![0 as Symbol; cells];
        for v in values.iter_mut().rev() {
            *v = (code % alphabet_size as u64) as Symbol;
            code /= alphabet_size as u64;
        }
        StepFunction::from_flat(
            alphabet.clone(),
            WeightedSpace::uniform(rows),
            WeightedSpace::uniform(cols),
            values,
        )
        .expect("in range")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_symbol_gives_constant() {
        let f = random_function(2, 2, 1, 4, 9).unwrap();
        assert!(f.values().iter().all(|&s| s == 0));
    }

    #[test]
    fn deterministic_for_seed() {
        assert_eq!(random_function(3, 4, 3, 8, 5).unwrap(), random_function(3, 4, 3, 8, 5).unwrap());
        assert_ne!(random_function(3, 4, 3, 8, 5).unwrap(), random_function(3, 4, 3, 8, 6).unwrap());
    }

    #[test]
    fn weights_respect_denominator_bound() {
        for seed in 0..200 {
            let f = random_function(3, 3, 2, 4, seed).unwrap();
            for w in f.row_space().weights().iter().chain(f.col_space().weights()) {
                assert!(*w.denom() <= BigInt::from(4));
            }
        }
        assert!(random_function(5, 1, 2, 4, 0).is_err());
        assert!(random_function(0, 1, 2, 4, 0).is_err());
    }

    #[test]
    fn grid_weights() {
        for seed in 0..50 {
            let f = random_grid_function(5, 3, 2, 8, seed).unwrap();
            for w in f.row_space().weights().iter().chain(f.col_space().weights()) {
                assert!((w * Rational::from_integer(8.into())).is_integer());
            }
        }
        assert!(random_grid_function(9, 1, 2, 8, 0).is_err());
    }

    #[test]
    fn exhaustive_family_size() {
        let fam: Vec<_> = exhaustive_family(3, 3, 2).collect();
        assert_eq!(fam.len(), 512);
        assert_eq!(fam[1].value(2, 2), 1);
        assert_eq!(fam[256].value(0, 0), 1);
    }

    #[test]
    fn weight_preserving_permutation_preserves_weights() {
        let mut rng = SplitMix64::new(3);
        let f = random_function(6, 2, 2, 8, 11).unwrap();
        for _ in 0..20 {
            let p = random_weight_preserving_permutation(f.row_space(), &mut rng);
            for i in 0..6 {
                assert_eq!(f.row_space().weight(i), f.row_space().weight(p.image(i)));
            }
        }
    }
}
