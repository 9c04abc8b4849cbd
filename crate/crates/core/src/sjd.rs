//! Systems of joint distributions of sections.
//!
//! For rows `x_1..x_n` the joint distribution `α_{x_1..x_n}` is the law of
//! the vector `(f(x_1,y), .., f(x_n,y))` when `y` is drawn from the column
//! measure. The family over all tuples and all `n` is the row-side system of
//! joint distributions; the column side is defined symmetrically. Everything
//! here is computed for the row side on `f.oriented(axis)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::model::apply_permutations;
use crate::rng::SplitMix64;
use crate::{
    Axis, Caps, Distribution, Error, Permutation, Rational, Result, StepFunction, Symbol,
    WeightedSpace,
};

fn check_index(f: &StepFunction, axis: Axis, index: usize) -> Result<()> {
    let n = f.space(axis).size();
    if index >= n {
        return Err(Error::InvalidParameter(alloc::format!(
            "index {index} out of range for a space of {n} atoms"
        )));
    }
    Ok(())
}

/// Law of the section through `index`: for a row `x`, the mass of `a` is the
/// total column weight of `{y : f(x,y) = a}`.
pub fn section_distribution(f: &StepFunction, axis: Axis, index: usize) -> Result<Distribution> {
    joint_distribution(f, axis, &[index])
}

/// Joint law of the sections through `tuple` (repetitions allowed).
pub fn joint_distribution(f: &StepFunction, axis: Axis, tuple: &[usize]) -> Result<Distribution> {
    if tuple.is_empty() {
        return Err(Error::InvalidParameter("tuple must not be empty".into()));
    }
    for &i in tuple {
        check_index(f, axis, i)?;
    }
    Ok(joint_unchecked(f, axis, tuple))
}

pub(crate) fn joint_unchecked(f: &StepFunction, axis: Axis, tuple: &[usize]) -> Distribution {
    let (other, value): (&WeightedSpace, &dyn Fn(usize, usize) -> Symbol) = match axis {
        Axis::Rows => (f.col_space(), &|x, y| f.value(x, y)),
        Axis::Columns => (f.row_space(), &|x, y| f.value(y, x)),
    };
    let mut support: BTreeMap<Vec<Symbol>, Rational> = BTreeMap::new();
    for (y, w) in other.weights().iter().enumerate() {
        let key: Vec<Symbol> = tuple.iter().map(|&x| value(x, y)).collect();
        *support.entry(key).or_insert_with(Rational::zero) += w;
    }
    Distribution::from_support_unchecked(tuple.len(), support)
}

/// Table of joint distributions at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SjdSignature {
    pub axis: Axis,
    pub level: usize,
    pub table: BTreeMap<Vec<usize>, Distribution>,
    /// `true` when the table covers a seeded sample of tuples only.
    pub sampled: bool,
}

fn table_size(n: usize, level: usize) -> Option<u64> {
    (n as u64).checked_pow(u32::try_from(level).ok()?)
}

fn check_caps(f: &StepFunction, axis: Axis, level: usize, caps: &Caps) -> Result<()> {
    if level == 0 {
        return Err(Error::InvalidParameter("signature level must be >= 1".into()));
    }
    if level > caps.max_level {
        return Err(Error::CapExceeded {
            what: "signature level",
            required: level as u64,
            limit: caps.max_level as u64,
        });
    }
    let entries = table_size(f.space(axis).size(), level).unwrap_or(u64::MAX);
    if entries > caps.max_table_entries {
        return Err(Error::CapExceeded {
            what: "signature table entries",
            required: entries,
            limit: caps.max_table_entries,
        });
    }
    Ok(())
}

/// Calls `visit` with every `level`-tuple over `0..n` in lexicographic order.
pub(crate) fn for_each_tuple(n: usize, level: usize, mut visit: impl FnMut(&[usize])) {
    let mut tuple = alloc::vec![0usize; level];
    loop {
        visit(&tuple);
        let mut k = level;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < n {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// Full level-`level` table: every ordered tuple, with repetition.
pub fn sjd_signature(f: &StepFunction, axis: Axis, level: usize, caps: &Caps) -> Result<SjdSignature> {
    check_caps(f, axis, level, caps)?;
    let mut table = BTreeMap::new();
    for_each_tuple(f.space(axis).size(), level, |t| {
        table.insert(t.to_vec(), joint_unchecked(f, axis, t));
    });
    Ok(SjdSignature { axis, level, table, sampled: false })
}

/// Table over `samples` uniformly drawn tuples, for levels beyond the caps.
pub fn sjd_signature_sampled(
    f: &StepFunction,
    axis: Axis,
    level: usize,
    samples: usize,
    seed: u64,
) -> Result<SjdSignature> {
    if level == 0 || samples == 0 {
        return Err(Error::InvalidParameter("level and sample count must be >= 1".into()));
    }
    let n = f.space(axis).size() as u64;
    let mut rng = SplitMix64::new(seed);
    let mut table = BTreeMap::new();
    for _ in 0..samples {
        let t: Vec<usize> = (0..level).map(|_| rng.below(n) as usize).collect();
        table.entry(t).or_insert_with_key(|t| joint_unchecked(f, axis, t));
    }
    Ok(SjdSignature { axis, level, table, sampled: true })
}

/// Checks that dropping any coordinate of a level-`n` joint law gives the
/// level-`n-1` law of the shortened tuple, with exact equality.
///
/// Tuples whose shortened form is missing from a sampled lower table are
/// skipped; a missing entry in a full table fails the check.
pub fn check_coherence(upper: &SjdSignature, lower: &SjdSignature) -> Result<bool> {
    if upper.axis != lower.axis {
        return Err(Error::AxisMismatch);
    }
    if upper.level != lower.level + 1 {
        return Err(Error::LevelMismatch { expected: lower.level + 1, found: upper.level });
    }
    for (tuple, dist) in &upper.table {
        if dist.arity() != upper.level {
            return Ok(false);
        }
        for i in 0..tuple.len() {
            let mut reduced = tuple.clone();
            reduced.remove(i);
            match lower.table.get(&reduced) {
                Some(expected) => {
                    if dist.marginalize(i)? != *expected {
                        return Ok(false);
                    }
                }
                None if lower.sampled => {}
                None => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// The set `C_B = {x : some (f(x,y_1),..,f(x,y_n)) lies in B}` and its
/// measure, read literally: `x` belongs iff some pattern in `B` uses only
/// values that occur in the section through `x`.
///
/// On atomic spaces this depends only on the value sets of the sections and
/// is weaker than the joint distributions.
pub fn c_set(
    f: &StepFunction,
    axis: Axis,
    patterns: &BTreeSet<Vec<Symbol>>,
) -> Result<(Vec<usize>, Rational)> {
    let arity = match patterns.iter().next() {
        Some(p) => p.len(),
        None => return Err(Error::InvalidParameter("pattern set must be nonempty".into())),
    };
    if arity == 0 || patterns.iter().any(|p| p.len() != arity) {
        return Err(Error::InvalidParameter("patterns must share one positive arity".into()));
    }
    let g = f.oriented(axis);
    let mut members = Vec::new();
    let mut measure = Rational::zero();
    for x in 0..g.n_rows() {
        let values: BTreeSet<Symbol> = g.row(x).iter().copied().collect();
        if patterns.iter().any(|p| p.iter().all(|s| values.contains(s))) {
            members.push(x);
            measure += g.row_space().weight(x);
        }
    }
    Ok((members, measure))
}

/// Level-by-level sorted multisets of `(atom weights, joint law)` pairs, one
/// per ordered tuple.
///
/// Relabeling the axis permutes tuples without changing either component, so
/// equal systems give equal fingerprints. At a level of at least the number
/// of atoms the converse holds for pure functions: a tuple listing every atom
/// once determines the function up to relabeling.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SjdFingerprint {
    pub axis: Axis,
    pub levels: Vec<Vec<(Vec<Rational>, Distribution)>>,
}

pub fn sjd_fingerprint(
    f: &StepFunction,
    axis: Axis,
    max_level: usize,
    caps: &Caps,
) -> Result<SjdFingerprint> {
    let weights = f.space(axis).weights();
    let mut levels = Vec::with_capacity(max_level);
    for level in 1..=max_level {
        check_caps(f, axis, level, caps)?;
        let mut entries = Vec::new();
        for_each_tuple(weights.len(), level, |t| {
            let w = t.iter().map(|&i| weights[i].clone()).collect();
            entries.push((w, joint_unchecked(f, axis, t)));
        });
        entries.sort();
        levels.push(entries);
    }
    Ok(SjdFingerprint { axis, levels })
}

/// Whether `f` and `g` have the same joint-distribution system on `axis` at
/// every level up to `max_level`, up to a weight-respecting matching of
/// tuples.
pub fn sjd_equal(
    f: &StepFunction,
    g: &StepFunction,
    axis: Axis,
    max_level: usize,
    caps: &Caps,
) -> Result<bool> {
    if f.alphabet() != g.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(sjd_fingerprint(f, axis, max_level, caps)? == sjd_fingerprint(g, axis, max_level, caps)?)
}

/// A weight-preserving column map `t` with `f2[i][j] = f1[i][t(j)]` for all
/// `i, j`, if one exists.
///
/// Columns are matched greedily within classes of equal (column, weight),
/// which is exact: any two columns in one class are interchangeable.
pub fn find_column_transport(f1: &StepFunction, f2: &StepFunction) -> Result<Option<Permutation>> {
    if f1.alphabet() != f2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if f1.n_rows() != f2.n_rows() || f1.n_cols() != f2.n_cols() {
        return Err(Error::DimensionMismatch {
            what: "transport spaces",
            expected: f1.n_rows() * f1.n_cols(),
            found: f2.n_rows() * f2.n_cols(),
        });
    }
    if f1.row_space() != f2.row_space() || f1.col_space() != f2.col_space() {
        return Err(Error::InvalidParameter("transport needs functions on the same spaces".into()));
    }
    let mut pool: BTreeMap<(Vec<Symbol>, &Rational), Vec<usize>> = BTreeMap::new();
    for j in (0..f1.n_cols()).rev() {
        pool.entry((f1.column(j), f1.col_space().weight(j))).or_default().push(j);
    }
    let mut images = Vec::with_capacity(f2.n_cols());
    for j in 0..f2.n_cols() {
        match pool.get_mut(&(f2.column(j), f2.col_space().weight(j))).and_then(Vec::pop) {
            Some(t) => images.push(t),
            None => return Ok(None),
        }
    }
    let t = Permutation::new(images)?;
    debug_assert_eq!(apply_permutations(f1, &Permutation::identity(f1.n_rows()), &t.inverse())?, *f2);
    Ok(Some(t))
}

/// Pushforward of the `axis` measure under `x -> law of the section at x`.
pub fn section_pushforward(f: &StepFunction, axis: Axis) -> BTreeMap<Distribution, Rational> {
    let mut out: BTreeMap<Distribution, Rational> = BTreeMap::new();
    for (x, w) in f.space(axis).weights().iter().enumerate() {
        *out.entry(joint_unchecked(f, axis, &[x])).or_insert_with(Rational::zero) += w;
    }
    out
}

/// Skew equivalence with respect to `axis`: the maps `x -> dist f(x, .)`
/// push the `axis` measure to the same measure on distributions.
pub fn skew_equivalent(f1: &StepFunction, f2: &StepFunction, axis: Axis) -> Result<bool> {
    if f1.alphabet() != f2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(section_pushforward(f1, axis) == section_pushforward(f2, axis))
}

/// An atom-level skew product `(x, y) -> (t(x), s_x(y))` carrying `f1` to
/// `f2`: `f2[t(x)][s_x(y)] = f1[x][y]` (for `axis = Rows`; transposed
/// otherwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewWitness {
    pub base: Permutation,
    pub fibers: Vec<Permutation>,
}

/// Builds a [`SkewWitness`] when one exists on atoms. Equal pushforwards do
/// not guarantee an atom-level witness when atoms of one side must be split.
pub fn skew_witness(f1: &StepFunction, f2: &StepFunction, axis: Axis) -> Result<Option<SkewWitness>> {
    if f1.alphabet() != f2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let (g1, g2) = (f1.oriented(axis), f2.oriented(axis));
    if g1.n_rows() != g2.n_rows() || g1.n_cols() != g2.n_cols() {
        return Ok(None);
    }
    // Rows match when they carry the same weight and the same multiset of
    // (value, column weight) pairs.
    let profile = |g: &StepFunction, x: usize| {
        let mut p: Vec<(Symbol, Rational)> =
            g.row(x).iter().zip(g.col_space().weights()).map(|(&s, w)| (s, w.clone())).collect();
        p.sort();
        (g.row_space().weight(x).clone(), p)
    };
    let mut pool: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for x in (0..g2.n_rows()).rev() {
        pool.entry(profile(&g2, x)).or_default().push(x);
    }
    let mut base = Vec::with_capacity(g1.n_rows());
    let mut fibers = Vec::with_capacity(g1.n_rows());
    for x in 0..g1.n_rows() {
        let Some(tx) = pool.get_mut(&profile(&g1, x)).and_then(Vec::pop) else {
            return Ok(None);
        };
        let mut cols: BTreeMap<(Symbol, &Rational), Vec<usize>> = BTreeMap::new();
        for y in (0..g2.n_cols()).rev() {
            cols.entry((g2.value(tx, y), g2.col_space().weight(y))).or_default().push(y);
        }
        let mut images = Vec::with_capacity(g1.n_cols());
        for y in 0..g1.n_cols() {
            let Some(sy) = cols.get_mut(&(g1.value(x, y), g1.col_space().weight(y))).and_then(Vec::pop)
            else {
                return Ok(None);
            };
            images.push(sy);
        }
        base.push(tx);
        fibers.push(Permutation::new(images)?);
    }
    let witness = SkewWitness { base: Permutation::new(base)?, fibers };
    debug_assert!(verify_skew_witness(&g1, &g2, &witness));
    Ok(Some(witness))
}

/// Row-oriented check of a skew witness.
pub fn verify_skew_witness(g1: &StepFunction, g2: &StepFunction, w: &SkewWitness) -> bool {
    (0..g1.n_rows()).all(|x| {
        let tx = w.base.image(x);
        g1.row_space().weight(x) == g2.row_space().weight(tx)
            && (0..g1.n_cols()).all(|y| {
                let sy = w.fibers[x].image(y);
                g1.value(x, y) == g2.value(tx, sy)
                    && g1.col_space().weight(y) == g2.col_space().weight(sy)
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{flip, konst, rowsame, tri};
    use crate::generate::random_function;
    use crate::rational::ratio;
    use alloc::vec;

    fn dist1(pairs: &[(Symbol, Rational)]) -> Distribution {
        Distribution::from_masses(1, pairs.iter().map(|(s, m)| (vec![*s], m.clone()))).unwrap()
    }

    #[test]
    fn section_distributions() {
        let half = ratio(1, 2);
        assert_eq!(
            section_distribution(&flip(), Axis::Rows, 0).unwrap(),
            dist1(&[(0, half.clone()), (1, half.clone())])
        );
        assert_eq!(section_distribution(&tri(), Axis::Rows, 1).unwrap(), dist1(&[(1, ratio(1, 1))]));
        assert_eq!(section_distribution(&konst(), Axis::Columns, 1).unwrap(), Distribution::point(vec![0]));
        assert!(section_distribution(&flip(), Axis::Rows, 2).is_err());
    }

    #[test]
    fn joint_distributions_by_enumeration() {
        // Columns y1, y2 of FLIP read off rows (1,2): (a,b) and (b,a).
        let d = joint_distribution(&flip(), Axis::Rows, &[0, 1]).unwrap();
        assert_eq!(d.mass(&[0, 1]), ratio(1, 2));
        assert_eq!(d.mass(&[1, 0]), ratio(1, 2));
        assert_eq!(d.support().len(), 2);
        let d = joint_distribution(&flip(), Axis::Rows, &[0, 0]).unwrap();
        assert_eq!(d.mass(&[0, 0]), ratio(1, 2));
        assert_eq!(d.mass(&[1, 1]), ratio(1, 2));
        let f = random_function(3, 4, 3, 8, 1).unwrap();
        for x in 0..3 {
            assert_eq!(
                joint_distribution(&f, Axis::Rows, &[x]).unwrap(),
                section_distribution(&f, Axis::Rows, x).unwrap()
            );
        }
    }

    #[test]
    fn signatures() {
        let caps = Caps::default();
        let s = sjd_signature(&flip(), Axis::Rows, 1, &caps).unwrap();
        let half = dist1(&[(0, ratio(1, 2)), (1, ratio(1, 2))]);
        assert_eq!(s.table[&vec![0]], half);
        assert_eq!(s.table[&vec![1]], half);
        let s = sjd_signature(&konst(), Axis::Rows, 2, &caps).unwrap();
        assert_eq!(s.table.len(), 4);
        assert!(s.table.values().all(|d| *d == Distribution::point(vec![0, 0])));
        let s = sjd_signature(&tri(), Axis::Rows, 1, &caps).unwrap();
        assert_eq!(s.table[&vec![0]], half);
        assert_eq!(s.table[&vec![1]], Distribution::point(vec![1]));
        assert!(matches!(
            sjd_signature(&tri(), Axis::Rows, 6, &caps),
            Err(Error::CapExceeded { .. })
        ));
        let tight = Caps { max_table_entries: 3, ..Caps::default() };
        assert!(sjd_signature(&tri(), Axis::Rows, 2, &tight).is_err());
    }

    #[test]
    fn coherence() {
        let caps = Caps::default();
        let f = flip();
        let s2 = sjd_signature(&f, Axis::Rows, 2, &caps).unwrap();
        let s1 = sjd_signature(&f, Axis::Rows, 1, &caps).unwrap();
        assert!(check_coherence(&s2, &s1).unwrap());
        let mut bad = s2.clone();
        let d = bad.table.get_mut(&vec![0, 1]).unwrap();
        *d = Distribution::from_masses(
            2,
            [(vec![0, 1], ratio(1, 3)), (vec![1, 0], ratio(2, 3))],
        )
        .unwrap();
        assert!(!check_coherence(&bad, &s1).unwrap());
        assert!(matches!(check_coherence(&s1, &s1), Err(Error::LevelMismatch { .. })));
        let c1 = sjd_signature(&f, Axis::Columns, 1, &caps).unwrap();
        assert_eq!(check_coherence(&s2, &c1), Err(Error::AxisMismatch));
    }

    #[test]
    fn sampled_signature_is_coherent_where_defined() {
        let f = random_function(6, 5, 3, 12, 4).unwrap();
        let s3 = sjd_signature_sampled(&f, Axis::Rows, 3, 40, 1).unwrap();
        let s2 = sjd_signature_sampled(&f, Axis::Rows, 2, 20, 2).unwrap();
        assert!(s3.sampled);
        assert!(check_coherence(&s3, &s2).unwrap());
    }

    #[test]
    fn c_sets() {
        let b = |ps: &[&[Symbol]]| ps.iter().map(|p| p.to_vec()).collect::<BTreeSet<_>>();
        assert_eq!(c_set(&flip(), Axis::Rows, &b(&[&[0]])).unwrap(), (vec![0, 1], ratio(1, 1)));
        assert_eq!(c_set(&tri(), Axis::Rows, &b(&[&[0]])).unwrap(), (vec![0], ratio(1, 2)));
        assert_eq!(c_set(&tri(), Axis::Rows, &b(&[&[0, 1]])).unwrap(), (vec![0], ratio(1, 2)));
        assert!(c_set(&tri(), Axis::Rows, &BTreeSet::new()).is_err());
    }

    #[test]
    fn sjd_equality() {
        let caps = Caps::default();
        let f = flip();
        let swap = Permutation::transposition(2, 0, 1);
        let id = Permutation::identity(2);
        let g = apply_permutations(&f, &swap, &id).unwrap();
        let h = apply_permutations(&f, &id, &swap).unwrap();
        for level in 1..=3 {
            for axis in [Axis::Rows, Axis::Columns] {
                assert!(sjd_equal(&f, &g, axis, level, &caps).unwrap());
                assert!(sjd_equal(&f, &h, axis, level, &caps).unwrap());
            }
        }
        assert!(!sjd_equal(&f, &tri(), Axis::Rows, 1, &caps).unwrap());
        let other = crate::generate::random_function(2, 2, 3, 4, 0).unwrap();
        assert_eq!(sjd_equal(&f, &other, Axis::Rows, 1, &caps), Err(Error::AlphabetMismatch));
    }

    /// All column maps `t` with `f2[i][j] = f1[i][t(j)]`, by enumeration.
    fn brute_transports(f1: &StepFunction, f2: &StepFunction) -> Vec<Permutation> {
        let m = f1.n_cols();
        let mut out = Vec::new();
        let mut images: Vec<usize> = (0..m).collect();
        permute_all(&mut images, 0, &mut |p| {
            let ok = (0..m).all(|j| f1.col_space().weight(p[j]) == f2.col_space().weight(j))
                && (0..f1.n_rows()).all(|i| (0..m).all(|j| f2.value(i, j) == f1.value(i, p[j])));
            if ok {
                out.push(Permutation::new(p.to_vec()).unwrap());
            }
        });
        out
    }

    fn permute_all(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute_all(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    #[test]
    fn column_transport() {
        let f = flip();
        let swap = Permutation::transposition(2, 0, 1);
        let g = apply_permutations(&f, &Permutation::identity(2), &swap).unwrap();
        assert_eq!(find_column_transport(&f, &g).unwrap(), Some(swap));
        assert_eq!(brute_transports(&f, &g).len(), 1);
        assert_eq!(find_column_transport(&f, &f).unwrap(), Some(Permutation::identity(2)));
        assert_eq!(find_column_transport(&f, &tri()).unwrap(), None);
        assert!(brute_transports(&f, &tri()).is_empty());
    }

    #[test]
    fn column_transport_agrees_with_enumeration() {
        for seed in 0..300 {
            let f1 = random_function(3, 4, 2, 4, seed).unwrap();
            let mut rng = SplitMix64::new(seed);
            let t = crate::generate::random_weight_preserving_permutation(f1.col_space(), &mut rng);
            // Half the time break the relation with a row relabeling.
            let rows = if seed % 2 == 0 {
                Permutation::identity(3)
            } else {
                crate::generate::random_weight_preserving_permutation(f1.row_space(), &mut rng)
            };
            let f2 = apply_permutations(&f1, &rows, &t).unwrap();
            let f2 = StepFunction::from_flat(
                f1.alphabet().clone(),
                f1.row_space().clone(),
                f2.col_space().clone(),
                f2.values().to_vec(),
            )
            .unwrap();
            if f2.col_space() != f1.col_space() {
                continue;
            }
            let found = find_column_transport(&f1, &f2).unwrap();
            let brute = brute_transports(&f1, &f2);
            assert_eq!(found.is_some(), !brute.is_empty(), "seed {seed}");
            if let Some(t) = found {
                assert!(brute.contains(&t));
            }
        }
    }

    #[test]
    fn skew() {
        assert!(skew_equivalent(&flip(), &rowsame(), Axis::Rows).unwrap());
        assert!(!skew_equivalent(&flip(), &tri(), Axis::Rows).unwrap());
        let f = random_function(3, 3, 3, 6, 2).unwrap();
        assert!(skew_equivalent(&f, &f, Axis::Rows).unwrap());
        assert!(skew_equivalent(&f, &f, Axis::Columns).unwrap());

        // T = id, S_{x1} = id, S_{x2} = swap.
        let w = skew_witness(&flip(), &rowsame(), Axis::Rows).unwrap().unwrap();
        assert!(w.base.is_identity());
        assert!(w.fibers[0].is_identity());
        assert_eq!(w.fibers[1], Permutation::transposition(2, 0, 1));
        assert!(verify_skew_witness(&flip(), &rowsame(), &w));
        assert!(skew_witness(&flip(), &tri(), Axis::Rows).unwrap().is_none());
    }

    #[test]
    fn tuple_enumeration_order() {
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
