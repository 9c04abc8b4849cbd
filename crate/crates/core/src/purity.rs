//! Purity, the pure quotient, and stabilizers under relabelings.
//!
//! A function is pure when no two rows and no two columns coincide. On a
//! finite space with positive weights every bijection is non-singular, so
//! the quasi-invariant stabilizer is the set of all pairs `(σ, τ)` of
//! bijections with `f(σ x, τ y) = f(x, y)`; restricting to weight-preserving
//! pairs gives the measure-preserving stabilizer.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::canonical::{refine_from, Mass};
use crate::model::apply_permutations;
use crate::{Caps, Error, Permutation, Rational, Result, StepFunction, Symbol, WeightedSpace};

/// Rows (and columns) grouped by exact equality of their values.
///
/// Classes are listed by smallest member; members ascend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityPartition {
    pub row_classes: Vec<Vec<usize>>,
    pub col_classes: Vec<Vec<usize>>,
}

impl PurityPartition {
    pub fn is_discrete(&self) -> bool {
        self.row_classes.iter().chain(&self.col_classes).all(|c| c.len() == 1)
    }
}

fn group_identical<'a>(items: impl Iterator<Item = (usize, Vec<Symbol>)> + 'a) -> Vec<Vec<usize>> {
    let mut index: BTreeMap<Vec<Symbol>, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, key) in items {
        match index.get(&key) {
            Some(&c) => classes[c].push(i),
            None => {
                index.insert(key, classes.len());
                classes.push(alloc::vec![i]);
            }
        }
    }
    classes
}

pub fn purity_partition(f: &StepFunction) -> PurityPartition {
    PurityPartition {
        row_classes: group_identical((0..f.n_rows()).map(|i| (i, f.row(i).to_vec()))),
        col_classes: group_identical((0..f.n_cols()).map(|j| (j, f.column(j)))),
    }
}

pub fn is_pure(f: &StepFunction) -> bool {
    purity_partition(f).is_discrete()
}

/// The pure quotient together with the class of every original atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub function: StepFunction,
    pub partition: PurityPartition,
    pub row_class: Vec<usize>,
    pub col_class: Vec<usize>,
}

/// Merges identical rows and identical columns, adding their weights.
///
/// Class `c` of the result is represented by its smallest member, so a pure
/// input comes back unchanged.
pub fn purify_with_classes(f: &StepFunction) -> Quotient {
    let partition = purity_partition(f);
    let merged = |classes: &[Vec<usize>], space: &WeightedSpace| {
        let w: Vec<Rational> = classes
            .iter()
            .map(|c| c.iter().map(|&i| space.weight(i)).fold(Rational::from_integer(0.into()), |a, b| a + b))
            .collect();
        WeightedSpace::new(w).expect("merged weights stay positive and sum to one")
    };
    let class_of = |classes: &[Vec<usize>], n: usize| {
        let mut out = alloc::vec![0; n];
        for (c, members) in classes.iter().enumerate() {
            for &i in members {
                out[i] = c;
            }
        }
        out
    };
    let mut values = Vec::with_capacity(partition.row_classes.len() * partition.col_classes.len());
    for rc in &partition.row_classes {
        for cc in &partition.col_classes {
            values.push(f.value(rc[0], cc[0]));
        }
    }
    let function = StepFunction::with_parts(
        f.alphabet().clone(),
        merged(&partition.row_classes, f.row_space()),
        merged(&partition.col_classes, f.col_space()),
        values,
    );
    Quotient {
        row_class: class_of(&partition.row_classes, f.n_rows()),
        col_class: class_of(&partition.col_classes, f.n_cols()),
        function,
        partition,
    }
}

pub fn purify(f: &StepFunction) -> StepFunction {
    purify_with_classes(f).function
}

/// Stabilizer of a function, given by generators and its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    /// Pairs `(σ, τ)` with `apply_permutations(f, σ, τ) == f`.
    pub generators: Vec<(Permutation, Permutation)>,
    pub order: BigUint,
    pub weight_preserving: bool,
}

impl SymmetryGroup {
    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }
}

/// Whether `(σ, τ)` fixes `f`, and fixes the weights too when asked.
pub fn fixes(f: &StepFunction, rows: &Permutation, cols: &Permutation, weight_preserving: bool) -> bool {
    let n = f.n_rows();
    let m = f.n_cols();
    if rows.len() != n || cols.len() != m {
        return false;
    }
    if weight_preserving
        && ((0..n).any(|i| f.row_space().weight(i) != f.row_space().weight(rows.image(i)))
            || (0..m).any(|j| f.col_space().weight(j) != f.col_space().weight(cols.image(j))))
    {
        return false;
    }
    (0..n).all(|i| {
        let ri = rows.image(i);
        (0..m).all(|j| f.value(ri, cols.image(j)) == f.value(i, j))
    })
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Splits each identical-atom class into the groups that the stabilizer can
/// permute freely: the whole class, or equal-weight parts of it.
fn free_blocks(classes: &[Vec<usize>], space: &WeightedSpace, weight_preserving: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for class in classes {
        if weight_preserving {
            let mut by_weight: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
            for &i in class {
                by_weight.entry(space.weight(i)).or_default().push(i);
            }
            out.extend(by_weight.into_values());
        } else {
            out.push(class.clone());
        }
    }
    out
}

/// What a class-level map must preserve: the member count, or the sorted
/// member weights.
fn class_types(classes: &[Vec<usize>], space: &WeightedSpace, weight_preserving: bool) -> Vec<Vec<Rational>> {
    classes
        .iter()
        .map(|c| {
            if weight_preserving {
                let mut w: Vec<Rational> = c.iter().map(|&i| space.weight(i).clone()).collect();
                w.sort();
                w
            } else {
                alloc::vec![Rational::from_integer(c.len().into())]
            }
        })
        .collect()
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("present")).collect()
}

/// The full stabilizer of `f`.
///
/// Identical rows (and columns) of the same type can be permuted freely; the
/// rest of the group acts on the pure quotient, whose automorphisms are
/// enumerated by backtracking over row images pruned by a stable coloring
/// and by the column multisets already forced. The order is the product of
/// the quotient group order and the free block factorials.
pub fn symmetry_group(f: &StepFunction, weight_preserving: bool) -> SymmetryGroup {
    let q = purify_with_classes(f);
    let qf = &q.function;
    let row_types = rank(&class_types(&q.partition.row_classes, f.row_space(), weight_preserving));
    let col_types = rank(&class_types(&q.partition.col_classes, f.col_space(), weight_preserving));

    let quotient_elements = quotient_automorphisms(qf, &row_types, &col_types);
    let quotient_gens = greedy_generators(&quotient_elements);

    let row_blocks = free_blocks(&q.partition.row_classes, f.row_space(), weight_preserving);
    let col_blocks = free_blocks(&q.partition.col_classes, f.col_space(), weight_preserving);

    let mut order = BigUint::from(quotient_elements.len());
    for b in row_blocks.iter().chain(&col_blocks) {
        order *= factorial(b.len());
    }

    let mut generators = Vec::new();
    for (sr, sc) in &quotient_gens {
        let rows = lift(sr, &q.partition.row_classes, f.row_space());
        let cols = lift(sc, &q.partition.col_classes, f.col_space());
        generators.push((rows, cols));
    }
    for b in &row_blocks {
        for w in b.windows(2) {
            generators.push((Permutation::transposition(f.n_rows(), w[0], w[1]), Permutation::identity(f.n_cols())));
        }
    }
    for b in &col_blocks {
        for w in b.windows(2) {
            generators.push((Permutation::identity(f.n_rows()), Permutation::transposition(f.n_cols(), w[0], w[1])));
        }
    }
    debug_assert!(generators.iter().all(|(r, c)| fixes(f, r, c, weight_preserving)));
    SymmetryGroup { generators, order, weight_preserving }
}

/// Lifts a class-level map to atoms, pairing members in (weight, index)
/// order. Classes related by the map have the same type, so this is a
/// bijection that respects weights whenever the types include them.
fn lift(class_map: &Permutation, classes: &[Vec<usize>], space: &WeightedSpace) -> Permutation {
    let sorted = |c: &Vec<usize>| {
        let mut m = c.clone();
        m.sort_by(|&a, &b| space.weight(a).cmp(space.weight(b)).then(a.cmp(&b)));
        m
    };
    let mut images = alloc::vec![0; space.size()];
    for (c, members) in classes.iter().enumerate() {
        let target = &classes[class_map.image(c)];
        for (&a, &b) in sorted(members).iter().zip(sorted(target).iter()) {
            images[a] = b;
        }
    }
    Permutation::new(images).expect("classes of equal size")
}

/// All type-preserving automorphisms of a pure function, as (row, column)
/// pairs, in backtracking order (identity first).
fn quotient_automorphisms(q: &StepFunction, row_types: &[usize], col_types: &[usize]) -> Vec<(Permutation, Permutation)> {
    let coloring = refine_from(&[q], &[row_types.to_vec()], &[col_types.to_vec()], Mass::Counting)
        .pop()
        .expect("one coloring");
    let n = q.n_rows();
    let mut out = Vec::new();
    let mut assigned: Vec<usize> = Vec::with_capacity(n);
    let mut used = alloc::vec![false; n];
    automorphism_search(q, &coloring.row_colors, &coloring.col_colors, &mut assigned, &mut used, &mut out);
    out
}

/// Column keys `(color, values on the assigned rows)`, sorted, for the
/// source side and for the image side.
fn column_keys(q: &StepFunction, col_colors: &[usize], rows: impl Iterator<Item = usize> + Clone) -> Vec<(usize, Vec<Symbol>, usize)> {
    let mut keys: Vec<(usize, Vec<Symbol>, usize)> = (0..q.n_cols())
        .map(|j| (col_colors[j], rows.clone().map(|i| q.value(i, j)).collect(), j))
        .collect();
    keys.sort();
    keys
}

fn automorphism_search(
    q: &StepFunction,
    row_colors: &[usize],
    col_colors: &[usize],
    assigned: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<(Permutation, Permutation)>,
) {
    let depth = assigned.len();
    let source = column_keys(q, col_colors, 0..depth);
    let image = column_keys(q, col_colors, assigned.iter().copied());
    if source.iter().zip(&image).any(|(a, b)| (a.0, &a.1) != (b.0, &b.1)) {
        return;
    }
    if depth == q.n_rows() {
        // Columns of a pure function are distinct, so the match is unique.
        let mut cols = alloc::vec![0; q.n_cols()];
        for (a, b) in source.iter().zip(&image) {
            cols[a.2] = b.2;
        }
        out.push((
            Permutation::new(assigned.clone()).expect("bijection"),
            Permutation::new(cols).expect("bijection"),
        ));
        return;
    }
    for t in 0..q.n_rows() {
        if used[t] || row_colors[t] != row_colors[depth] {
            continue;
        }
        used[t] = true;
        assigned.push(t);
        automorphism_search(q, row_colors, col_colors, assigned, used, out);
        assigned.pop();
        used[t] = false;
    }
}

/// Picks elements (in order) that are not yet generated by earlier picks.
fn greedy_generators(elements: &[(Permutation, Permutation)]) -> Vec<(Permutation, Permutation)> {
    let mut gens: Vec<(Permutation, Permutation)> = Vec::new();
    let Some((r0, c0)) = elements.first() else {
        return gens;
    };
    let mut closure: BTreeSet<(Permutation, Permutation)> = BTreeSet::new();
    closure.insert((Permutation::identity(r0.len()), Permutation::identity(c0.len())));
    for e in elements {
        if closure.contains(e) {
            continue;
        }
        gens.push(e.clone());
        closure = group_closure(&gens, r0.len(), c0.len());
        if closure.len() == elements.len() {
            break;
        }
    }
    gens
}

/// Every element of the group generated by `generators` (breadth-first).
pub fn group_closure(
    generators: &[(Permutation, Permutation)],
    n_rows: usize,
    n_cols: usize,
) -> BTreeSet<(Permutation, Permutation)> {
    let id = (Permutation::identity(n_rows), Permutation::identity(n_cols));
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some((r, c)) = queue.pop_front() {
        for (gr, gc) in generators {
            let next = (gr.after(&r), gc.after(&c));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

pub fn is_totally_pure(f: &StepFunction) -> bool {
    symmetry_group(f, false).is_trivial()
}

/// Calls `visit` with every permutation of `0..n`.
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&Permutation)) {
    fn go(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&Permutation)) {
        if k == items.len() {
            visit(&Permutation::new(items.clone()).expect("bijection"));
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(items, k + 1, visit);
            items.swap(k, i);
        }
    }
    go(&mut (0..n).collect(), 0, &mut visit);
}

pub(crate) fn check_factorial_cap(n: usize, m: usize, caps: &Caps) -> Result<()> {
    let product = factorial(n) * factorial(m);
    let limit = BigUint::from(caps.max_factorial_product);
    if product > limit {
        return Err(Error::CapExceeded {
            what: "brute-force permutation pairs",
            required: u64::try_from(&product).unwrap_or(u64::MAX),
            limit: caps.max_factorial_product,
        });
    }
    Ok(())
}

/// Every pair `(σ, τ)` fixing `f`, by exhaustive enumeration.
pub fn stabilizer_brute_force(
    f: &StepFunction,
    weight_preserving: bool,
    caps: &Caps,
) -> Result<Vec<(Permutation, Permutation)>> {
    check_factorial_cap(f.n_rows(), f.n_cols(), caps)?;
    let mut cols = Vec::new();
    for_each_permutation(f.n_cols(), |c| cols.push(c.clone()));
    let mut out = Vec::new();
    for_each_permutation(f.n_rows(), |r| {
        for c in &cols {
            if fixes(f, r, c, weight_preserving) {
                out.push((r.clone(), c.clone()));
            }
        }
    });
    Ok(out)
}

/// The stabilizer by exhaustive enumeration; every element is listed as a
/// generator.
pub fn symmetry_group_brute_force(f: &StepFunction, weight_preserving: bool, caps: &Caps) -> Result<SymmetryGroup> {
    let elements = stabilizer_brute_force(f, weight_preserving, caps)?;
    Ok(SymmetryGroup {
        order: BigUint::from(elements.len()),
        generators: elements.into_iter().filter(|(r, c)| !(r.is_identity() && c.is_identity())).collect(),
        weight_preserving,
    })
}

/// Reassembles `f` from its quotient: used to check that purification only
/// merges identical atoms.
pub fn expand_quotient(q: &Quotient, original_rows: &WeightedSpace, original_cols: &WeightedSpace) -> Result<StepFunction> {
    let values = (0..original_rows.size())
        .flat_map(|i| (0..original_cols.size()).map(move |j| (i, j)))
        .map(|(i, j)| q.function.value(q.row_class[i], q.col_class[j]))
        .collect();
    StepFunction::from_flat(q.function.alphabet().clone(), original_rows.clone(), original_cols.clone(), values)
}

/// `apply_permutations` restricted to stabilizer checking of a whole list.
pub fn all_fix(f: &StepFunction, pairs: &[(Permutation, Permutation)]) -> Result<bool> {
    for (r, c) in pairs {
        if apply_permutations(f, r, c)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dup, flip, konst, tri};
    use crate::generate::{exhaustive_family, random_function};
    use crate::rational::ratio;
    use alloc::vec;

    #[test]
    fn partitions() {
        let p = purity_partition(&flip());
        assert_eq!(p.row_classes, vec![vec![0], vec![1]]);
        assert_eq!(p.col_classes, vec![vec![0], vec![1]]);
        let p = purity_partition(&konst());
        assert_eq!(p.row_classes, vec![vec![0, 1]]);
        assert_eq!(p.col_classes, vec![vec![0, 1]]);
        assert_eq!(purity_partition(&dup()).row_classes, vec![vec![0, 1], vec![2]]);
        assert!(is_pure(&flip()));
        assert!(!is_pure(&konst()));
        assert!(!is_pure(&dup()));
    }

    #[test]
    fn purify_examples() {
        let c = purify(&konst());
        assert_eq!((c.n_rows(), c.n_cols()), (1, 1));
        assert_eq!(c.row_space().weights(), &[ratio(1, 1)]);
        assert_eq!(purify(&dup()), flip());
        assert_eq!(purify(&flip()), flip());
    }

    #[test]
    fn purify_is_idempotent_and_pure() {
        for seed in 0..200 {
            let f = random_function(4, 4, 2, 8, seed).unwrap();
            let q = purify_with_classes(&f);
            assert!(is_pure(&q.function));
            assert_eq!(purify(&q.function), q.function);
            assert_eq!(
                expand_quotient(&q, f.row_space(), f.col_space()).unwrap().values(),
                f.values()
            );
        }
    }

    #[test]
    fn symmetry_examples() {
        let g = symmetry_group(&flip(), false);
        assert_eq!(g.order, BigUint::from(2u32));
        let swap = Permutation::transposition(2, 0, 1);
        assert_eq!(g.generators, vec![(swap.clone(), swap)]);
        assert!(symmetry_group(&tri(), false).is_trivial());
        assert_eq!(symmetry_group(&konst(), false).order, BigUint::from(4u32));
        assert!(is_totally_pure(&tri()));
        assert!(!is_totally_pure(&flip()));
        assert!(!is_totally_pure(&konst()));
    }

    #[test]
    fn brute_force_counts() {
        let caps = Caps::default();
        assert_eq!(stabilizer_brute_force(&flip(), false, &caps).unwrap().len(), 2);
        assert_eq!(stabilizer_brute_force(&tri(), false, &caps).unwrap().len(), 1);
        assert_eq!(stabilizer_brute_force(&konst(), false, &caps).unwrap().len(), 4);
    }

    #[test]
    fn weight_preserving_group_is_smaller() {
        // DUP rows 1,2 are identical with equal weight; merged quotient is FLIP
        // with weights (1/2,1/2) and swapping it needs weight 1/2 <-> 1/4+1/4.
        let g = symmetry_group(&dup(), true);
        let brute = stabilizer_brute_force(&dup(), true, &Caps::default()).unwrap();
        assert_eq!(g.order, BigUint::from(brute.len()));
        let g_any = symmetry_group(&dup(), false);
        let brute_any = stabilizer_brute_force(&dup(), false, &Caps::default()).unwrap();
        assert_eq!(g_any.order, BigUint::from(brute_any.len()));
    }

    #[test]
    fn agrees_with_enumeration_on_all_small_functions() {
        let caps = Caps::default();
        for (rows, cols) in [(1, 3), (2, 2), (2, 3), (3, 2), (3, 3)] {
            for f in exhaustive_family(rows, cols, 2) {
                for wp in [false, true] {
                    let g = symmetry_group(&f, wp);
                    let brute = stabilizer_brute_force(&f, wp, &caps).unwrap();
                    assert_eq!(g.order, BigUint::from(brute.len()), "{f:?}");
                    let closure = group_closure(&g.generators, rows, cols);
                    assert_eq!(closure.len(), brute.len());
                    assert!(closure.iter().all(|e| brute.contains(e)));
                }
            }
        }
    }

    #[test]
    fn weighted_agreement_on_random_functions() {
        let caps = Caps::default();
        for seed in 0..300 {
            let f = random_function(3, 4, 2, 6, seed).unwrap();
            for wp in [false, true] {
                let g = symmetry_group(&f, wp);
                let brute = stabilizer_brute_force(&f, wp, &caps).unwrap();
                assert_eq!(g.order, BigUint::from(brute.len()), "seed {seed}");
                if wp {
                    assert!(all_fix(&f, &g.generators).unwrap());
                }
                assert!(g.generators.iter().all(|(r, c)| fixes(&f, r, c, wp)));
                assert_eq!(group_closure(&g.generators, 3, 4).len(), brute.len());
            }
        }
    }

    /// Statement 1, finite form: pure iff no nontrivial one-sided stabilizer.
    #[test]
    fn purity_is_trivial_one_sided_stabilizer() {
        let caps = Caps::default();
        for (rows, cols) in [(2, 2), (2, 3), (3, 3)] {
            for f in exhaustive_family(rows, cols, 2) {
                let one_sided = stabilizer_brute_force(&f, false, &caps)
                    .unwrap()
                    .into_iter()
                    .filter(|(r, c)| r.is_identity() != c.is_identity())
                    .count();
                assert_eq!(is_pure(&f), one_sided == 0);
                if is_totally_pure(&f) {
                    assert!(is_pure(&f));
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let caps = Caps { max_factorial_product: 10, ..Caps::default() };
        assert!(matches!(
            stabilizer_brute_force(&random_function(3, 3, 2, 3, 0).unwrap(), false, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }
}
