//! Matrix distributions: sampling, exact corner marginals, empirical
//! measures and reconstruction.
//!
//! Sampling draws rows `x_1..x_k` and columns `y_1..y_l` independently from
//! the two weighted spaces and records `f(x_i, y_j)`. Row `i` uses the stream
//! `SplitMix64::new(seed).fork(1).fork(i)` and column `j` the stream
//! `...fork(2).fork(j)`; each takes one 64-bit draw mapped to an atom by
//! [`InverseCdf`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::purity::{self, is_totally_pure};
use crate::rng::{InverseCdf, SplitMix64};
use crate::sjd::joint_unchecked;
use crate::{Alphabet, Axis, Caps, Distribution, Error, Rational, Result, StepFunction, Symbol, WeightedSpace};

/// A `rows x cols` matrix of symbols, usually sampled from a function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledMatrix {
    alphabet: Alphabet,
    rows: usize,
    cols: usize,
    entries: Vec<Symbol>,
    pub seed: Option<u64>,
    pub source: String,
}

impl SampledMatrix {
    pub fn new(alphabet: Alphabet, rows: usize, cols: usize, entries: Vec<Symbol>, seed: Option<u64>, source: String) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("a sampled matrix needs k, l >= 1".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { what: "sampled matrix entries", expected: rows * cols, found: entries.len() });
        }
        if let Some(&s) = entries.iter().find(|&&s| usize::from(s) >= alphabet.len()) {
            return Err(Error::SymbolOutOfRange { index: usize::from(s), alphabet_len: alphabet.len() });
        }
        Ok(SampledMatrix { alphabet, rows, cols, entries, seed, source })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Symbol {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Symbol> {
        (0..self.rows).map(|i| self.entry(i, j)).collect()
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.entries
    }
}

fn draw(space: &WeightedSpace, stream: &SplitMix64, n: usize) -> Vec<usize> {
    let cdf = InverseCdf::new(space.weights());
    (0..n).map(|i| cdf.sample(&mut stream.fork(i as u64))).collect()
}

/// The sampled row and column atoms behind [`sample_matrix`].
pub fn sample_indices(f: &StepFunction, k: usize, l: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let root = SplitMix64::new(seed);
    (draw(f.row_space(), &root.fork(1), k), draw(f.col_space(), &root.fork(2), l))
}

pub fn sample_matrix(f: &StepFunction, k: usize, l: usize, seed: u64) -> Result<SampledMatrix> {
    sample_matrix_from(f, k, l, seed, String::new())
}

/// [`sample_matrix`] with a source description recorded in the result.
pub fn sample_matrix_from(f: &StepFunction, k: usize, l: usize, seed: u64, source: String) -> Result<SampledMatrix> {
    let (xs, ys) = sample_indices(f, k, l, seed);
    let entries = xs.iter().flat_map(|&x| ys.iter().map(move |&y| f.value(x, y))).collect();
    SampledMatrix::new(f.alphabet().clone(), k, l, entries, Some(seed), source)
}

fn check_pattern(f: &StepFunction, pattern: &[Vec<Symbol>]) -> Result<(usize, usize)> {
    let k = pattern.len();
    let l = pattern.first().map_or(0, Vec::len);
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("a pattern needs k, l >= 1".into()));
    }
    if let Some(r) = pattern.iter().find(|r| r.len() != l) {
        return Err(Error::DimensionMismatch { what: "pattern row", expected: l, found: r.len() });
    }
    if let Some(&s) = pattern.iter().flatten().find(|&&s| usize::from(s) >= f.alphabet().len()) {
        return Err(Error::SymbolOutOfRange { index: usize::from(s), alphabet_len: f.alphabet().len() });
    }
    Ok((k, l))
}

fn check_assignments(f: &StepFunction, k: usize, l: usize, caps: &Caps) -> Result<()> {
    let required = BigInt::from(f.n_rows()).pow(k as u32) * BigInt::from(f.n_cols()).pow(l as u32);
    if required > BigInt::from(caps.max_assignments) {
        return Err(Error::CapExceeded {
            what: "marginal assignments",
            required: required.to_u64().unwrap_or(u64::MAX),
            limit: caps.max_assignments,
        });
    }
    Ok(())
}

/// Calls `visit` with every `k`-tuple of row atoms and its product weight.
fn for_each_weighted_tuple(space: &WeightedSpace, k: usize, mut visit: impl FnMut(&[usize], &Rational)) {
    let n = space.size();
    let mut tuple = alloc::vec![0usize; k];
    let mut prefix: Vec<Rational> = Vec::with_capacity(k + 1);
    prefix.push(Rational::from_integer(1.into()));
    for d in 0..k {
        let w = &prefix[d] * space.weight(0);
        prefix.push(w);
    }
    loop {
        visit(&tuple, &prefix[k]);
        let mut d = k;
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            tuple[d] += 1;
            if tuple[d] < n {
                break;
            }
            tuple[d] = 0;
        }
        for e in d..k {
            prefix[e + 1] = &prefix[e] * space.weight(tuple[e]);
        }
    }
}

/// Probability that the top-left corner of the random matrix equals
/// `pattern`.
pub fn exact_pattern_marginal(f: &StepFunction, pattern: &[Vec<Symbol>], caps: &Caps) -> Result<Rational> {
    let (k, l) = check_pattern(f, pattern)?;
    check_assignments(f, k, l, caps)?;
    let mut total = Rational::zero();
    for_each_weighted_tuple(f.row_space(), k, |xs, w| {
        // Column j of the pattern is matched by the mass of y with f(x_i, y) = P[i][j].
        let mut product = w.clone();
        for j in 0..l {
            let mut q = Rational::zero();
            for y in 0..f.n_cols() {
                if xs.iter().enumerate().all(|(i, &x)| f.value(x, y) == pattern[i][j]) {
                    q += f.col_space().weight(y);
                }
            }
            if q.is_zero() {
                return;
            }
            product *= q;
        }
        total += product;
    });
    Ok(total)
}

/// All nonzero `k x l` corner probabilities, keyed by the row-major pattern.
///
/// Smaller corners are marginals of this table.
pub fn corner_table(f: &StepFunction, k: usize, l: usize, caps: &Caps) -> Result<BTreeMap<Vec<Symbol>, Rational>> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("corner sizes must be >= 1".into()));
    }
    check_assignments(f, k, l, caps)?;
    let mut table: BTreeMap<Vec<Symbol>, Rational> = BTreeMap::new();
    for_each_weighted_tuple(f.row_space(), k, |xs, w| {
        // Columns are i.i.d. given the rows, each with law joint(xs).
        let joint: Vec<(Vec<Symbol>, Rational)> =
            joint_unchecked(f, Axis::Rows, xs).support().iter().map(|(t, p)| (t.clone(), p.clone())).collect();
        let mut choice = alloc::vec![0usize; l];
        loop {
            let mut p = w.clone();
            let mut cells = alloc::vec![0 as Symbol; k * l];
            for (j, &c) in choice.iter().enumerate() {
                p *= &joint[c].1;
                for i in 0..k {
                    cells[i * l + j] = joint[c].0[i];
                }
            }
            *table.entry(cells).or_insert_with(Rational::zero) += p;
            let mut d = l;
            loop {
                if d == 0 {
                    return;
                }
                d -= 1;
                choice[d] += 1;
                if choice[d] < joint.len() {
                    break;
                }
                choice[d] = 0;
            }
        }
    });
    Ok(table)
}

/// Whether all corner marginals up to `k x l` agree.
pub fn matrixdist_equal_upto(f: &StepFunction, g: &StepFunction, k: usize, l: usize, caps: &Caps) -> Result<bool> {
    if f.alphabet() != g.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(corner_table(f, k, l, caps)? == corner_table(g, k, l, caps)?)
}

/// Frequencies of observed objects along one axis of a sampled matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalMeasure<T: Ord> {
    pub axis: Axis,
    pub depth: usize,
    pub support: BTreeMap<T, Rational>,
}

fn frequencies<T: Ord>(items: impl IntoIterator<Item = T>, total: usize) -> BTreeMap<T, Rational> {
    let mut counts: BTreeMap<T, u64> = BTreeMap::new();
    for t in items {
        *counts.entry(t).or_insert(0) += 1;
    }
    counts.into_iter().map(|(t, c)| (t, Rational::new(BigInt::from(c), BigInt::from(total)))).collect()
}

/// For `Axis::Columns`: the frequency over columns `j` of the tuple
/// `(r[0][j], .., r[n-1][j])`; for `Axis::Rows` symmetrically over rows.
pub fn empirical_row_measure(r: &SampledMatrix, axis: Axis, depth: usize) -> Result<EmpiricalMeasure<Vec<Symbol>>> {
    let (limit, count) = match axis {
        Axis::Columns => (r.n_rows(), r.n_cols()),
        Axis::Rows => (r.n_cols(), r.n_rows()),
    };
    if depth == 0 || depth > limit {
        return Err(Error::InvalidParameter(alloc::format!("depth {depth} out of range 1..={limit}")));
    }
    let support = match axis {
        Axis::Columns => frequencies((0..count).map(|j| (0..depth).map(|i| r.entry(i, j)).collect::<Vec<_>>()), count),
        Axis::Rows => frequencies((0..count).map(|i| r.row(i)[..depth].to_vec()), count),
    };
    Ok(EmpiricalMeasure { axis, depth, support })
}

fn symbol_distribution(symbols: &[Symbol]) -> Distribution {
    let support = frequencies(symbols.iter().map(|&s| alloc::vec![s]), symbols.len());
    Distribution::from_support_unchecked(1, support)
}

/// The frequency of each line's symbol distribution, over the lines along
/// `axis`.
pub fn empirical_measure_on_measures(r: &SampledMatrix, axis: Axis) -> EmpiricalMeasure<Distribution> {
    let lines: Vec<Distribution> = match axis {
        Axis::Rows => (0..r.n_rows()).map(|i| symbol_distribution(r.row(i))).collect(),
        Axis::Columns => (0..r.n_cols()).map(|j| symbol_distribution(&r.column(j))).collect(),
    };
    let total = lines.len();
    EmpiricalMeasure { axis, depth: 1, support: frequencies(lines, total) }
}

/// Snaps class counts to multiples of `1/max_denominator` by the largest
/// remainder rule, so the result sums to exactly one.
fn snap(counts: &[u64], total: u64, max_denominator: u64) -> Result<Vec<Rational>> {
    let d = u128::from(max_denominator);
    let total = u128::from(total);
    let scaled: Vec<(u128, u128)> = counts.iter().map(|&c| (u128::from(c) * d).div_rem(&total)).collect();
    let mut units: Vec<u128> = scaled.iter().map(|&(q, _)| q).collect();
    let missing = d - units.iter().sum::<u128>();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| scaled[b].1.cmp(&scaled[a].1).then(a.cmp(&b)));
    for &i in order.iter().take(missing as usize) {
        units[i] += 1;
    }
    if let Some(i) = units.iter().position(|&u| u == 0) {
        return Err(Error::SnappingInfeasible {
            frequency: Rational::new(BigInt::from(counts[i]), BigInt::from(total)),
            max_denominator,
        });
    }
    Ok(units.into_iter().map(|u| Rational::new(BigInt::from(u), BigInt::from(max_denominator))).collect())
}

fn classes(lines: impl Iterator<Item = Vec<Symbol>>) -> (Vec<Vec<Symbol>>, Vec<u64>, Vec<usize>) {
    let mut index: BTreeMap<Vec<Symbol>, usize> = BTreeMap::new();
    let mut reps = Vec::new();
    let mut counts = Vec::new();
    let mut class_of = Vec::new();
    for line in lines {
        let c = *index.entry(line.clone()).or_insert_with(|| {
            reps.push(line);
            counts.push(0);
            reps.len() - 1
        });
        counts[c] += 1;
        class_of.push(c);
    }
    (reps, counts, class_of)
}

/// Builds a pure function from a sampled matrix: identical rows and columns
/// are merged, their frequencies become weights, and the weights are snapped
/// to multiples of `1/max_denominator`.
pub fn reconstruct(r: &SampledMatrix, max_denominator: u64) -> Result<StepFunction> {
    if max_denominator == 0 {
        return Err(Error::InvalidParameter("max_denominator must be >= 1".into()));
    }
    let (row_reps, row_counts, _) = classes((0..r.n_rows()).map(|i| r.row(i).to_vec()));
    let (col_reps, col_counts, _) = classes((0..r.n_cols()).map(|j| row_reps.iter().map(|row| row[j]).collect()));
    let rows = WeightedSpace::new(snap(&row_counts, r.n_rows() as u64, max_denominator)?)?;
    let cols = WeightedSpace::new(snap(&col_counts, r.n_cols() as u64, max_denominator)?)?;
    let values = (0..row_reps.len()).flat_map(|i| col_reps.iter().map(move |c: &Vec<Symbol>| c[i])).collect();
    StepFunction::from_flat(r.alphabet().clone(), rows, cols, values)
}

/// Whether the matrix distribution of `f` is a simple measure, which holds
/// exactly when `f` is totally pure.
pub fn simplicity_diagnostic(f: &StepFunction) -> bool {
    is_totally_pure(f)
}

/// What one sample shows about the simplicity of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityReport {
    pub totally_pure: bool,
    /// Sampled atoms in different purity classes gave different lines of R
    /// (both axes).
    pub classes_separated: bool,
    /// A symmetry moved some sampled atom yet reproduced R exactly, so R
    /// cannot tell those atoms apart. `None` when `f` is totally pure.
    pub symmetry_hidden: Option<bool>,
}

pub fn simplicity_report(f: &StepFunction, k: usize, l: usize, seed: u64) -> Result<SimplicityReport> {
    let (xs, ys) = sample_indices(f, k, l, seed);
    let r = sample_matrix(f, k, l, seed)?;
    let q = purity::purify_with_classes(f);
    let separated = |class: &[usize], atoms: &[usize], lines: Vec<Vec<Symbol>>| {
        let mut by_class: BTreeMap<usize, &Vec<Symbol>> = BTreeMap::new();
        let mut by_line: BTreeMap<&Vec<Symbol>, usize> = BTreeMap::new();
        atoms.iter().zip(&lines).all(|(&a, line)| {
            let c = class[a];
            by_class.insert(c, line);
            *by_line.entry(line).or_insert(c) == c
        })
    };
    let classes_separated = separated(&q.row_class, &xs, (0..k).map(|i| r.row(i).to_vec()).collect())
        && separated(&q.col_class, &ys, (0..l).map(|j| r.column(j)).collect());
    let group = purity::symmetry_group(f, false);
    let totally_pure = group.is_trivial();
    let symmetry_hidden = if totally_pure {
        None
    } else {
        // Resampling at (s x_i, t y_j) is a different draw with the same matrix.
        Some(group.generators.iter().any(|(s, t)| {
            let moved = xs.iter().any(|&x| s.image(x) != x) || ys.iter().any(|&y| t.image(y) != y);
            moved
                && xs.iter().enumerate().all(|(i, &x)| {
                    ys.iter().enumerate().all(|(j, &y)| f.value(s.image(x), t.image(y)) == r.entry(i, j))
                })
        }))
    };
    Ok(SimplicityReport { totally_pure, classes_separated, symmetry_hidden })
}
