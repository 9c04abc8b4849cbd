//! Finite weighted spaces, step functions and exact distributions.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use num_traits::{One, Zero};

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Index of a symbol in an [`Alphabet`].
pub type Symbol = u16;

/// Which variable of a function of two variables is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    Rows,
    Columns,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Rows => Axis::Columns,
            Axis::Columns => Axis::Rows,
        }
    }
}

/// The value space: an ordered list of distinct symbols.
///
/// The order of the symbols is part of the input and fixes every
/// lexicographic tie-break downstream.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
    numeric: Option<Vec<Rational>>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidParameter("alphabet must not be empty".to_string()));
        }
        if symbols.len() > usize::from(Symbol::MAX) + 1 {
            return Err(Error::AlphabetTooLarge(symbols.len()));
        }
        let mut seen: Vec<&str> = symbols.iter().map(String::as_str).collect();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSymbol(w[0].to_string()));
        }
        Ok(Alphabet { symbols, numeric: None })
    }

    /// Alphabet whose symbols also carry numeric values (for metrics).
    pub fn with_numeric_values<S: Into<String>>(
        symbols: impl IntoIterator<Item = S>,
        values: Vec<Rational>,
    ) -> Result<Self> {
        let mut alphabet = Alphabet::new(symbols)?;
        if values.len() != alphabet.len() {
            return Err(Error::DimensionMismatch {
                what: "numeric_values",
                expected: alphabet.len(),
                found: values.len(),
            });
        }
        alphabet.numeric = Some(values);
        Ok(alphabet)
    }

    /// `a`, `b`, `c`, ... for up to 26 symbols, `s0`, `s1`, ... beyond.
    pub fn letters(n: usize) -> Self {
        let symbols: Vec<String> = if n <= 26 {
            (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect()
        } else {
            (0..n).map(|i| alloc::format!("s{i}")).collect()
        };
        Alphabet::new(symbols).expect("generated symbols are distinct")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.symbols[usize::from(s)]
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == name).map(|i| i as Symbol)
    }

    pub fn numeric_values(&self) -> Option<&[Rational]> {
        self.numeric.as_deref()
    }

    pub fn numeric_value(&self, s: Symbol) -> Option<&Rational> {
        self.numeric.as_ref().map(|v| &v[usize::from(s)])
    }
}

/// A finite probability space whose atoms all have positive weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedSpace {
    weights: Vec<Rational>,
}

impl WeightedSpace {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        Self::named("weights", weights)
    }

    pub fn named(what: &'static str, weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace { what });
        }
        if let Some(index) = weights.iter().position(|w| *w <= Rational::zero()) {
            return Err(Error::NonPositiveWeight { what, index });
        }
        let sum = rational::sum(&weights);
        if !sum.is_one() {
            return Err(Error::WeightSum { what, sum });
        }
        Ok(WeightedSpace { weights })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform space needs at least one atom");
        let w = Rational::new(1.into(), n.into());
        WeightedSpace { weights: alloc::vec![w; n] }
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }
}

/// A function on `X x Y` constant on products of atoms: a matrix of symbols
/// with weighted rows and columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFunction {
    alphabet: Alphabet,
    rows: WeightedSpace,
    cols: WeightedSpace,
    values: Vec<Symbol>,
}

impl StepFunction {
    pub fn new(
        alphabet: Alphabet,
        rows: WeightedSpace,
        cols: WeightedSpace,
        values: Vec<Vec<Symbol>>,
    ) -> Result<Self> {
        if values.len() != rows.size() {
            return Err(Error::DimensionMismatch {
                what: "values (rows)",
                expected: rows.size(),
                found: values.len(),
            });
        }
        let mut flat = Vec::with_capacity(rows.size() * cols.size());
        for row in values {
            if row.len() != cols.size() {
                return Err(Error::DimensionMismatch {
                    what: "values (columns)",
                    expected: cols.size(),
                    found: row.len(),
                });
            }
            flat.extend(row);
        }
        Self::from_flat(alphabet, rows, cols, flat)
    }

    /// Same as [`StepFunction::new`] with the matrix given in row-major order.
    pub fn from_flat(
        alphabet: Alphabet,
        rows: WeightedSpace,
        cols: WeightedSpace,
        values: Vec<Symbol>,
    ) -> Result<Self> {
        let expected = rows.size() * cols.size();
        if values.len() != expected {
            return Err(Error::DimensionMismatch { what: "values", expected, found: values.len() });
        }
        if let Some(&bad) = values.iter().find(|&&s| usize::from(s) >= alphabet.len()) {
            return Err(Error::SymbolOutOfRange {
                index: usize::from(bad),
                alphabet_len: alphabet.len(),
            });
        }
        Ok(StepFunction { alphabet, rows, cols, values })
    }

    /// Builds a function from symbol names, e.g. `[["a", "b"], ["b", "a"]]`.
    pub fn from_labels<R: AsRef<[&'static str]>>(
        alphabet: Alphabet,
        rows: WeightedSpace,
        cols: WeightedSpace,
        table: &[R],
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(table.len());
        for row in table {
            let mut out = Vec::with_capacity(row.as_ref().len());
            for name in row.as_ref() {
                out.push(
                    alphabet.index_of(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?,
                );
            }
            values.push(out);
        }
        StepFunction::new(alphabet, rows, cols, values)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn row_space(&self) -> &WeightedSpace {
        &self.rows
    }

    pub fn col_space(&self) -> &WeightedSpace {
        &self.cols
    }

    pub fn space(&self, axis: Axis) -> &WeightedSpace {
        match axis {
            Axis::Rows => &self.rows,
            Axis::Columns => &self.cols,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.size()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.size()
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> Symbol {
        self.values[i * self.cols.size() + j]
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        let m = self.cols.size();
        &self.values[i * m..(i + 1) * m]
    }

    pub fn column(&self, j: usize) -> Vec<Symbol> {
        (0..self.n_rows()).map(|i| self.value(i, j)).collect()
    }

    /// Row-major values.
    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Symbol]> {
        self.values.chunks(self.cols.size())
    }

    /// The function `(y, x) -> f(x, y)`.
    pub fn transpose(&self) -> StepFunction {
        let (n, m) = (self.n_rows(), self.n_cols());
        let mut values = Vec::with_capacity(n * m);
        for j in 0..m {
            values.extend((0..n).map(|i| self.value(i, j)));
        }
        StepFunction {
            alphabet: self.alphabet.clone(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            values,
        }
    }

    /// The function with the given variable moved to the rows.
    pub fn oriented(&self, axis: Axis) -> alloc::borrow::Cow<'_, StepFunction> {
        match axis {
            Axis::Rows => alloc::borrow::Cow::Borrowed(self),
            Axis::Columns => alloc::borrow::Cow::Owned(self.transpose()),
        }
    }

    pub(crate) fn with_parts(
        alphabet: Alphabet,
        rows: WeightedSpace,
        cols: WeightedSpace,
        values: Vec<Symbol>,
    ) -> StepFunction {
        debug_assert_eq!(values.len(), rows.size() * cols.size());
        StepFunction { alphabet, rows, cols, values }
    }

    /// Writes the matrix with symbol names, one row per line.
    pub fn write_table(&self, out: &mut impl fmt::Write) -> fmt::Result {
        for row in self.rows() {
            let mut first = true;
            for &s in row {
                if !first {
                    out.write_char(' ')?;
                }
                first = false;
                out.write_str(self.alphabet.name(s))?;
            }
            out.write_char('\n')?;
        }
        Ok(())
    }
}

/// An exact probability measure on `A^n` with finite support.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distribution {
    arity: usize,
    support: BTreeMap<Vec<Symbol>, Rational>,
}

impl Distribution {
    /// Collects `(tuple, mass)` pairs, summing repeated tuples and dropping
    /// zero masses. The total must be exactly one.
    pub fn from_masses(
        arity: usize,
        masses: impl IntoIterator<Item = (Vec<Symbol>, Rational)>,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParameter("distribution arity must be >= 1".to_string()));
        }
        let mut support: BTreeMap<Vec<Symbol>, Rational> = BTreeMap::new();
        for (tuple, mass) in masses {
            if tuple.len() != arity {
                return Err(Error::DimensionMismatch {
                    what: "distribution tuple",
                    expected: arity,
                    found: tuple.len(),
                });
            }
            if mass < Rational::zero() {
                return Err(Error::InvalidParameter("negative probability mass".to_string()));
            }
            *support.entry(tuple).or_insert_with(Rational::zero) += mass;
        }
        support.retain(|_, m| !m.is_zero());
        let total = rational::sum(support.values());
        if !total.is_one() {
            return Err(Error::WeightSum { what: "distribution", sum: total });
        }
        Ok(Distribution { arity, support })
    }

    /// Caller guarantees positive masses summing to one.
    pub(crate) fn from_support_unchecked(
        arity: usize,
        support: BTreeMap<Vec<Symbol>, Rational>,
    ) -> Self {
        debug_assert!(support.values().all(|m| *m > Rational::zero()));
        debug_assert!(rational::sum(support.values()).is_one());
        Distribution { arity, support }
    }

    pub fn point(tuple: Vec<Symbol>) -> Self {
        let arity = tuple.len();
        let mut support = BTreeMap::new();
        support.insert(tuple, Rational::one());
        Distribution { arity, support }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn support(&self) -> &BTreeMap<Vec<Symbol>, Rational> {
        &self.support
    }

    pub fn mass(&self, tuple: &[Symbol]) -> Rational {
        self.support.get(tuple).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Symbol>, &Rational)> {
        self.support.iter()
    }

    /// Integrates out coordinate `position`.
    pub fn marginalize(&self, position: usize) -> Result<Distribution> {
        if self.arity < 2 || position >= self.arity {
            return Err(Error::InvalidParameter(alloc::format!(
                "cannot drop coordinate {position} of an arity-{} distribution",
                self.arity
            )));
        }
        let mut support: BTreeMap<Vec<Symbol>, Rational> = BTreeMap::new();
        for (tuple, mass) in &self.support {
            let mut reduced = tuple.clone();
            reduced.remove(position);
            *support.entry(reduced).or_insert_with(Rational::zero) += mass;
        }
        Ok(Distribution { arity: self.arity - 1, support })
    }

    /// `E[g(tuple)]`.
    pub fn expectation(&self, mut g: impl FnMut(&[Symbol]) -> Rational) -> Rational {
        self.support.iter().fold(Rational::zero(), |acc, (t, m)| acc + g(t) * m)
    }

    /// `{(a,b):1/2, (b,a):1/2}`-style rendering; arity-1 tuples print bare.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> DisplayDistribution<'a> {
        DisplayDistribution { dist: self, alphabet }
    }
}

pub struct DisplayDistribution<'a> {
    dist: &'a Distribution,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayDistribution<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('{')?;
        for (k, (tuple, mass)) in self.dist.support.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            if tuple.len() == 1 {
                f.write_str(self.alphabet.name(tuple[0]))?;
            } else {
                f.write_char('(')?;
                for (i, &s) in tuple.iter().enumerate() {
                    if i > 0 {
                        f.write_char(',')?;
                    }
                    f.write_str(self.alphabet.name(s))?;
                }
                f.write_char(')')?;
            }
            write!(f, ":{mass}")?;
        }
        f.write_char('}')
    }
}

/// A bijection of `0..n`; `perm.image(i)` is where `i` goes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = alloc::vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || core::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation);
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The transposition of `a` and `b` on `0..n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }

    /// `self` after `first`: `i -> self(first(i))`.
    pub fn after(&self, first: &Permutation) -> Self {
        assert_eq!(self.len(), first.len(), "composing permutations of different sizes");
        Permutation(first.0.iter().map(|&i| self.0[i]).collect())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_char(' ')?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Relabels `f` by `rows` and `cols`: the result `g` satisfies
/// `g[rows(i)][cols(j)] = f[i][j]`, and each weight travels with its atom.
pub fn apply_permutations(
    f: &StepFunction,
    rows: &Permutation,
    cols: &Permutation,
) -> Result<StepFunction> {
    if rows.len() != f.n_rows() {
        return Err(Error::DimensionMismatch {
            what: "row permutation",
            expected: f.n_rows(),
            found: rows.len(),
        });
    }
    if cols.len() != f.n_cols() {
        return Err(Error::DimensionMismatch {
            what: "column permutation",
            expected: f.n_cols(),
            found: cols.len(),
        });
    }
    let (n, m) = (f.n_rows(), f.n_cols());
    let mut values = alloc::vec![0; n * m];
    for i in 0..n {
        let ri = rows.image(i);
        for j in 0..m {
            values[ri * m + cols.image(j)] = f.value(i, j);
        }
    }
    let permute = |space: &WeightedSpace, p: &Permutation| {
        let mut w = alloc::vec![Rational::zero(); space.size()];
        for (i, wi) in space.weights().iter().enumerate() {
            w[p.image(i)] = wi.clone();
        }
        WeightedSpace { weights: w }
    };
    Ok(StepFunction::with_parts(
        f.alphabet().clone(),
        permute(f.row_space(), rows),
        permute(f.col_space(), cols),
        values,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{flip, konst};
    use crate::rational::ratio;

    #[test]
    fn weighted_space_validation() {
        assert!(matches!(
            WeightedSpace::new(alloc::vec![ratio(1, 2), ratio(1, 4)]),
            Err(Error::WeightSum { .. })
        ));
        assert!(matches!(
            WeightedSpace::new(alloc::vec![ratio(1, 1), ratio(0, 1)]),
            Err(Error::NonPositiveWeight { index: 1, .. })
        ));
        assert!(matches!(WeightedSpace::new(Vec::new()), Err(Error::EmptySpace { .. })));
        let e = WeightedSpace::new(alloc::vec![ratio(1, 2), ratio(1, 4)]).unwrap_err();
        assert!(e.to_string().contains("weights must sum to 1"));
    }

    #[test]
    fn unknown_symbol_is_rejected() {
        let e = StepFunction::from_labels(
            Alphabet::letters(2),
            WeightedSpace::uniform(1),
            WeightedSpace::uniform(1),
            &[["c"]],
        )
        .unwrap_err();
        assert_eq!(e, Error::UnknownSymbol("c".into()));
        assert!(e.to_string().contains("unknown symbol"));
    }

    #[test]
    fn dimension_mismatch_is_named() {
        let e = StepFunction::from_labels(
            Alphabet::letters(2),
            WeightedSpace::uniform(2),
            WeightedSpace::uniform(2),
            &[["a", "b"]],
        )
        .unwrap_err();
        assert!(matches!(e, Error::DimensionMismatch { what: "values (rows)", .. }));
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert!(matches!(Alphabet::new(["a", "a"]), Err(Error::DuplicateSymbol(_))));
    }

    #[test]
    fn flip_row_swap() {
        let f = flip();
        let g = apply_permutations(&f, &Permutation::transposition(2, 0, 1), &Permutation::identity(2))
            .unwrap();
        let expected = StepFunction::from_labels(
            Alphabet::letters(2),
            WeightedSpace::uniform(2),
            WeightedSpace::uniform(2),
            &[["b", "a"], ["a", "b"]],
        )
        .unwrap();
        assert_eq!(g, expected);
        assert_eq!(apply_permutations(&f, &Permutation::identity(2), &Permutation::identity(2)).unwrap(), f);
        let swap = Permutation::transposition(2, 0, 1);
        assert_eq!(apply_permutations(&f, &swap, &swap).unwrap(), f);
    }

    #[test]
    fn weights_travel_with_atoms() {
        let f = StepFunction::from_labels(
            Alphabet::letters(2),
            WeightedSpace::new(alloc::vec![ratio(1, 3), ratio(2, 3)]).unwrap(),
            WeightedSpace::uniform(1),
            &[["a"], ["b"]],
        )
        .unwrap();
        let g = apply_permutations(&f, &Permutation::transposition(2, 0, 1), &Permutation::identity(1))
            .unwrap();
        assert_eq!(g.row_space().weights(), &[ratio(2, 3), ratio(1, 3)]);
        assert_eq!(g.value(0, 0), 1);
    }

    #[test]
    fn size_mismatch() {
        assert!(apply_permutations(&konst(), &Permutation::identity(3), &Permutation::identity(2)).is_err());
    }

    #[test]
    fn permutation_algebra() {
        let p = Permutation::new(alloc::vec![2, 0, 1]).unwrap();
        assert!(p.after(&p.inverse()).is_identity());
        assert!(Permutation::new(alloc::vec![0, 0]).is_err());
        assert!(Permutation::new(alloc::vec![1, 2]).is_err());
    }

    #[test]
    fn marginals_and_display() {
        let d = Distribution::from_masses(
            2,
            [(alloc::vec![0, 1], ratio(1, 2)), (alloc::vec![1, 0], ratio(1, 2))],
        )
        .unwrap();
        let m = d.marginalize(1).unwrap();
        assert_eq!(m.mass(&[0]), ratio(1, 2));
        assert_eq!(m.mass(&[1]), ratio(1, 2));
        assert_eq!(d.display(&Alphabet::letters(2)).to_string(), "{(a,b):1/2, (b,a):1/2}");
        assert_eq!(m.display(&Alphabet::letters(2)).to_string(), "{a:1/2, b:1/2}");
        assert!(Distribution::from_masses(1, [(alloc::vec![0], ratio(1, 2))]).is_err());
    }

    #[test]
    fn transpose_twice_is_identity() {
        let f = crate::fixtures::tri();
        assert_eq!(f.transpose().transpose(), f);
        assert_eq!(f.transpose().value(1, 0), f.value(0, 1));
    }
}
