//! Color refinement, canonical forms and equivalence decisions.
//!
//! Two step functions are equivalent when a weight-preserving relabeling of
//! rows and columns carries one onto the other after both are purified. The
//! decision compares canonical images: the lexicographically least
//! row-major matrix among all relabelings that respect the stable coloring.
//! Refinement only prunes the search; the minimum is exact.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use num_bigint::BigUint;

use crate::purity::{self, purify_with_classes, Quotient};
use crate::sjd::joint_unchecked;
use crate::{apply_permutations, Alphabet, Axis, Caps, Distribution, Error, Permutation, Rational, Result, StepFunction, Symbol, WeightedSpace};

/// How a refinement round measures the atoms carrying each value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mass {
    Weighted,
    Counting,
}

/// Stable row and column colors; ids are canonical ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableColoring {
    pub row_colors: Vec<usize>,
    pub col_colors: Vec<usize>,
}

impl StableColoring {
    fn histogram(colors: &[usize]) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &c in colors {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }

    pub fn row_histogram(&self) -> BTreeMap<usize, usize> {
        Self::histogram(&self.row_colors)
    }

    pub fn col_histogram(&self) -> BTreeMap<usize, usize> {
        Self::histogram(&self.col_colors)
    }

    pub fn is_discrete(&self) -> bool {
        self.row_histogram().values().all(|&c| c == 1) && self.col_histogram().values().all(|&c| c == 1)
    }
}

/// Replaces every key with its rank among all keys of all functions.
fn rank_jointly<K: Ord + Clone>(keys: Vec<Vec<K>>) -> Vec<Vec<usize>> {
    let mut all: Vec<K> = keys.iter().flatten().cloned().collect();
    all.sort();
    all.dedup();
    keys.iter()
        .map(|ks| ks.iter().map(|k| all.binary_search(k).expect("present")).collect())
        .collect()
}

fn distinct(colorings: &[Vec<usize>]) -> usize {
    let mut all: Vec<usize> = colorings.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

type Signature = (usize, Vec<((usize, Symbol), Rational)>);

fn signatures(f: &StepFunction, axis: Axis, own: &[usize], other: &[usize], mass: Mass) -> Vec<Signature> {
    let g = f.oriented(axis);
    let other_space = g.col_space();
    (0..g.n_rows())
        .map(|i| {
            let mut acc: BTreeMap<(usize, Symbol), Rational> = BTreeMap::new();
            for (j, &s) in g.row(i).iter().enumerate() {
                let m = match mass {
                    Mass::Weighted => other_space.weight(j).clone(),
                    Mass::Counting => Rational::from_integer(1.into()),
                };
                *acc.entry((other[j], s)).or_insert_with(|| Rational::from_integer(0.into())) += m;
            }
            (own[i], acc.into_iter().collect())
        })
        .collect()
}

/// Refines the given initial colors of several functions together until no
/// class splits. Colors stay comparable across the functions.
pub fn refine_from(fs: &[&StepFunction], row_init: &[Vec<usize>], col_init: &[Vec<usize>], mass: Mass) -> Vec<StableColoring> {
    let mut rows: Vec<Vec<usize>> = row_init.to_vec();
    let mut cols: Vec<Vec<usize>> = col_init.to_vec();
    loop {
        let before = (distinct(&rows), distinct(&cols));
        let row_sigs: Vec<Vec<Signature>> =
            fs.iter().enumerate().map(|(k, f)| signatures(f, Axis::Rows, &rows[k], &cols[k], mass)).collect();
        let col_sigs: Vec<Vec<Signature>> =
            fs.iter().enumerate().map(|(k, f)| signatures(f, Axis::Columns, &cols[k], &rows[k], mass)).collect();
        rows = rank_jointly(row_sigs);
        cols = rank_jointly(col_sigs);
        if (distinct(&rows), distinct(&cols)) == before {
            break;
        }
    }
    rows.into_iter()
        .zip(cols)
        .map(|(row_colors, col_colors)| StableColoring { row_colors, col_colors })
        .collect()
}

fn initial_keys(f: &StepFunction, axis: Axis) -> Vec<(Reverse<Rational>, Distribution)> {
    (0..f.space(axis).size())
        .map(|i| (Reverse(f.space(axis).weight(i).clone()), joint_unchecked(f, axis, &[i])))
        .collect()
}

/// Weighted refinement of several functions at once, starting from
/// (weight, section distribution).
pub fn refine_jointly(fs: &[&StepFunction]) -> Vec<StableColoring> {
    let row_init = rank_jointly(fs.iter().map(|f| initial_keys(f, Axis::Rows)).collect());
    let col_init = rank_jointly(fs.iter().map(|f| initial_keys(f, Axis::Columns)).collect());
    refine_from(fs, &row_init, &col_init, Mass::Weighted)
}

pub fn refine(f: &StepFunction) -> StableColoring {
    refine_jointly(&[f]).pop().expect("one coloring")
}

/// Whether joint refinement fails to tell `f` and `g` apart.
///
/// Necessary for equivalence, but not sufficient.
pub fn refinement_equivalent(f: &StepFunction, g: &StepFunction) -> bool {
    if f.alphabet() != g.alphabet() {
        return false;
    }
    let c = refine_jointly(&[f, g]);
    c[0].row_histogram() == c[1].row_histogram() && c[0].col_histogram() == c[1].col_histogram()
}

/// Rows sharing a section distribution, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub distribution: Distribution,
    /// Canonical row positions in this fiber, ascending.
    pub members: Vec<usize>,
    pub weights: Vec<Rational>,
}

impl Fiber {
    /// Marks `1..=m` in member order.
    pub fn marks(&self) -> impl Iterator<Item = usize> {
        1..=self.members.len()
    }
}

/// The part of a canonical form that is an isomorphism invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalImage {
    pub function: StepFunction,
    pub fibers: Vec<Fiber>,
    /// Order of the weight-preserving stabilizer of the canonical function.
    pub fiber_group_order: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub image: CanonicalImage,
    /// Input row `i` goes to canonical row `row_perm(i)`.
    pub row_perm: Permutation,
    pub col_perm: Permutation,
}

struct Best {
    rows: Vec<Vec<Symbol>>,
    row_order: Vec<usize>,
    col_order: Vec<usize>,
}

struct Search<'a> {
    f: &'a StepFunction,
    row_colors: &'a [usize],
    position_colors: Vec<usize>,
    best: Option<Best>,
}

impl Search<'_> {
    fn key(&self, x: usize, cells: &[Vec<usize>]) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.f.n_cols());
        for cell in cells {
            let start = out.len();
            out.extend(cell.iter().map(|&j| self.f.value(x, j)));
            out[start..].sort_unstable();
        }
        out
    }

    fn run(&mut self, order: &mut Vec<usize>, strings: &mut Vec<Vec<Symbol>>, used: &mut [bool], cells: &[Vec<usize>]) {
        let p = order.len();
        if p == self.f.n_rows() {
            let better = match &self.best {
                None => true,
                Some(b) => strings.as_slice() < b.rows.as_slice(),
            };
            if better {
                self.best = Some(Best {
                    rows: strings.clone(),
                    row_order: order.clone(),
                    col_order: cells.iter().flatten().copied().collect(),
                });
            }
            return;
        }
        let color = self.position_colors[p];
        let candidates: Vec<(usize, Vec<Symbol>)> = (0..self.f.n_rows())
            .filter(|&x| !used[x] && self.row_colors[x] == color)
            .map(|x| (x, self.key(x, cells)))
            .collect();
        let Some(min) = candidates.iter().map(|(_, k)| k).min().cloned() else {
            return;
        };
        if let Some(b) = &self.best {
            match strings.as_slice().cmp(&b.rows[..p]) {
                Ordering::Greater => return,
                Ordering::Equal if min > b.rows[p] => return,
                _ => {}
            }
        }
        for (x, k) in candidates {
            if k != min {
                continue;
            }
            let split: Vec<Vec<usize>> = cells
                .iter()
                .flat_map(|cell| {
                    let mut by_value: BTreeMap<Symbol, Vec<usize>> = BTreeMap::new();
                    for &j in cell {
                        by_value.entry(self.f.value(x, j)).or_default().push(j);
                    }
                    by_value.into_values()
                })
                .collect();
            used[x] = true;
            order.push(x);
            strings.push(min.clone());
            self.run(order, strings, used, &split);
            strings.pop();
            order.pop();
            used[x] = false;
        }
    }
}

fn order_to_perm(order: &[usize]) -> Permutation {
    Permutation::new(order.to_vec()).expect("bijection").inverse()
}

fn fibers_of(f: &StepFunction) -> Vec<Fiber> {
    let mut by_dist: BTreeMap<Distribution, Vec<usize>> = BTreeMap::new();
    for i in 0..f.n_rows() {
        by_dist.entry(joint_unchecked(f, Axis::Rows, &[i])).or_default().push(i);
    }
    by_dist
        .into_iter()
        .map(|(distribution, members)| Fiber {
            weights: members.iter().map(|&i| f.row_space().weight(i).clone()).collect(),
            distribution,
            members,
        })
        .collect()
}

/// Canonical form of a pure function.
pub fn canonical_form(f: &StepFunction) -> Result<CanonicalForm> {
    if !purity::is_pure(f) {
        return Err(Error::NotPure);
    }
    let coloring = refine(f);
    let mut position_colors = coloring.row_colors.clone();
    position_colors.sort_unstable();
    let mut col_colors: Vec<(usize, usize)> = coloring.col_colors.iter().copied().zip(0..).collect();
    col_colors.sort_unstable();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut last = None;
    for (c, j) in col_colors {
        if last != Some(c) {
            cells.push(Vec::new());
            last = Some(c);
        }
        cells.last_mut().expect("pushed").push(j);
    }
    let mut search = Search { f, row_colors: &coloring.row_colors, position_colors, best: None };
    let mut used = alloc::vec![false; f.n_rows()];
    search.run(&mut Vec::new(), &mut Vec::new(), &mut used, &cells);
    let best = search.best.expect("at least one leaf");
    let row_perm = order_to_perm(&best.row_order);
    let col_perm = order_to_perm(&best.col_order);
    let function = apply_permutations(f, &row_perm, &col_perm)?;
    let fibers = fibers_of(&function);
    let fiber_group_order = purity::symmetry_group(&function, true).order;
    Ok(CanonicalForm { image: CanonicalImage { function, fibers, fiber_group_order }, row_perm, col_perm })
}

/// Canonical form of the purification; permutations refer to the quotient.
pub fn canonical_form_purified(f: &StepFunction) -> CanonicalForm {
    canonical_form(&purity::purify(f)).expect("purified functions are pure")
}

/// Whether the stored fibers agree with the canonical function itself.
pub fn is_tautological(image: &CanonicalImage) -> bool {
    image.fibers == fibers_of(&image.function)
        && image.fiber_group_order == purity::symmetry_group(&image.function, true).order
}

/// Where a witness acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessLevel {
    /// On the given functions: `apply_permutations(f, rows, cols) == g`.
    Atoms,
    /// On the purified functions, because identical atoms of the inputs
    /// carry different weights and no atom-level relabeling exists.
    Quotient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub rows: Permutation,
    pub cols: Permutation,
    pub level: WitnessLevel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub equivalent: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn no() -> Self {
        Verdict { equivalent: false, witness: None }
    }
}

/// Lifts a class map to atoms when each class meets a class with the same
/// member weights.
fn lift(map: &Permutation, from: &[Vec<usize>], to: &[Vec<usize>], sf: &WeightedSpace, sg: &WeightedSpace) -> Option<Permutation> {
    let sorted = |c: &[usize], s: &WeightedSpace| {
        let mut m = c.to_vec();
        m.sort_by(|&a, &b| s.weight(a).cmp(s.weight(b)).then(a.cmp(&b)));
        m
    };
    let mut images = alloc::vec![0; sf.size()];
    for (c, members) in from.iter().enumerate() {
        let a = sorted(members, sf);
        let b = sorted(&to[map.image(c)], sg);
        if a.len() != b.len() || a.iter().zip(&b).any(|(&x, &y)| sf.weight(x) != sg.weight(y)) {
            return None;
        }
        for (x, y) in a.into_iter().zip(b) {
            images[x] = y;
        }
    }
    Permutation::new(images).ok()
}

fn profiles(classes: &[Vec<usize>], s: &WeightedSpace) -> Vec<Vec<Rational>> {
    classes
        .iter()
        .map(|c| {
            let mut w: Vec<Rational> = c.iter().map(|&i| s.weight(i).clone()).collect();
            w.sort();
            w
        })
        .collect()
}

/// The quotient with every value tagged by the member-weight profiles of its
/// row class and column class. Ranks are shared by `f` and `g`.
fn decorated(f: &StepFunction, g: &StepFunction, qf: &Quotient, qg: &Quotient) -> Option<(StepFunction, StepFunction)> {
    let rows = rank_jointly(alloc::vec![
        profiles(&qf.partition.row_classes, f.row_space()),
        profiles(&qg.partition.row_classes, g.row_space()),
    ]);
    let cols = rank_jointly(alloc::vec![
        profiles(&qf.partition.col_classes, f.col_space()),
        profiles(&qg.partition.col_classes, g.col_space()),
    ]);
    let (nr, nc) = (distinct(&rows), distinct(&cols));
    let size = f.alphabet().len().checked_mul(nr)?.checked_mul(nc)?;
    if size > usize::from(Symbol::MAX) + 1 {
        return None;
    }
    let tag = |q: &Quotient, r: &[usize], c: &[usize]| {
        let h = &q.function;
        let values = (0..h.n_rows())
            .flat_map(|i| (0..h.n_cols()).map(move |j| (i, j)))
            .map(|(i, j)| ((usize::from(h.value(i, j)) * nr + r[i]) * nc + c[j]) as Symbol)
            .collect();
        StepFunction::from_flat(Alphabet::letters(size), h.row_space().clone(), h.col_space().clone(), values)
            .expect("same shape")
    };
    Some((tag(qf, &rows[0], &cols[0]), tag(qg, &rows[1], &cols[1])))
}

fn lift_both(f: &StepFunction, g: &StepFunction, qf: &Quotient, qg: &Quotient, rows: &Permutation, cols: &Permutation) -> Option<(Permutation, Permutation)> {
    lift(rows, &qf.partition.row_classes, &qg.partition.row_classes, f.row_space(), g.row_space())
        .zip(lift(cols, &qf.partition.col_classes, &qg.partition.col_classes, f.col_space(), g.col_space()))
}

/// A quotient isomorphism that also matches member-weight profiles, lifted
/// to atoms. Used when the first quotient witness does not lift.
fn profile_witness(f: &StepFunction, g: &StepFunction, qf: &Quotient, qg: &Quotient) -> Result<Option<(Permutation, Permutation)>> {
    let Some((df, dg)) = decorated(f, g, qf, qg) else {
        return Ok(None);
    };
    let cf = canonical_form(&df)?;
    let cg = canonical_form(&dg)?;
    if cf.image != cg.image {
        return Ok(None);
    }
    let rows = cg.row_perm.inverse().after(&cf.row_perm);
    let cols = cg.col_perm.inverse().after(&cf.col_perm);
    Ok(lift_both(f, g, qf, qg, &rows, &cols))
}

fn finish(f: &StepFunction, g: &StepFunction, qf: &Quotient, qg: &Quotient, rows: Permutation, cols: Permutation) -> Result<Verdict> {
    assert_eq!(apply_permutations(&qf.function, &rows, &cols)?, qg.function, "quotient witness must verify");
    let lifted = match lift_both(f, g, qf, qg, &rows, &cols) {
        Some(l) => Some(l),
        None => profile_witness(f, g, qf, qg)?,
    };
    let witness = match lifted {
        Some((r, c)) => {
            assert_eq!(apply_permutations(f, &r, &c)?, *g, "lifted witness must verify");
            Witness { rows: r, cols: c, level: WitnessLevel::Atoms }
        }
        None => Witness { rows, cols, level: WitnessLevel::Quotient },
    };
    Ok(Verdict { equivalent: true, witness: Some(witness) })
}

fn same_alphabet(f: &StepFunction, g: &StepFunction) -> Result<()> {
    if f.alphabet() != g.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Decides equivalence by comparing canonical images of the purifications.
pub fn equivalent(f: &StepFunction, g: &StepFunction) -> Result<Verdict> {
    same_alphabet(f, g)?;
    let qf = purify_with_classes(f);
    let qg = purify_with_classes(g);
    let cf = canonical_form(&qf.function)?;
    let cg = canonical_form(&qg.function)?;
    equivalent_from_forms(f, g, &qf, &qg, &cf, &cg)
}

/// [`equivalent`] with the purifications and canonical forms precomputed.
pub fn equivalent_from_forms(
    f: &StepFunction,
    g: &StepFunction,
    qf: &Quotient,
    qg: &Quotient,
    cf: &CanonicalForm,
    cg: &CanonicalForm,
) -> Result<Verdict> {
    if cf.image != cg.image {
        return Ok(Verdict::no());
    }
    let rows = cg.row_perm.inverse().after(&cf.row_perm);
    let cols = cg.col_perm.inverse().after(&cf.col_perm);
    finish(f, g, qf, qg, rows, cols)
}

/// Exhaustive equivalence check over all weight-preserving relabelings of
/// the purifications. A reference for [`equivalent`].
pub fn brute_force_equivalent(f: &StepFunction, g: &StepFunction, caps: &Caps) -> Result<Verdict> {
    same_alphabet(f, g)?;
    let qf = purify_with_classes(f);
    let qg = purify_with_classes(g);
    let (pf, pg) = (&qf.function, &qg.function);
    if (pf.n_rows(), pf.n_cols()) != (pg.n_rows(), pg.n_cols()) {
        return Ok(Verdict::no());
    }
    purity::check_factorial_cap(pf.n_rows(), pf.n_cols(), caps)?;
    let preserves = |p: &Permutation, a: &WeightedSpace, b: &WeightedSpace| (0..a.size()).all(|i| a.weight(i) == b.weight(p.image(i)));
    let mut cols = Vec::new();
    purity::for_each_permutation(pf.n_cols(), |c| {
        if preserves(c, pf.col_space(), pg.col_space()) {
            cols.push(c.clone());
        }
    });
    let mut found = None;
    purity::for_each_permutation(pf.n_rows(), |r| {
        if found.is_some() || !preserves(r, pf.row_space(), pg.row_space()) {
            return;
        }
        for c in &cols {
            let hit = (0..pf.n_rows()).all(|i| (0..pf.n_cols()).all(|j| pg.value(r.image(i), c.image(j)) == pf.value(i, j)));
            if hit {
                found = Some((r.clone(), c.clone()));
                return;
            }
        }
    });
    match found {
        Some((r, c)) => finish(f, g, &qf, &qg, r, c),
        None => Ok(Verdict::no()),
    }
}

fn diagonal_checks(f: &StepFunction) -> Result<()> {
    if f.n_rows() != f.n_cols() {
        return Err(Error::NotSquare);
    }
    if f.row_space() != f.col_space() {
        return Err(Error::RowColumnWeightMismatch);
    }
    Ok(())
}

type DiagonalKey = (Reverse<Rational>, Symbol, Distribution, Distribution);

fn diagonal_initial(f: &StepFunction) -> Vec<DiagonalKey> {
    (0..f.n_rows())
        .map(|i| {
            (
                Reverse(f.row_space().weight(i).clone()),
                f.value(i, i),
                joint_unchecked(f, Axis::Rows, &[i]),
                joint_unchecked(f, Axis::Columns, &[i]),
            )
        })
        .collect()
}

type DiagonalSignature = (usize, Vec<((usize, Symbol, Symbol), Rational)>);

fn diagonal_colors(fs: &[&StepFunction]) -> Vec<Vec<usize>> {
    let mut colors = rank_jointly(fs.iter().map(|f| diagonal_initial(f)).collect());
    loop {
        let before = distinct(&colors);
        let sigs: Vec<Vec<DiagonalSignature>> = fs
            .iter()
            .zip(&colors)
            .map(|(f, c)| {
                (0..f.n_rows())
                    .map(|i| {
                        let mut acc: BTreeMap<(usize, Symbol, Symbol), Rational> = BTreeMap::new();
                        for j in 0..f.n_rows() {
                            *acc.entry((c[j], f.value(i, j), f.value(j, i))).or_insert_with(|| Rational::from_integer(0.into())) +=
                                f.row_space().weight(j);
                        }
                        (c[i], acc.into_iter().collect())
                    })
                    .collect()
            })
            .collect();
        colors = rank_jointly(sigs);
        if distinct(&colors) == before {
            return colors;
        }
    }
}

/// Decides whether a single relabeling `T` of a square function with equal
/// row and column weights gives `f(x, y) = g(T x, T y)`.
pub fn diagonal_equivalent(f: &StepFunction, g: &StepFunction) -> Result<Verdict> {
    same_alphabet(f, g)?;
    diagonal_checks(f)?;
    diagonal_checks(g)?;
    if f.n_rows() != g.n_rows() {
        return Ok(Verdict::no());
    }
    let colors = diagonal_colors(&[f, g]);
    let mut hf = colors[0].clone();
    let mut hg = colors[1].clone();
    hf.sort_unstable();
    hg.sort_unstable();
    if hf != hg {
        return Ok(Verdict::no());
    }
    let n = f.n_rows();
    let mut images: Vec<usize> = Vec::with_capacity(n);
    let mut used = alloc::vec![false; n];
    fn go(f: &StepFunction, g: &StepFunction, colors: &[Vec<usize>], images: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = images.len();
        if i == f.n_rows() {
            return true;
        }
        for t in 0..g.n_rows() {
            if used[t] || colors[1][t] != colors[0][i] || g.value(t, t) != f.value(i, i) {
                continue;
            }
            let consistent = images
                .iter()
                .enumerate()
                .all(|(k, &tk)| g.value(t, tk) == f.value(i, k) && g.value(tk, t) == f.value(k, i));
            if !consistent {
                continue;
            }
            used[t] = true;
            images.push(t);
            if go(f, g, colors, images, used) {
                return true;
            }
            images.pop();
            used[t] = false;
        }
        false
    }
    if !go(f, g, &colors, &mut images, &mut used) {
        return Ok(Verdict::no());
    }
    let t = Permutation::new(images)?;
    assert_eq!(apply_permutations(f, &t, &t)?, *g, "diagonal witness must verify");
    Ok(Verdict { equivalent: true, witness: Some(Witness { rows: t.clone(), cols: t, level: WitnessLevel::Atoms }) })
}

/// Cost between symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundMetric {
    /// `|v(s) - v(t)|` using the alphabet's numeric values.
    AbsoluteDifference,
    /// An explicit `|A| x |A|` table.
    Table(Vec<Vec<Rational>>),
}

/// Expected ground distance between sections `i` and `j` along `axis`,
/// integrating over the other variable.
pub fn section_metric(f: &StepFunction, axis: Axis, i: usize, j: usize, metric: &GroundMetric) -> Result<Rational> {
    let a = f.alphabet();
    let size = f.space(axis).size();
    for idx in [i, j] {
        if idx >= size {
            return Err(Error::DimensionMismatch { what: "section index", expected: size, found: idx });
        }
    }
    let cost: alloc::boxed::Box<dyn Fn(Symbol, Symbol) -> Rational + '_> = match metric {
        GroundMetric::AbsoluteDifference => {
            let values = a.numeric_values().ok_or(Error::MissingGroundMetric)?;
            alloc::boxed::Box::new(move |s: Symbol, t: Symbol| {
                let d = &values[usize::from(s)] - &values[usize::from(t)];
                if d < Rational::from_integer(0.into()) { -d } else { d }
            })
        }
        GroundMetric::Table(table) => {
            if table.len() != a.len() || table.iter().any(|r| r.len() != a.len()) {
                return Err(Error::DimensionMismatch { what: "ground metric table", expected: a.len(), found: table.len() });
            }
            alloc::boxed::Box::new(move |s: Symbol, t: Symbol| table[usize::from(s)][usize::from(t)].clone())
        }
    };
    let joint = joint_unchecked(f, axis, &[i, j]);
    Ok(joint.expectation(|t| cost(t[0], t[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dup, flip, konst, rowsame, tri};
    use crate::generate::{exhaustive_family, random_function, random_weight_preserving_permutation};
    use crate::rational::{int, ratio};
    use crate::rng::SplitMix64;
    use crate::WeightedSpace;
    use alloc::vec;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn refine_separates_weights_and_sections() {
        let c = refine(&tri());
        assert_ne!(c.row_colors[0], c.row_colors[1]);
        let c = refine(&flip());
        assert_eq!(c.row_colors[0], c.row_colors[1]);
        assert!(!c.is_discrete());
        assert!(refine(&dup()).row_colors[2] < refine(&dup()).row_colors[0]);
    }

    #[test]
    fn canonical_of_canonical_is_identity() {
        for seed in 0..100 {
            let f = crate::purity::purify(&random_function(4, 4, 3, 8, seed).unwrap());
            let c = canonical_form(&f).unwrap();
            let again = canonical_form(&c.image.function).unwrap();
            assert_eq!(again.image, c.image);
            assert!(again.row_perm.is_identity() && again.col_perm.is_identity());
            assert!(is_tautological(&c.image));
        }
    }

    #[test]
    fn canonical_image_is_invariant() {
        let mut rng = SplitMix64::new(17);
        for seed in 0..150 {
            let f = crate::purity::purify(&random_function(5, 4, 2, 6, seed).unwrap());
            let s = random_weight_preserving_permutation(f.row_space(), &mut rng);
            let t = random_weight_preserving_permutation(f.col_space(), &mut rng);
            let g = apply_permutations(&f, &s, &t).unwrap();
            assert_eq!(canonical_form(&f).unwrap().image, canonical_form(&g).unwrap().image);
        }
    }

    #[test]
    fn canonical_rejects_impure() {
        assert_eq!(canonical_form(&konst()), Err(Error::NotPure));
        assert_eq!(canonical_form_purified(&dup()).image, canonical_form(&flip()).unwrap().image);
    }

    #[test]
    fn fibers_of_flip() {
        let c = canonical_form(&flip()).unwrap();
        assert_eq!(c.image.fibers.len(), 1);
        assert_eq!(c.image.fibers[0].members, vec![0, 1]);
        assert_eq!(c.image.fiber_group_order, BigUint::from(2u32));
        let c = canonical_form(&tri()).unwrap();
        assert_eq!(c.image.fiber_group_order, BigUint::from(1u32));
    }

    #[test]
    fn examples() {
        let f = flip();
        let swapped = apply_permutations(&f, &Permutation::transposition(2, 0, 1), &Permutation::identity(2)).unwrap();
        let v = equivalent(&f, &swapped).unwrap();
        assert!(v.equivalent);
        let w = v.witness.unwrap();
        assert_eq!(w.level, WitnessLevel::Atoms);
        assert_eq!(apply_permutations(&f, &w.rows, &w.cols).unwrap(), swapped);
        assert!(!equivalent(&flip(), &tri()).unwrap().equivalent);
        assert!(!equivalent(&flip(), &rowsame()).unwrap().equivalent);
        assert!(equivalent(&dup(), &flip()).unwrap().equivalent);
    }

    #[test]
    fn quotient_witness_when_weights_differ() {
        let v = equivalent(&dup(), &flip()).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(w.level, WitnessLevel::Quotient);
    }

    #[test]
    fn atom_witness_through_quotient_symmetry() {
        // The quotient is FLIP, whose row swap exchanges a split class with a whole one.
        let rows = WeightedSpace::new(vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)]).unwrap();
        let f = StepFunction::from_flat(Alphabet::letters(2), rows, WeightedSpace::uniform(2), vec![0, 1, 0, 1, 1, 0])
            .unwrap();
        for s in [[0, 1, 2], [2, 1, 0], [1, 2, 0]] {
            for t in [[0, 1], [1, 0]] {
                let g = apply_permutations(&f, &Permutation::new(s.to_vec()).unwrap(), &Permutation::new(t.to_vec()).unwrap())
                    .unwrap();
                let w = equivalent(&f, &g).unwrap().witness.unwrap();
                assert_eq!(w.level, WitnessLevel::Atoms);
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_exhaustively() {
        let fam: Vec<StepFunction> = exhaustive_family(3, 3, 2).collect();
        let images: Vec<CanonicalImage> = fam.iter().map(|f| canonical_form_purified(f).image).collect();
        for (a, f) in fam.iter().enumerate().step_by(7) {
            for (b, g) in fam.iter().enumerate() {
                let fast = images[a] == images[b];
                let slow = brute_force_equivalent(f, g, &caps()).unwrap().equivalent;
                assert_eq!(fast, slow, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_on_weighted_pairs() {
        let mut rng = SplitMix64::new(5);
        for seed in 0..300 {
            let f = random_function(3, 3, 2, 4, seed).unwrap();
            let g = if seed % 2 == 0 {
                let s = random_weight_preserving_permutation(f.row_space(), &mut rng);
                let t = random_weight_preserving_permutation(f.col_space(), &mut rng);
                apply_permutations(&f, &s, &t).unwrap()
            } else {
                random_function(3, 3, 2, 4, seed + 10_000).unwrap()
            };
            let fast = equivalent(&f, &g).unwrap();
            let slow = brute_force_equivalent(&f, &g, &caps()).unwrap();
            assert_eq!(fast.equivalent, slow.equivalent, "seed {seed}");
            if let Some(w) = fast.witness.filter(|w| w.level == WitnessLevel::Atoms) {
                assert_eq!(apply_permutations(&f, &w.rows, &w.cols).unwrap(), g);
            }
        }
    }

    #[test]
    fn refinement_is_incomplete() {
        // A 12-cycle and two 6-cycles as 6x6 bipartite incidence matrices.
        let cycle = |pairs: &[(usize, usize)]| {
            let mut v = vec![vec!["a"; 6]; 6];
            for &(i, j) in pairs {
                v[i][j] = "b";
            }
            let rows: Vec<[&'static str; 6]> = v.into_iter().map(|r| [r[0], r[1], r[2], r[3], r[4], r[5]]).collect();
            StepFunction::from_labels(Alphabet::letters(2), WeightedSpace::uniform(6), WeightedSpace::uniform(6), &rows).unwrap()
        };
        let one: Vec<(usize, usize)> = (0..6).flat_map(|i| [(i, i), (i, (i + 1) % 6)]).collect();
        let two: Vec<(usize, usize)> = (0..6).flat_map(|i| [(i, i), (i, if i % 3 == 2 { i - 2 } else { i + 1 })]).collect();
        let f = cycle(&one);
        let g = cycle(&two);
        assert!(refinement_equivalent(&f, &g));
        assert!(!equivalent(&f, &g).unwrap().equivalent);
    }

    #[test]
    fn diagonal_examples() {
        let f = flip();
        assert!(diagonal_equivalent(&f, &f).unwrap().equivalent);
        let swapped = apply_permutations(&f, &Permutation::transposition(2, 0, 1), &Permutation::identity(2)).unwrap();
        assert!(!diagonal_equivalent(&f, &swapped).unwrap().equivalent);
        assert!(equivalent(&f, &swapped).unwrap().equivalent);
        let rect = random_function(2, 3, 2, 4, 0).unwrap();
        assert!(matches!(diagonal_equivalent(&rect, &rect), Err(Error::NotSquare)));
    }

    #[test]
    fn diagonal_agrees_with_brute_force() {
        let mut rng = SplitMix64::new(8);
        let fam: Vec<StepFunction> = exhaustive_family(3, 3, 2).collect();
        for f in fam.iter().step_by(5) {
            let t = random_weight_preserving_permutation(f.row_space(), &mut rng);
            let g = apply_permutations(f, &t, &t).unwrap();
            assert!(diagonal_equivalent(f, &g).unwrap().equivalent);
            for h in fam.iter().step_by(37) {
                let mut any = false;
                purity::for_each_permutation(3, |p| any |= apply_permutations(f, p, p).unwrap() == *h);
                assert_eq!(diagonal_equivalent(f, h).unwrap().equivalent, any);
            }
        }
    }

    #[test]
    fn line_metric() {
        // Points 0, 1, 3 on a line; f(x, y) = |x - y|.
        let a = Alphabet::with_numeric_values(["0", "1", "2", "3"], vec![int(0), int(1), int(2), int(3)]).unwrap();
        let f = StepFunction::from_labels(
            a,
            WeightedSpace::uniform(3),
            WeightedSpace::uniform(3),
            &[["0", "1", "3"], ["1", "0", "2"], ["3", "2", "0"]],
        )
        .unwrap();
        let d = section_metric(&f, Axis::Rows, 0, 2, &GroundMetric::AbsoluteDifference).unwrap();
        assert_eq!(d, ratio(7, 3));
        let d = section_metric(&f, Axis::Rows, 0, 1, &GroundMetric::AbsoluteDifference).unwrap();
        assert_eq!(d, int(1));
        assert_eq!(section_metric(&f, Axis::Rows, 1, 1, &GroundMetric::AbsoluteDifference).unwrap(), int(0));
        assert_eq!(section_metric(&flip(), Axis::Rows, 0, 1, &GroundMetric::AbsoluteDifference), Err(Error::MissingGroundMetric));
        let numeric = Alphabet::with_numeric_values(["a", "b"], vec![int(0), int(1)]).unwrap();
        let relabel = |g: StepFunction| {
            StepFunction::from_flat(numeric.clone(), g.row_space().clone(), g.col_space().clone(), g.values().to_vec()).unwrap()
        };
        let abs = GroundMetric::AbsoluteDifference;
        assert_eq!(section_metric(&relabel(flip()), Axis::Rows, 0, 1, &abs).unwrap(), int(1));
        assert_eq!(section_metric(&relabel(tri()), Axis::Rows, 0, 1, &abs).unwrap(), ratio(1, 2));
        let table = GroundMetric::Table(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert_eq!(section_metric(&flip(), Axis::Rows, 0, 1, &table).unwrap(), int(1));
        assert_eq!(section_metric(&tri(), Axis::Rows, 0, 1, &table).unwrap(), ratio(1, 2));
    }
}
