//! Metric measure spaces as symmetric step functions.
//!
//! A points file lists one point per line as whitespace-separated
//! coordinates, optionally followed by `@ weight`; either every point has a
//! weight or none does (uniform). A distance file lists the rows of a square
//! symmetric matrix, optionally preceded by a `weights ...` line. Blank lines
//! and lines starting with `#` are ignored.
//!
//! The distinct distances form the alphabet, each symbol carrying its value
//! as a numeric value, and the function is `f(i, j) = d(p_i, p_j)`.

use std::collections::BTreeSet;

use bivar_core::rational::{self, round_half_up, round_sqrt};
use bivar_core::{Alphabet, Rational, StepFunction, Symbol, WeightedSpace};

use crate::{parse_error, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    SquaredEuclidean,
    /// Needs a quantization denominator: distances are rounded to the
    /// nearest multiple of `1/q`.
    Euclidean,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers(n: usize, text: &str) -> Result<Vec<Rational>> {
    text.split_whitespace()
        .map(|t| rational::parse(t).map_err(|e| parse_error(format!("line {n}"), e)))
        .collect()
}

fn weights(given: Vec<Option<Rational>>) -> Result<WeightedSpace> {
    let n = given.len();
    if n == 0 {
        return Err(parse_error("input", "no points given"));
    }
    match given.iter().filter(|w| w.is_some()).count() {
        0 => Ok(WeightedSpace::uniform(n)),
        k if k == n => Ok(WeightedSpace::named("point weights", given.into_iter().flatten().collect())?),
        _ => Err(parse_error("weights", "give a weight for every point or for none")),
    }
}

fn quantize(x: &Rational, q: Option<u64>) -> Rational {
    match q {
        None => x.clone(),
        Some(q) => Rational::new(round_half_up(&(x * Rational::from_integer(q.into()))), q.into()),
    }
}

fn build(distances: Vec<Vec<Rational>>, space: WeightedSpace) -> Result<StepFunction> {
    let values: BTreeSet<&Rational> = distances.iter().flatten().collect();
    let values: Vec<Rational> = values.into_iter().cloned().collect();
    let alphabet = Alphabet::with_numeric_values(values.iter().map(|v| v.to_string()), values.clone())?;
    let flat: Vec<Symbol> = distances
        .iter()
        .flatten()
        .map(|d| values.binary_search(d).expect("collected above") as Symbol)
        .collect();
    Ok(StepFunction::from_flat(alphabet, space.clone(), space, flat)?)
}

pub fn import_points(text: &str, metric: Metric, q: Option<u64>) -> Result<StepFunction> {
    if metric == Metric::Euclidean && q.is_none() {
        return Err(Error::Usage(
            "Euclidean distances are irrational in general; pass a quantization denominator".into(),
        ));
    }
    if q == Some(0) {
        return Err(Error::Usage("quantization denominator must be >= 1".into()));
    }
    let mut points: Vec<Vec<Rational>> = Vec::new();
    let mut given: Vec<Option<Rational>> = Vec::new();
    for (n, line) in content_lines(text) {
        let (coords, weight) = match line.split_once('@') {
            Some((c, w)) => (c, Some(rational::parse(w).map_err(|e| parse_error(format!("line {n}"), e))?)),
            None => (line, None),
        };
        let coords = numbers(n, coords)?;
        if let Some(first) = points.first() {
            if first.len() != coords.len() {
                return Err(parse_error(
                    format!("line {n}"),
                    format!("expected {} coordinates, found {}", first.len(), coords.len()),
                ));
            }
        }
        points.push(coords);
        given.push(weight);
    }
    let space = weights(given)?;
    let distances = points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|r| {
                    let sq = p.iter().zip(r).fold(Rational::from_integer(0.into()), |acc, (a, b)| {
                        let d = a - b;
                        acc + &d * &d
                    });
                    match (metric, q) {
                        (Metric::SquaredEuclidean, _) => quantize(&sq, q),
                        (Metric::Euclidean, Some(q)) => {
                            let scale = Rational::from_integer(q.into());
                            Rational::new(round_sqrt(&(sq * &scale * &scale)), q.into())
                        }
                        (Metric::Euclidean, None) => unreachable!("checked above"),
                    }
                })
                .collect()
        })
        .collect();
    build(distances, space)
}

pub fn import_matrix(text: &str, q: Option<u64>) -> Result<StepFunction> {
    if q == Some(0) {
        return Err(Error::Usage("quantization denominator must be >= 1".into()));
    }
    let mut declared: Option<Vec<Rational>> = None;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (n, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("weights") {
            declared = Some(numbers(n, rest)?);
            continue;
        }
        rows.push(numbers(n, line)?.iter().map(|x| quantize(x, q)).collect());
    }
    let size = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != size) {
        return Err(parse_error(
            "distance matrix",
            format!("not square: {size} rows but row {i} has {} entries", r.len()),
        ));
    }
    for i in 0..size {
        for j in 0..i {
            if rows[i][j] != rows[j][i] {
                return Err(parse_error(
                    "distance matrix",
                    format!("not symmetric: d({i},{j}) = {} but d({j},{i}) = {}", rows[i][j], rows[j][i]),
                ));
            }
        }
    }
    let space = match declared {
        Some(w) if w.len() != size => {
            return Err(parse_error("weights", format!("expected {size} weights, found {}", w.len())))
        }
        Some(w) => WeightedSpace::named("point weights", w)?,
        None if size == 0 => return Err(parse_error("input", "no points given")),
        None => WeightedSpace::uniform(size),
    };
    build(rows, space)
}
