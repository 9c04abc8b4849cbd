//! Line-oriented text formats.
//!
//! Sampled matrix:
//!
//! ```text
//! k 2
//! l 3
//! alphabet a b
//! seed 7
//! source flip.json
//! a b b
//! b a a
//! ```
//!
//! `seed none` marks a matrix that was not sampled here. Symbols must not
//! contain whitespace; the source is the rest of its line.

use std::fmt::Write as _;

use bivar_core::canonical::CanonicalForm;
use bivar_core::matrixdist::SampledMatrix;
use bivar_core::sjd::SjdSignature;
use bivar_core::{Alphabet, Axis, Symbol};

use crate::{parse_error, Error, Result};

pub fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::Rows => "rows",
        Axis::Columns => "columns",
    }
}

fn joined<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// One line per tuple, `i j ..<TAB>distribution`, in lexicographic tuple
/// order after a header line.
pub fn signature_to_string(sig: &SjdSignature, alphabet: &Alphabet, seed: u64) -> String {
    let mut out = format!(
        "# sjd axis={} level={} sampled={} seed={seed}\n",
        axis_name(sig.axis),
        sig.level,
        sig.sampled
    );
    for (tuple, dist) in &sig.table {
        let _ = writeln!(out, "{}\t{}", joined(tuple), dist.display(alphabet));
    }
    out
}

pub fn sidecar_to_string(form: &CanonicalForm, alphabet: &Alphabet, seed: u64) -> String {
    let mut out = format!("# canonical sidecar seed={seed}\n");
    let _ = writeln!(out, "row_perm {}", form.row_perm);
    let _ = writeln!(out, "col_perm {}", form.col_perm);
    let _ = writeln!(out, "fiber_group_order {}", form.image.fiber_group_order);
    let _ = writeln!(out, "fibers {}", form.image.fibers.len());
    for (n, fiber) in form.image.fibers.iter().enumerate() {
        let _ = writeln!(out, "fiber {n} distribution {}", fiber.distribution.display(alphabet));
        let _ = writeln!(out, "  members {}", joined(&fiber.members));
        let _ = writeln!(out, "  weights {}", joined(&fiber.weights));
        let _ = writeln!(out, "  marks {}", joined(fiber.marks()));
    }
    out
}

pub fn sidecar_to_json(form: &CanonicalForm, alphabet: &Alphabet, seed: u64) -> serde_json::Value {
    let fibers: Vec<serde_json::Value> = form
        .image
        .fibers
        .iter()
        .map(|fiber| {
            serde_json::json!({
                "distribution": fiber.distribution.display(alphabet).to_string(),
                "members": fiber.members,
                "weights": fiber.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                "marks": fiber.marks().collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({
        "seed": seed,
        "row_perm": form.row_perm.images(),
        "col_perm": form.col_perm.images(),
        "fiber_group_order": form.image.fiber_group_order.to_string(),
        "fibers": fibers,
    })
}

fn check_token(what: &str, s: &str) -> Result<()> {
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(Error::Usage(format!("{what} `{s}` cannot be written in a whitespace-separated format")));
    }
    Ok(())
}

pub fn sampled_to_string(r: &SampledMatrix) -> Result<String> {
    let a = r.alphabet();
    for s in a.symbols() {
        check_token("symbol", s)?;
    }
    if r.source.contains('\n') {
        return Err(Error::Usage("source description must be a single line".into()));
    }
    let mut out = format!("k {}\nl {}\nalphabet {}\n", r.n_rows(), r.n_cols(), a.symbols().join(" "));
    match r.seed {
        Some(seed) => {
            let _ = writeln!(out, "seed {seed}");
        }
        None => out.push_str("seed none\n"),
    }
    let _ = writeln!(out, "source {}", r.source);
    for i in 0..r.n_rows() {
        let _ = writeln!(out, "{}", joined(r.row(i).iter().map(|&s| a.name(s))));
    }
    Ok(out)
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    let (n, line) = lines.next().ok_or_else(|| parse_error("end of file", format!("missing `{key}` header")))?;
    match line.split_once(' ') {
        Some((k, rest)) if k == key => Ok((n, rest)),
        None if line == key => Ok((n, "")),
        _ => Err(parse_error(format!("line {n}"), format!("expected `{key} ...`, found `{line}`"))),
    }
}

fn count(n: usize, text: &str) -> Result<usize> {
    match text.trim().parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(parse_error(format!("line {n}"), format!("expected a positive integer, found `{text}`"))),
    }
}

pub fn sampled_from_str(text: &str) -> Result<SampledMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (n, k) = header(&mut lines, "k")?;
    let k = count(n, k)?;
    let (n, l) = header(&mut lines, "l")?;
    let l = count(n, l)?;
    let (n, symbols) = header(&mut lines, "alphabet")?;
    let alphabet = Alphabet::new(symbols.split_whitespace()).map_err(|e| parse_error(format!("line {n}"), e))?;
    let (n, seed) = header(&mut lines, "seed")?;
    let seed = match seed.trim() {
        "none" => None,
        s => Some(s.parse::<u64>().map_err(|_| parse_error(format!("line {n}"), format!("invalid seed `{s}`")))?),
    };
    let (_, source) = header(&mut lines, "source")?;
    let mut entries: Vec<Symbol> = Vec::with_capacity(k * l);
    for i in 0..k {
        let (n, line) = lines
            .next()
            .ok_or_else(|| parse_error("end of file", format!("expected {k} matrix rows, found {i}")))?;
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != l {
            return Err(parse_error(format!("line {n}"), format!("expected {l} symbols, found {}", row.len())));
        }
        for name in row {
            entries.push(alphabet.index_of(name).ok_or_else(|| {
                parse_error(format!("line {n}"), bivar_core::Error::UnknownSymbol(name.to_string()))
            })?);
        }
    }
    if let Some((n, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_error(format!("line {n}"), format!("unexpected trailing content `{extra}`")));
    }
    Ok(SampledMatrix::new(alphabet, k, l, entries, seed, source.to_string())?)
}

/// Parses `a b; b a` (rows separated by `;`) into a symbol matrix.
pub fn pattern_from_str(text: &str, alphabet: &Alphabet) -> Result<Vec<Vec<Symbol>>> {
    let rows: Vec<Vec<Symbol>> = text
        .split(';')
        .enumerate()
        .map(|(i, row)| {
            row.split_whitespace()
                .map(|name| {
                    alphabet.index_of(name).ok_or_else(|| {
                        parse_error(format!("pattern row {i}"), bivar_core::Error::UnknownSymbol(name.to_string()))
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(parse_error("pattern", "rows must be nonempty and of equal length"));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bivar_core::fixtures::flip;
    use bivar_core::matrixdist::sample_matrix_from;

    #[test]
    fn sampled_round_trip() {
        let r = sample_matrix_from(&flip(), 3, 5, 7, "flip.json".into()).unwrap();
        let text = sampled_to_string(&r).unwrap();
        assert!(text.starts_with("k 3\nl 5\nalphabet a b\nseed 7\nsource flip.json\n"));
        assert_eq!(sampled_from_str(&text).unwrap(), r);
    }

    #[test]
    fn sampled_errors_name_the_line() {
        let bad = "k 1\nl 2\nalphabet a b\nseed 1\nsource x\na c\n";
        let e = sampled_from_str(bad).unwrap_err().to_string();
        assert!(e.contains("line 6") && e.contains("unknown symbol `c`"), "{e}");
        let short = "k 2\nl 1\nalphabet a\nseed none\nsource \na\n";
        assert!(sampled_from_str(short).unwrap_err().to_string().contains("expected 2 matrix rows"));
    }

    #[test]
    fn patterns() {
        let a = Alphabet::letters(2);
        assert_eq!(pattern_from_str("a b; b a", &a).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert!(pattern_from_str("a b; b", &a).is_err());
        assert!(pattern_from_str("a z", &a).is_err());
    }
}
