//! The function file.
//!
//! ```json
//! {
//!   "alphabet": ["a", "b"],
//!   "row_weights": ["1/2", "1/2"],
//!   "col_weights": ["1/2", "1/2"],
//!   "values": [
//!     ["a", "b"],
//!     ["b", "a"]
//!   ]
//! }
//! ```
//!
//! An optional `numeric_values` list (one rational per symbol) follows
//! `alphabet`. Rationals are strings: `p`, `p/q`, or an exact decimal on
//! input, lowest-terms `p` or `p/q` on output. The writer emits the keys in
//! the order above with one matrix row per line, so equal functions give
//! equal bytes.

use std::path::Path;

use serde::Deserialize;

use bivar_core::{rational, Alphabet, Rational, StepFunction, Symbol, WeightedSpace};

use crate::{parse_error, read_file, write_file, Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    alphabet: Vec<String>,
    #[serde(default)]
    numeric_values: Option<Vec<String>>,
    row_weights: Vec<String>,
    col_weights: Vec<String>,
    values: Vec<Vec<String>>,
}

fn rationals(field: &str, items: &[String]) -> Result<Vec<Rational>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| rational::parse(s).map_err(|e| parse_error(format!("{field}[{i}]"), e)))
        .collect()
}

fn space(field: &'static str, items: &[String]) -> Result<WeightedSpace> {
    Ok(WeightedSpace::named(field, rationals(field, items)?)?)
}

pub fn from_str(text: &str) -> Result<StepFunction> {
    let raw: RawFunction = serde_json::from_str(text)
        .map_err(|e| parse_error(format!("line {}, column {}", e.line(), e.column()), e))?;
    let alphabet = match &raw.numeric_values {
        None => Alphabet::new(raw.alphabet.iter().cloned()),
        Some(v) => Alphabet::with_numeric_values(raw.alphabet.iter().cloned(), rationals("numeric_values", v)?),
    }
    .map_err(|e| parse_error("alphabet", e))?;
    let rows = space("row_weights", &raw.row_weights)?;
    let cols = space("col_weights", &raw.col_weights)?;
    if raw.values.len() != rows.size() {
        return Err(parse_error(
            "values",
            format!("expected {} rows (one per row weight), found {}", rows.size(), raw.values.len()),
        ));
    }
    let mut values: Vec<Symbol> = Vec::with_capacity(rows.size() * cols.size());
    for (i, row) in raw.values.iter().enumerate() {
        if row.len() != cols.size() {
            return Err(parse_error(
                format!("values[{i}]"),
                format!("expected {} entries (one per column weight), found {}", cols.size(), row.len()),
            ));
        }
        for (j, name) in row.iter().enumerate() {
            let s = alphabet
                .index_of(name)
                .ok_or_else(|| parse_error(format!("values[{i}][{j}]"), bivar_core::Error::UnknownSymbol(name.clone())))?;
            values.push(s);
        }
    }
    Ok(StepFunction::from_flat(alphabet, rows, cols, values)?)
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn list<T>(items: impl IntoIterator<Item = T>, show: impl Fn(T) -> String) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| quote(&show(x))).collect();
    format!("[{}]", parts.join(", "))
}

pub fn to_string(f: &StepFunction) -> String {
    let a = f.alphabet();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"alphabet\": {},\n", list(a.symbols(), |s| s.clone())));
    if let Some(v) = a.numeric_values() {
        out.push_str(&format!("  \"numeric_values\": {},\n", list(v, |r| r.to_string())));
    }
    out.push_str(&format!("  \"row_weights\": {},\n", list(f.row_space().weights(), |r| r.to_string())));
    out.push_str(&format!("  \"col_weights\": {},\n", list(f.col_space().weights(), |r| r.to_string())));
    out.push_str("  \"values\": [\n");
    let rows: Vec<String> = f.rows().map(|r| format!("    {}", list(r, |&s| a.name(s).to_string()))).collect();
    out.push_str(&rows.join(",\n"));
    out.push_str("\n  ]\n}\n");
    out
}

pub fn load(path: &Path) -> Result<StepFunction> {
    from_str(&read_file(path)?).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse { context: format!("{}: {context}", path.display()), message },
        Error::Core(c) => Error::Parse { context: path.display().to_string(), message: c.to_string() },
        other => other,
    })
}

pub fn save(f: &StepFunction, path: &Path) -> Result<()> {
    write_file(path, &to_string(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bivar_core::fixtures::{dup, flip};
    use bivar_core::rational::ratio;

    #[test]
    fn round_trip() {
        for f in [flip(), dup()] {
            let text = to_string(&f);
            assert_eq!(from_str(&text).unwrap(), f);
            assert_eq!(to_string(&from_str(&text).unwrap()), text);
        }
    }

    #[test]
    fn layout() {
        let expected = "{\n  \"alphabet\": [\"a\", \"b\"],\n  \"row_weights\": [\"1/2\", \"1/2\"],\n  \"col_weights\": [\"1/2\", \"1/2\"],\n  \"values\": [\n    [\"a\", \"b\"],\n    [\"b\", \"a\"]\n  ]\n}\n";
        assert_eq!(to_string(&flip()), expected);
    }

    #[test]
    fn decimals_are_exact() {
        let f = from_str(r#"{"alphabet":["x"],"row_weights":["0.25","0.75"],"col_weights":["1"],"values":[["x"],["x"]]}"#)
            .unwrap();
        assert_eq!(f.row_space().weights(), &[ratio(1, 4), ratio(3, 4)]);
    }
}
