//! Small named functions used throughout the documentation and tests.

use alloc::vec;

use crate::rational::ratio;
use crate::{Alphabet, StepFunction, WeightedSpace};

fn uniform(table: &[[&'static str; 2]]) -> StepFunction {
    StepFunction::from_labels(
        Alphabet::letters(2),
        WeightedSpace::uniform(table.len()),
        WeightedSpace::uniform(2),
        table,
    )
    .expect("fixture is valid")
}

/// `[[a,b],[b,a]]`, uniform: pure but not totally pure.
pub fn flip() -> StepFunction {
    uniform(&[["a", "b"], ["b", "a"]])
}

/// `[[a,b],[b,b]]`, uniform: totally pure.
pub fn tri() -> StepFunction {
    uniform(&[["a", "b"], ["b", "b"]])
}

/// `[[a,a],[a,a]]`, uniform: not pure.
pub fn konst() -> StepFunction {
    uniform(&[["a", "a"], ["a", "a"]])
}

/// `[[a,b],[a,b]]`, uniform.
pub fn rowsame() -> StepFunction {
    uniform(&[["a", "b"], ["a", "b"]])
}

/// `[[a,b],[a,b],[b,a]]` with row weights `(1/4, 1/4, 1/2)`.
pub fn dup() -> StepFunction {
    StepFunction::from_labels(
        Alphabet::letters(2),
        WeightedSpace::new(vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)]).expect("valid"),
        WeightedSpace::uniform(2),
        &[["a", "b"], ["a", "b"], ["b", "a"]],
    )
    .expect("fixture is valid")
}
