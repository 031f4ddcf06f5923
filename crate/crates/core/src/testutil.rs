//! Shared fixtures for unit tests.
//!
//! The two bundled datasets are small two-class record lists over attributes
//! A (invariant), B, C (varying), each with values 1 and 2. Their aggregate
//! supports are documented in the files themselves and asserted all over the
//! test suite, e.g. example 1 has per-class counts A1C1<4,5>, A2<5,0>,
//! C1<6,5>, C2<4,1>; example 2 has A1B1<2,1>, B1C1<4,1>, B2C2<1,4>.

use crate::dataset::{load_dataset, load_schema, AttributeSchema, Dataset};
use crate::lattice::{Condset, Item};

pub fn example_schema_text() -> &'static str {
    include_str!("../testdata/roles.schema")
}

pub fn example1_csv() -> &'static str {
    include_str!("../testdata/example1.csv")
}

pub fn example2_csv() -> &'static str {
    include_str!("../testdata/example2.csv")
}

/// The example schema with the observed domains filled in (A, B, C each
/// carry values "1" and "2"; the class attribute "Cl1" and "Cl2").
pub fn example_schema() -> AttributeSchema {
    example1_dataset().schema().clone()
}

pub fn example1_dataset() -> Dataset {
    let schema = load_schema(example_schema_text()).unwrap();
    load_dataset(example1_csv().as_bytes(), &schema).unwrap()
}

pub fn example2_dataset() -> Dataset {
    let schema = load_schema(example_schema_text()).unwrap();
    load_dataset(example2_csv().as_bytes(), &schema).unwrap()
}

/// Builds a condset from `(attribute index, value id)` pairs. With the
/// example schema, `A1` is `(0, 0)`, `B2` is `(1, 1)`, `C1` is `(2, 0)`.
pub fn condset(pairs: &[(usize, usize)]) -> Condset {
    Condset::new(pairs.iter().map(|&(a, v)| Item::new(a, v)).collect()).unwrap()
}
