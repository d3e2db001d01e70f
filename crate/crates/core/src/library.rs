//! The machines shipped in `machines/`, embedded for tests and the CLI.

use crate::machine::TmSpec;

const BINARY_INCREMENTER: &str = include_str!("../../../machines/binary_incrementer.json");
const UNARY_SUCCESSOR: &str = include_str!("../../../machines/unary_successor.json");
const INFINITE_LOOP: &str = include_str!("../../../machines/infinite_loop.json");
const PARITY_CHECKER: &str = include_str!("../../../machines/parity_checker.json");

fn load(text: &str) -> TmSpec {
    TmSpec::from_json(text).expect("shipped machine files are valid")
}

pub fn binary_incrementer() -> TmSpec {
    load(BINARY_INCREMENTER)
}

pub fn unary_successor() -> TmSpec {
    load(UNARY_SUCCESSOR)
}

pub fn infinite_loop() -> TmSpec {
    load(INFINITE_LOOP)
}

pub fn parity_checker() -> TmSpec {
    load(PARITY_CHECKER)
}

pub fn all() -> Vec<TmSpec> {
    vec![binary_incrementer(), unary_successor(), infinite_loop(), parity_checker()]
}

/// Looks a shipped machine up by its `name` field.
pub fn by_name(name: &str) -> Option<TmSpec> {
    all().into_iter().find(|m| m.name() == name)
}
