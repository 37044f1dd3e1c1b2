//! The worked examples: an eight-arrow inverse semigroupoid on two objects
//! that is neither an inverse semigroup nor a groupoid, a partial action of it
//! on four points, a global action on three points, and the restriction of
//! the latter to `{1, 2}`.
//!
//! Objects: `u` carries the loops `b, b*, a*a, b*b, bb*`; `v` carries `aa*`;
//! `a: u -> v` and `a*: v -> u`.

use std::sync::Arc;

use crate::action::PartialAction;
use crate::algebra::{infer_inverses, InverseSemigroupoid, SemigroupoidTable};

pub const DEMO_ARROWS: [&str; 8] = ["a", "a*", "b", "b*", "a*a", "aa*", "b*b", "bb*"];

/// Rows are left factors, columns right factors, in [`DEMO_ARROWS`] order;
/// `None` marks a non-composable pair.
const DEMO_TABLE: [[Option<&str>; 8]; 8] = [
    // a
    [None, Some("aa*"), Some("a"), Some("a"), Some("a"), None, Some("a"), Some("a")],
    // a*
    [Some("a*a"), None, None, None, None, Some("a*"), None, None],
    // b
    [None, Some("a*"), Some("a*a"), Some("bb*"), Some("a*a"), None, Some("b"), Some("a*a")],
    // b*
    [None, Some("a*"), Some("b*b"), Some("a*a"), Some("a*a"), None, Some("a*a"), Some("b*")],
    // a*a
    [None, Some("a*"), Some("a*a"), Some("a*a"), Some("a*a"), None, Some("a*a"), Some("a*a")],
    // aa*
    [Some("a"), None, None, None, None, Some("aa*"), None, None],
    // b*b
    [None, Some("a*"), Some("a*a"), Some("b*"), Some("a*a"), None, Some("b*b"), Some("a*a")],
    // bb*
    [None, Some("a*"), Some("b"), Some("a*a"), Some("a*a"), None, Some("a*a"), Some("bb*")],
];

/// The eight-arrow multiplication table, unvalidated.
pub fn demo_table() -> SemigroupoidTable {
    let arrows: Vec<(&str, &str, &str)> = DEMO_ARROWS
        .iter()
        .map(|&s| match s {
            "a" => (s, "u", "v"),
            "a*" => (s, "v", "u"),
            "aa*" => (s, "v", "v"),
            _ => (s, "u", "u"),
        })
        .collect();
    let mut products = Vec::new();
    for (i, row) in DEMO_TABLE.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if let Some(p) = cell {
                products.push((DEMO_ARROWS[i], DEMO_ARROWS[j], *p));
            }
        }
    }
    SemigroupoidTable::from_names(&["u", "v"], &arrows, &products)
        .expect("demo table is well-formed")
}

pub fn demo_structure() -> Arc<InverseSemigroupoid> {
    Arc::new(infer_inverses(demo_table()).expect("demo table is an inverse semigroupoid"))
}

fn demo_x_with(structure: Arc<InverseSemigroupoid>, x_a: &'static str) -> PartialAction {
    PartialAction::from_names(
        structure,
        &["1", "2", "3", "4"],
        &[
            ("b*", &["1", "2"]),
            ("b*b", &["1", "2"]),
            ("b", &["1", "4"]),
            ("bb*", &["1", "4"]),
            ("a*", &["1"]),
            ("a*a", &["1"]),
            ("a", &[x_a]),
            ("aa*", &["3", "4"]),
        ],
        &[
            ("b", &[("1", "1"), ("2", "4")]),
            ("b*", &[("1", "1"), ("4", "2")]),
            ("a", &[("1", "4")]),
            ("a*", &[("4", "1")]),
            ("b*b", &[("1", "1"), ("2", "2")]),
            ("bb*", &[("1", "1"), ("4", "4")]),
            ("a*a", &[("1", "1")]),
            ("aa*", &[("3", "3"), ("4", "4")]),
        ],
    )
    .expect("fixture is well-formed")
}

/// The four-point partial action with `X_a = {4}`, the value forced by
/// `θ_a: 1 ↦ 4`.
pub fn demo_x() -> PartialAction {
    demo_x_with(demo_structure(), "4")
}

/// The four-point action with the misprinted `X_a = {3}`; not a partial action.
pub fn demo_x_as_printed() -> PartialAction {
    demo_x_with(demo_structure(), "3")
}

/// The global action on `{1, 2, 3}`: `a` cycles `1 -> 2 -> 3 -> 1`, every
/// arrow other than `a, a*` acts as the identity.
pub fn demo_y() -> PartialAction {
    let all: &[&str] = &["1", "2", "3"];
    let ident: &[(&str, &str)] = &[("1", "1"), ("2", "2"), ("3", "3")];
    let domains: Vec<(&str, &[&str])> = DEMO_ARROWS.iter().map(|&s| (s, all)).collect();
    let maps: Vec<(&str, &[(&str, &str)])> = DEMO_ARROWS
        .iter()
        .map(|&s| match s {
            "a" => (s, &[("1", "2"), ("2", "3"), ("3", "1")][..]),
            "a*" => (s, &[("2", "1"), ("3", "2"), ("1", "3")][..]),
            _ => (s, ident),
        })
        .collect();
    PartialAction::from_names(demo_structure(), all, &domains, &maps).expect("fixture is well-formed")
}

/// The restriction of [`demo_y`] to `{1, 2}`, written out directly.
pub fn demo_restricted() -> PartialAction {
    let all: &[&str] = &["1", "2"];
    let ident: &[(&str, &str)] = &[("1", "1"), ("2", "2")];
    let domains: Vec<(&str, &[&str])> = DEMO_ARROWS
        .iter()
        .map(|&s| match s {
            "a" => (s, &["2"][..]),
            "a*" => (s, &["1"][..]),
            _ => (s, all),
        })
        .collect();
    let maps: Vec<(&str, &[(&str, &str)])> = DEMO_ARROWS
        .iter()
        .map(|&s| match s {
            "a" => (s, &[("1", "2")][..]),
            "a*" => (s, &[("2", "1")][..]),
            _ => (s, ident),
        })
        .collect();
    PartialAction::from_names(demo_structure(), all, &domains, &maps).expect("fixture is well-formed")
}
