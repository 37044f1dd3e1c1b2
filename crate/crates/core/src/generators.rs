//! A hand-curated catalog of finite inverse semigroupoids with actions, and
//! seeded random partial actions obtained by restricting global ones.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{is_global, restrict, CoverageMode, ElementId, ElementSet, PartialAction};
use crate::algebra::{infer_inverses, ArrowId, InverseSemigroupoid, SemigroupoidTable};
use crate::fixtures;
use crate::globalize::build_globalization;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogAction {
    pub label: String,
    pub action: PartialAction,
    pub global: bool,
}

impl CatalogAction {
    pub fn new(label: impl Into<String>, action: PartialAction) -> Self {
        let global = is_global(&action);
        Self {
            label: label.into(),
            action,
            global,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub structure: Arc<InverseSemigroupoid>,
    pub actions: Vec<CatalogAction>,
}

impl CatalogEntry {
    pub fn global_actions(&self) -> impl Iterator<Item = &CatalogAction> {
        self.actions.iter().filter(|a| a.global)
    }

    pub fn partial_actions(&self) -> impl Iterator<Item = &CatalogAction> {
        self.actions.iter().filter(|a| !a.global)
    }
}

/// Partial bijection of `{0, .., n-1}`; `None` where undefined.
type PartialPerm = Vec<Option<usize>>;

fn perm_name(p: &PartialPerm) -> String {
    p.iter()
        .map(|v| v.map_or("_".to_string(), |k| (k + 1).to_string()))
        .collect()
}

/// `(s t)(x) = s(t(x))`, so that `θ_{st} = θ_s ∘ θ_t` in the natural action.
fn perm_compose(s: &PartialPerm, t: &PartialPerm) -> PartialPerm {
    t.iter().map(|v| v.and_then(|k| s[k])).collect()
}

/// A one-object inverse semigroup of partial bijections of `n` points,
/// closed under composition, together with its natural action
/// `θ_s: dom(s) → im(s)` on the points `1..=n`.
fn partial_bijections(
    n: usize,
    elements: Vec<(String, PartialPerm)>,
) -> (Arc<InverseSemigroupoid>, PartialAction) {
    let index = |p: &PartialPerm| {
        elements
            .iter()
            .position(|(_, q)| q == p)
            .unwrap_or_else(|| panic!("set not closed under composition: {}", perm_name(p)))
    };
    let arrows: Vec<(String, String, String)> = elements
        .iter()
        .map(|(name, _)| (name.clone(), "o".to_string(), "o".to_string()))
        .collect();
    let mut products = Vec::new();
    for (sn, s) in &elements {
        for (tn, t) in &elements {
            let u = &elements[index(&perm_compose(s, t))].0;
            products.push((sn.clone(), tn.clone(), u.clone()));
        }
    }
    let table = SemigroupoidTable::from_names(&["o".to_string()], &arrows, &products)
        .expect("names are distinct");
    let isg = Arc::new(infer_inverses(table).expect("partial bijections form an inverse semigroup"));
    let carrier = (1..=n).map(|k| k.to_string()).collect();
    let perms: Vec<PartialPerm> = elements.into_iter().map(|(_, p)| p).collect();
    let action = PartialAction::from_fn(
        isg.clone(),
        carrier,
        |s| {
            perms[s.index()]
                .iter()
                .flatten()
                .map(|&k| ElementId(k as u32))
                .collect()
        },
        |s, x| ElementId(perms[s.index()][x.index()].expect("x in dom(s)") as u32),
    )
    .expect("indices in range");
    (isg, action)
}

fn all_partial_bijections(n: usize) -> Vec<PartialPerm> {
    // Every map {0..n} -> {0..n} ∪ {undefined}, kept when injective.
    let mut out = Vec::new();
    let total = (n + 1).pow(n as u32);
    for mut code in 0..total {
        let mut p = Vec::with_capacity(n);
        for _ in 0..n {
            let v = code % (n + 1);
            code /= n + 1;
            p.push((v < n).then_some(v));
        }
        let image: BTreeSet<usize> = p.iter().flatten().copied().collect();
        if image.len() == p.iter().flatten().count() {
            out.push(p);
        }
    }
    out
}

/// The symmetric inverse monoid on `n` points with its natural action.
pub fn symmetric_inverse_monoid(n: usize) -> CatalogEntry {
    let elements = all_partial_bijections(n)
        .into_iter()
        .map(|p| (perm_name(&p), p))
        .collect();
    let (isg, action) = partial_bijections(n, elements);
    CatalogEntry {
        name: format!("symmetric-inverse-monoid-{n}"),
        structure: isg,
        actions: vec![CatalogAction::new("natural", action)],
    }
}

/// `Z_n` as a one-object inverse semigroupoid acting by rotation on `n` points.
pub fn cyclic_group(n: usize) -> CatalogEntry {
    let elements = (0..n)
        .map(|k| (format!("g{k}"), (0..n).map(|x| Some((x + k) % n)).collect()))
        .collect();
    let (isg, action) = partial_bijections(n, elements);
    CatalogEntry {
        name: format!("cyclic-{n}"),
        structure: isg,
        actions: vec![CatalogAction::new("rotation", action)],
    }
}

/// The Brandt semigroup `B_2` as partial bijections of two points.
pub fn brandt_b2() -> CatalogEntry {
    let elements = vec![
        ("0".to_string(), vec![None, None]),
        ("e11".to_string(), vec![Some(0), None]),
        ("e22".to_string(), vec![None, Some(1)]),
        ("e12".to_string(), vec![None, Some(0)]),
        ("e21".to_string(), vec![Some(1), None]),
    ];
    let (isg, action) = partial_bijections(2, elements);
    CatalogEntry {
        name: "brandt-2".to_string(),
        structure: isg,
        actions: vec![CatalogAction::new("natural", action)],
    }
}

/// Two idempotents `f <= e` acting by identities: `X_e = {1,2}`, `X_f = {1}`.
pub fn semilattice_2() -> CatalogEntry {
    let elements = vec![
        ("e".to_string(), vec![Some(0), Some(1)]),
        ("f".to_string(), vec![Some(0), None]),
    ];
    let (isg, action) = partial_bijections(2, elements);
    CatalogEntry {
        name: "semilattice-2".to_string(),
        structure: isg,
        actions: vec![CatalogAction::new("identities", action)],
    }
}

/// The trivial group acting trivially on three points.
pub fn trivial_group() -> CatalogEntry {
    let (isg, action) = partial_bijections(3, vec![("1".to_string(), vec![Some(0), Some(1), Some(2)])]);
    CatalogEntry {
        name: "trivial-group".to_string(),
        structure: isg,
        actions: vec![CatalogAction::new("trivial", action)],
    }
}

/// The pair groupoid on objects `{u, v}`: one arrow `(i,j): j -> i` per pair,
/// acting on its own arrows by left translation.
pub fn pair_groupoid_2() -> CatalogEntry {
    let objs = ["u", "v"];
    let name = |i: &str, j: &str| format!("{i}{j}");
    let mut arrows = Vec::new();
    let mut products = Vec::new();
    for i in objs {
        for j in objs {
            arrows.push((name(i, j), j.to_string(), i.to_string()));
            for k in objs {
                products.push((name(i, j), name(j, k), name(i, k)));
            }
        }
    }
    let objects: Vec<String> = objs.iter().map(|o| o.to_string()).collect();
    let table = SemigroupoidTable::from_names(&objects, &arrows, &products).expect("well-formed");
    let isg = Arc::new(infer_inverses(table).expect("groupoids are inverse"));
    let carrier: Vec<String> = isg.arrows().map(|s| isg.arrow_name(s).to_string()).collect();
    // X_s = arrows with codomain c(s); θ_s(p) = s p.
    let translation = {
        let isg = isg.clone();
        PartialAction::from_fn(
            isg.clone(),
            carrier,
            |s| {
                isg.arrows()
                    .filter(|&p| isg.cod(p) == isg.cod(s))
                    .map(|p| ElementId(p.0))
                    .collect()
            },
            |s, p| ElementId(isg.compose(s, ArrowId(p.0)).0),
        )
        .expect("indices in range")
    };
    // Action on the object set: (i,j) sends j to i.
    let on_objects = PartialAction::from_fn(
        isg.clone(),
        objects,
        |s| [ElementId(isg.cod(s).0)].into(),
        |s, _| ElementId(isg.cod(s).0),
    )
    .expect("indices in range");
    CatalogEntry {
        name: "pair-groupoid-2".to_string(),
        structure: isg,
        actions: vec![
            CatalogAction::new("translation", translation),
            CatalogAction::new("objects", on_objects),
        ],
    }
}

/// The eight-arrow example with its worked actions.
pub fn demo_entry() -> CatalogEntry {
    let structure = fixtures::demo_structure();
    let rebind = |a: PartialAction| {
        PartialAction::new(
            structure.clone(),
            a.carrier_names().to_vec(),
            structure.arrows().map(|s| a.domain(s).clone()).collect(),
            structure.arrows().map(|s| a.map(s).clone()).collect(),
        )
        .expect("same structure")
    };
    CatalogEntry {
        name: "demo".to_string(),
        structure: structure.clone(),
        actions: vec![
            CatalogAction::new("four-point", rebind(fixtures::demo_x())),
            CatalogAction::new("three-point", rebind(fixtures::demo_y())),
            CatalogAction::new("restricted", rebind(fixtures::demo_restricted())),
        ],
    }
}

/// No objects, no arrows; the empty action.
pub fn empty() -> CatalogEntry {
    let isg = Arc::new(infer_inverses(SemigroupoidTable::new::<&str>(&[], &[]).unwrap()).unwrap());
    let action = PartialAction::new(isg.clone(), vec![], vec![], vec![]).unwrap();
    CatalogEntry {
        name: "empty".to_string(),
        structure: isg,
        actions: vec![CatalogAction::new("empty", action)],
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        demo_entry(),
        cyclic_group(2),
        cyclic_group(3),
        trivial_group(),
        symmetric_inverse_monoid(2),
        symmetric_inverse_monoid(3),
        brandt_b2(),
        pair_groupoid_2(),
        semilattice_2(),
        empty(),
    ]
}

/// Pseudo-random nonempty subset of `0..size` (empty only when `size == 0`).
pub fn random_subset(size: usize, seed: u64) -> ElementSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut subset: ElementSet = (0..size as u32)
        .filter(|_| rng.gen_bool(0.5))
        .map(ElementId)
        .collect();
    if subset.is_empty() && size > 0 {
        let all: Vec<u32> = (0..size as u32).collect();
        subset.insert(ElementId(*all.choose(&mut rng).expect("nonempty")));
    }
    subset
}

/// Restricts the `global_index`-th global action of `entry` to a seeded
/// random subset.
///
/// # Panics
///
/// If the entry has fewer than `global_index + 1` global actions.
pub fn random_partial_action(entry: &CatalogEntry, global_index: usize, seed: u64) -> PartialAction {
    let source = &entry
        .global_actions()
        .nth(global_index)
        .unwrap_or_else(|| panic!("{} has no global action #{global_index}", entry.name))
        .action;
    let subset = random_subset(source.carrier_size(), seed);
    restrict(source, &subset, CoverageMode::Trim).expect("restriction of a valid action")
}

/// Adds, for every non-global action of the entry, its globalization as a
/// new global action.
pub fn grow_catalog(entry: &CatalogEntry) -> CatalogEntry {
    let mut grown = entry.clone();
    for a in entry.partial_actions() {
        let g = build_globalization(&a.action).expect("catalog actions are valid");
        grown.actions.push(CatalogAction::new(
            format!("globalized-{}", a.label),
            g.global_action().clone(),
        ));
    }
    grown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::validate_p_axioms;

    #[test]
    fn catalog_sizes() {
        let entries = catalog();
        let find = |n: &str| entries.iter().find(|e| e.name == n).unwrap();
        let demo = find("demo");
        assert_eq!(demo.structure.arrow_count(), 8);
        assert_eq!(demo.structure.idempotents().len(), 4);
        let z2 = find("cyclic-2");
        assert_eq!(
            (z2.structure.object_count(), z2.structure.arrow_count(), z2.structure.idempotents().len()),
            (1, 2, 1)
        );
        let i2 = find("symmetric-inverse-monoid-2");
        assert_eq!(i2.structure.arrow_count(), 7);
        assert_eq!(find("symmetric-inverse-monoid-3").structure.arrow_count(), 34);
    }

    #[test]
    fn grow_adds_one_global_per_partial() {
        let demo = demo_entry();
        let grown = grow_catalog(&demo);
        assert_eq!(grown.actions.len(), demo.actions.len() + 2);
        assert!(grown.actions[demo.actions.len()..].iter().all(|a| a.global));
        let z3 = cyclic_group(3);
        assert_eq!(grow_catalog(&z3), z3);
    }

    #[test]
    fn seeded_draws_are_deterministic_and_valid() {
        for entry in catalog() {
            for k in 0..entry.global_actions().count() {
                for seed in 0..10 {
                    let a = random_partial_action(&entry, k, seed);
                    assert_eq!(a, random_partial_action(&entry, k, seed));
                    assert!(validate_p_axioms(&a).ok());
                }
            }
        }
    }
}
