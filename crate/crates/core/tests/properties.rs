mod common;

use std::sync::OnceLock;

use common::*;
use isgd::algebra::check_inverse_laws;
use isgd::generators::{catalog, grow_catalog, random_partial_action, CatalogEntry};
use isgd::globalize::{
    audit_evaluation_coherence, audit_translation, build_globalization_with, check_fiber_injectivity,
    close_equivalence_with, DEFAULT_EXHAUSTIVE_BOUND,
};
use isgd::io::{action_header, parse_action, parse_structure, print_action, print_structure};
use isgd::morphism::{induced_action, is_embedding_pointwise, is_isomorphism};
use isgd::*;
use proptest::prelude::*;

fn entries() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(catalog)
}

/// `(entry, global action index)` pairs available for restriction.
fn sources() -> Vec<(usize, usize)> {
    entries()
        .iter()
        .enumerate()
        .flat_map(|(e, entry)| (0..entry.global_actions().count()).map(move |k| (e, k)))
        .collect()
}

fn draw() -> impl Strategy<Value = PartialAction> {
    (prop::sample::select(sources()), any::<u64>())
        .prop_map(|((e, k), seed)| random_partial_action(&entries()[e], k, seed))
}

/// Perturbs one domain or one map entry of an action.
fn perturb(act: &PartialAction, arrow: usize, point: usize, kind: u8) -> PartialAction {
    let isg = act.structure().clone();
    let n = act.carrier_size() as u32;
    let s = ArrowId((arrow % isg.arrow_count()) as u32);
    let x = ElementId(point as u32 % n);
    let mut domains: Vec<ElementSet> = isg.arrows().map(|t| act.domain(t).clone()).collect();
    let mut maps: Vec<PartialMap> = isg.arrows().map(|t| act.map(t).clone()).collect();
    match kind % 3 {
        0 => {
            if !domains[s.index()].remove(&x) {
                domains[s.index()].insert(x);
            }
        }
        1 => {
            if let Some(v) = maps[s.index()].get_mut(&x) {
                *v = ElementId((v.0 + 1) % n);
            } else {
                maps[s.index()].insert(x, x);
            }
        }
        _ => {
            maps[s.index()].remove(&x);
        }
    }
    PartialAction::new(isg, act.carrier_names().to_vec(), domains, maps).unwrap()
}

#[test]
fn catalog_structures_satisfy_the_inverse_laws() {
    for entry in entries() {
        let isg = &entry.structure;
        assert!(validate_semigroupoid(isg.table()).ok(), "{}", entry.name);
        assert!(naive_assoc_failures(isg.table()).is_empty(), "{}", entry.name);
        assert!(check_inverse_laws(isg).ok(), "{}", entry.name);
        for s in isg.arrows() {
            assert_eq!(isg.inv(s), naive_inverse(isg.table(), s));
            for t in isg.arrows() {
                assert!(isg.natural_leq_diagnostic(s, t).agree());
            }
        }
        for a in &entry.actions {
            assert!(validate_p_axioms(&a.action).ok(), "{}/{}", entry.name, a.label);
            assert_eq!(a.global, is_global(&a.action));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn restrictions_satisfy_both_axiom_systems(act in draw()) {
        prop_assert!(validate_p_axioms(&act).ok());
        prop_assert!(validate_e_axioms(&act).ok());
        prop_assert!(check_derived_propositions(&act).ok());
        prop_assert!(isgd::action::global_diagnostic(&act).agree());
    }

    #[test]
    fn axiom_systems_agree_on_perturbed_actions(
        act in draw(), arrow in 0usize..64, point in 0usize..16, kind in 0u8..3
    ) {
        prop_assume!(act.carrier_size() > 0 && act.structure().arrow_count() > 0);
        let broken = perturb(&act, arrow, point, kind);
        prop_assert_eq!(validate_p_axioms(&broken).ok(), validate_e_axioms(&broken).ok());
    }

    #[test]
    fn tilde_is_reflexive_and_symmetric(act in draw()) {
        let seeds = isgd::globalize::build_seed_set(&act);
        for &p in &seeds {
            prop_assert!(tilde(&act, p, p));
            for &q in &seeds {
                prop_assert_eq!(tilde(&act, p, q), tilde(&act, q, p));
            }
        }
    }

    #[test]
    fn closure_matches_the_naive_oracle(act in draw()) {
        let seeds = isgd::globalize::build_seed_set(&act);
        prop_assert_eq!(seeds.len(), naive_seeds(&act).len());
        let glob = build_globalization(&act).unwrap();
        prop_assert_eq!(partition_of(&glob), naive_partition(&act));
        let q = glob.quotient();
        for c in q.classes() {
            prop_assert_eq!(q.class_of(q.representative(c)), Some(c));
        }
        let seq = close_equivalence_with(&seeds, &act, Execution::Sequential);
        let par = close_equivalence_with(&seeds, &act, Execution::Parallel);
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn globalization_is_global_and_universal(act in draw()) {
        let glob = build_globalization(&act).unwrap();
        let e = glob.global_action();
        prop_assert!(validate_p_axioms(e).ok());
        prop_assert!(is_global(e));
        let isg = act.structure();
        for (s, t) in isg.composable_pairs() {
            let st = isg.compose(s, t);
            let composite: PartialMap = e.map(t)
                .iter()
                .filter_map(|(&x, y)| e.map(s).get(y).map(|&z| (x, z)))
                .collect();
            prop_assert_eq!(&composite, e.map(st));
        }
        let i = glob.canonical_embedding();
        prop_assert!(is_embedding(i).ok());
        prop_assert!(is_embedding_pointwise(i).ok());
        prop_assert_eq!(&induced_action(i).unwrap(), &act);
        prop_assert!(audit_evaluation_coherence(&glob).ok());
        prop_assert!(audit_translation(&glob).ok());
        prop_assert_eq!(&build_globalization_with(&act, Execution::Sequential).unwrap(), &glob);
    }

    #[test]
    fn mediating_maps_commute_and_are_fiber_injective(
        (e, k) in prop::sample::select(sources()), seed in any::<u64>()
    ) {
        let entry = &entries()[e];
        let source = &entry.global_actions().nth(k).unwrap().action;
        let subset = isgd::generators::random_subset(source.carrier_size(), seed);
        let (act, kept) = restrict_with_inclusion(source, &subset, CoverageMode::Trim).unwrap();
        let glob = build_globalization(&act).unwrap();
        let j = SFunction::new(act.clone(), source.clone(), kept).unwrap();
        prop_assert!(is_embedding(&j).ok());
        let triple = GlobalizationTriple::new(j.clone()).unwrap();
        let sigma = mediating(&glob, &triple).unwrap();
        prop_assert!(is_s_function(&sigma).ok());
        let composite = isgd::morphism::compose(&sigma, glob.canonical_embedding()).unwrap();
        prop_assert_eq!(composite.map(), j.map());
        prop_assert!(check_fiber_injectivity(&sigma, &glob).ok());
        let report = verify_universal(&glob, &triple, &sigma, DEFAULT_EXHAUSTIVE_BOUND);
        prop_assert!(report.ok(), "{}", report);
    }

    #[test]
    fn global_inputs_globalize_to_themselves((e, k) in prop::sample::select(sources())) {
        let source = &entries()[e].global_actions().nth(k).unwrap().action;
        let glob = build_globalization(source).unwrap();
        prop_assert_eq!(glob.quotient().class_count(), source.carrier_size());
        prop_assert!(is_isomorphism(glob.canonical_embedding()));
    }

    #[test]
    fn random_mutations_match_the_associativity_oracle(
        e in 0usize..10, s in 0usize..64, t in 0usize..64, u in 0usize..64
    ) {
        let entry = &entries()[e % entries().len()];
        let mut table = entry.structure.table().clone();
        let pairs: Vec<_> = table.composable_pairs().collect();
        prop_assume!(!pairs.is_empty());
        let (a, b) = pairs[(s * 64 + t) % pairs.len()];
        let candidates: Vec<ArrowId> = table
            .arrows()
            .filter(|&c| table.dom(c) == table.dom(b) && table.cod(c) == table.cod(a))
            .collect();
        table.set_mul(a, b, Some(candidates[u % candidates.len()]));
        let report = validate_semigroupoid(&table);
        let found: std::collections::BTreeSet<_> = report
            .with_axiom("assoc")
            .map(|v| match v.witness.as_slice() {
                [Witness::Arrow(p), Witness::Arrow(q), Witness::Arrow(r)] => (
                    table.arrow_name(*p).to_string(),
                    table.arrow_name(*q).to_string(),
                    table.arrow_name(*r).to_string(),
                ),
                _ => unreachable!(),
            })
            .collect();
        prop_assert_eq!(found, naive_assoc_failures(&table));
    }

    #[test]
    fn actions_round_trip_through_text(act in draw()) {
        let text = print_action(&act, Some("s.isgd"));
        let header = action_header(&text).unwrap();
        prop_assert_eq!(header.as_deref(), Some("s.isgd"));
        let parsed = parse_action(&text, act.structure().clone()).unwrap();
        prop_assert_eq!(&parsed, &act);
        prop_assert_eq!(print_action(&parsed, Some("s.isgd")), text);
    }

    #[test]
    fn restrictions_are_deterministic((e, k) in prop::sample::select(sources()), seed in any::<u64>()) {
        let entry = &entries()[e];
        prop_assert_eq!(random_partial_action(entry, k, seed), random_partial_action(entry, k, seed));
    }
}

#[test]
fn structures_round_trip_through_text() {
    for entry in entries() {
        let table = entry.structure.table();
        let text = print_structure(table, None);
        assert_eq!(&parse_structure(&text).unwrap().table, table, "{}", entry.name);
    }
}

#[test]
fn grown_catalog_supports_a_second_generation() {
    for entry in entries() {
        let grown = grow_catalog(entry);
        let added = grown.actions.len() - entry.actions.len();
        assert_eq!(added, entry.partial_actions().count());
        for k in 0..grown.global_actions().count() {
            for seed in 0..4 {
                let act = random_partial_action(&grown, k, seed);
                assert!(validate_p_axioms(&act).ok());
                let glob = build_globalization(&act).unwrap();
                assert!(is_global(glob.global_action()));
            }
        }
    }
}
