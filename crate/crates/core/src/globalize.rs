//! Universal globalization of a partial action.
//!
//! Seeds are pairs `(s, x)` with `x ∈ X_{s*s}`. Two seeds are related by `∼`
//! when `(t*, s)` is composable, `x ∈ X_{s*t}` and `θ_{t*s}(x) = y`, or when
//! both arrows are idempotent and `x = y`. The relation is reflexive and
//! symmetric but not transitive; its generated equivalence `≈` gives the
//! quotient `E`, on which `η_s([p, x]) = [sp, x]` is a global action and
//! `i(x) = [e, x]` embeds the original action.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::action::{validate_p_axioms, ElementId, ElementSet, PartialAction, PartialMap};
use crate::algebra::{ArrowId, ObjectId};
use crate::exec::{filter_map_indexed, Execution};
use crate::morphism::{
    commuting_s_functions, compose, is_s_function, GlobalizationTriple, SFunction,
};
use crate::report::{ValidationReport, Witness};

/// Points of the globalization are equivalence classes of seeds.
pub type ClassId = ElementId;

/// Default cap on the number of candidate maps in [`verify_universal`].
pub const DEFAULT_EXHAUSTIVE_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed {
    pub arrow: ArrowId,
    pub point: ElementId,
}

impl Seed {
    pub fn new(arrow: ArrowId, point: ElementId) -> Self {
        Self { arrow, point }
    }

    pub fn display<'a>(&self, act: &'a PartialAction) -> SeedDisplay<'a> {
        SeedDisplay { seed: *self, act }
    }
}

pub struct SeedDisplay<'a> {
    seed: Seed,
    act: &'a PartialAction,
}

impl fmt::Display for SeedDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})",
            self.act.structure().arrow_name(self.seed.arrow),
            self.act.element_name(self.seed.point)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlobalizeError {
    #[error("input is not a partial action:\n{0}")]
    InvalidInput(ValidationReport),
    #[error("{what} is not well defined: {first} and {second} disagree")]
    IllDefined {
        what: String,
        first: String,
        second: String,
    },
    #[error("target embedding does not start at the globalized action")]
    SourceMismatch,
    #[error("omega_s(j(x)) is undefined at seed {0}")]
    Undefined(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

/// The seed set `D`, in `(arrow, point)` order.
pub fn build_seed_set(act: &PartialAction) -> Vec<Seed> {
    let isg = act.structure();
    isg.arrows()
        .flat_map(|s| {
            act.domain(isg.domain_idempotent(s))
                .iter()
                .map(move |&x| Seed::new(s, x))
        })
        .collect()
}

/// The generating relation `∼` on seeds.
pub fn tilde(act: &PartialAction, p: Seed, q: Seed) -> bool {
    let isg = act.structure();
    let (s, x, t, y) = (p.arrow, p.point, q.arrow, q.point);
    let t_inv = isg.inv(t);
    if isg.composable(t_inv, s) {
        let ts = isg.compose(t_inv, s);
        let st = isg.compose(isg.inv(s), t);
        if act.domain(st).contains(&x) && act.act(ts, x) == Some(y) {
            return true;
        }
    }
    isg.is_idempotent(s) && isg.is_idempotent(t) && x == y
}

/// Index pairs `(i, j)`, `i < j`, of seeds related by `∼` in either direction.
pub fn tilde_pairs(act: &PartialAction, seeds: &[Seed], exec: Execution) -> Vec<(usize, usize)> {
    let n = seeds.len();
    filter_map_indexed(n, exec, |i| {
        let related: Vec<(usize, usize)> = (i + 1..n)
            .filter(|&j| tilde(act, seeds[i], seeds[j]) || tilde(act, seeds[j], seeds[i]))
            .map(|j| (i, j))
            .collect();
        (!related.is_empty()).then_some(related)
    })
    .into_iter()
    .flatten()
    .collect()
}

/// `D/≈` with deterministic class numbering: classes are numbered in the
/// order of their least seed, see also [`Quotient::renumbered`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    seeds: Vec<Seed>,
    class_of: Vec<ClassId>,
    representatives: Vec<Seed>,
    index: HashMap<Seed, usize>,
}

impl Quotient {
    pub fn seeds(&self) -> &[Seed] {
        &self.seeds
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn classes(&self) -> impl Iterator<Item = ClassId> {
        (0..self.representatives.len() as u32).map(ElementId)
    }

    pub fn class_of(&self, seed: Seed) -> Option<ClassId> {
        self.index.get(&seed).map(|&i| self.class_of[i])
    }

    pub fn contains(&self, seed: Seed) -> bool {
        self.index.contains_key(&seed)
    }

    /// Least seed of the class.
    pub fn representative(&self, c: ClassId) -> Seed {
        self.representatives[c.index()]
    }

    /// The same partition with the classes of `leading` numbered first, in
    /// the order given; the remaining classes keep their relative order.
    pub fn renumbered(&self, leading: &[Seed]) -> Quotient {
        let n = self.class_count();
        let mut new_id: Vec<Option<u32>> = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let old = leading
            .iter()
            .filter_map(|&s| self.class_of(s))
            .chain(self.classes());
        for c in old {
            if new_id[c.index()].is_none() {
                new_id[c.index()] = Some(order.len() as u32);
                order.push(c);
            }
        }
        let relabel = |c: ClassId| ElementId(new_id[c.index()].expect("every class is ordered"));
        Quotient {
            seeds: self.seeds.clone(),
            class_of: self.class_of.iter().map(|&c| relabel(c)).collect(),
            representatives: order.iter().map(|&c| self.representatives[c.index()]).collect(),
            index: self.index.clone(),
        }
    }

    pub fn members(&self, c: ClassId) -> Vec<Seed> {
        self.seeds
            .iter()
            .zip(&self.class_of)
            .filter(|(_, &k)| k == c)
            .map(|(&s, _)| s)
            .collect()
    }
}

/// Equivalence closure of `∼` by union-find over all seed pairs.
pub fn close_equivalence(seeds: &[Seed], act: &PartialAction) -> Quotient {
    close_equivalence_with(seeds, act, Execution::default())
}

pub fn close_equivalence_with(seeds: &[Seed], act: &PartialAction, exec: Execution) -> Quotient {
    let mut seeds = seeds.to_vec();
    seeds.sort();
    seeds.dedup();
    let mut uf = crate::union_find::UnionFind::new(seeds.len());
    for (i, j) in tilde_pairs(act, &seeds, exec) {
        uf.union(i, j);
    }
    let mut root_class: HashMap<usize, ClassId> = HashMap::new();
    let mut representatives = Vec::new();
    let mut class_of = Vec::with_capacity(seeds.len());
    for (i, &seed) in seeds.iter().enumerate() {
        let root = uf.find(i);
        let c = *root_class.entry(root).or_insert_with(|| {
            representatives.push(seed);
            ElementId(representatives.len() as u32 - 1)
        });
        class_of.push(c);
    }
    let index = seeds.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    Quotient {
        seeds,
        class_of,
        representatives,
        index,
    }
}

/// `D_{s*} = {(p, x) ∈ D : (s, p) composable, x ∈ X_{p*s*sp}}`, the seeds
/// on which `ζ_s(p, x) = (sp, x)` is defined.
pub fn seed_domain(act: &PartialAction, s: ArrowId) -> Vec<Seed> {
    let isg = act.structure();
    build_seed_set(act)
        .into_iter()
        .filter(|seed| {
            isg.composable(s, seed.arrow) && {
                let sp = isg.compose(s, seed.arrow);
                act.domain(isg.domain_idempotent(sp)).contains(&seed.point)
            }
        })
        .collect()
}

/// The globalization `(i, E, η)` of a partial action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Globalization {
    quotient: Quotient,
    global_action: PartialAction,
    canonical_embedding: SFunction,
}

impl Globalization {
    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// `(E, η)`.
    pub fn global_action(&self) -> &PartialAction {
        &self.global_action
    }

    /// `i: X → E`.
    pub fn canonical_embedding(&self) -> &SFunction {
        &self.canonical_embedding
    }

    /// The action that was globalized.
    pub fn input(&self) -> &PartialAction {
        self.canonical_embedding.source()
    }

    /// `E_s`.
    pub fn family(&self, s: ArrowId) -> &ElementSet {
        self.global_action.domain(s)
    }

    /// `η_s` as a map `E_{s*} → E_s`.
    pub fn eta(&self, s: ArrowId) -> &PartialMap {
        self.global_action.map(s)
    }

    pub fn class_of(&self, seed: Seed) -> Option<ClassId> {
        self.quotient.class_of(seed)
    }

    pub fn class_label(&self, c: ClassId) -> &str {
        self.global_action.element_name(c)
    }
}

fn ill_defined(act: &PartialAction, what: String, a: Seed, b: Seed) -> GlobalizeError {
    GlobalizeError::IllDefined {
        what,
        first: a.display(act).to_string(),
        second: b.display(act).to_string(),
    }
}

pub fn build_globalization(act: &PartialAction) -> Result<Globalization, GlobalizeError> {
    build_globalization_with(act, Execution::default())
}

pub fn build_globalization_with(
    act: &PartialAction,
    exec: Execution,
) -> Result<Globalization, GlobalizeError> {
    let report = validate_p_axioms(act);
    if !report.ok() {
        return Err(GlobalizeError::InvalidInput(report));
    }
    let isg = act.structure();
    let seeds = build_seed_set(act);
    // Classes meeting the image of the carrier come first, in carrier order.
    let leading: Vec<Seed> = act
        .elements()
        .filter_map(|x| {
            isg.idempotents()
                .into_iter()
                .find(|&e| act.domain(e).contains(&x))
                .map(|e| Seed::new(e, x))
        })
        .collect();
    let quotient = close_equivalence_with(&seeds, act, exec).renumbered(&leading);
    let class = |seed: Seed| quotient.class_of(seed).expect("seed lies in D");

    let mut domains = Vec::with_capacity(isg.arrow_count());
    let mut maps = Vec::with_capacity(isg.arrow_count());
    for s in isg.arrows() {
        // E_s is the image of D_s = seed_domain(s*).
        domains.push(
            seed_domain(act, isg.inv(s))
                .into_iter()
                .map(class)
                .collect::<ElementSet>(),
        );
        // η_s, re-derived from every representative in D_{s*}.
        let mut eta: PartialMap = PartialMap::new();
        let mut witness: HashMap<ClassId, Seed> = HashMap::new();
        for seed in seed_domain(act, s) {
            let image = Seed::new(isg.compose(s, seed.arrow), seed.point);
            let (from, to) = (class(seed), class(image));
            match eta.insert(from, to) {
                Some(prev) if prev != to => {
                    return Err(ill_defined(
                        act,
                        format!("eta_{}", isg.arrow_name(s)),
                        witness[&from],
                        seed,
                    ))
                }
                _ => {
                    witness.entry(from).or_insert(seed);
                }
            }
        }
        maps.push(eta);
    }
    let labels = quotient
        .classes()
        .map(|c| format!("c{}", c.0 + 1))
        .collect();
    let global_action = PartialAction::new(isg.clone(), labels, domains, maps)
        .expect("class indices are in range");

    // i(x) = [e, x] for any idempotent e with x ∈ X_e.
    let mut embedding = Vec::with_capacity(act.carrier_size());
    for x in act.elements() {
        let mut chosen: Option<(Seed, ClassId)> = None;
        for e in isg.idempotents().into_iter().filter(|&e| act.domain(e).contains(&x)) {
            let seed = Seed::new(e, x);
            match chosen {
                None => chosen = Some((seed, class(seed))),
                Some((first, c)) if c != class(seed) => {
                    return Err(ill_defined(act, "i".to_string(), first, seed))
                }
                Some(_) => {}
            }
        }
        // Coverage holds after validation, so some idempotent contains x.
        embedding.push(chosen.expect("validated action covers its carrier").1);
    }
    let canonical_embedding = SFunction::new(act.clone(), global_action.clone(), embedding)
        .expect("embedding shares the structure");
    Ok(Globalization {
        quotient,
        global_action,
        canonical_embedding,
    })
}

/// The mediating map `σ([s, x]) = ω_s(j(x))` toward a global target
/// `(j, Z, ω)`. Every seed of every class is evaluated, so a disagreement
/// between representatives is reported rather than hidden.
pub fn mediating(glob: &Globalization, target: &GlobalizationTriple) -> Result<SFunction, GlobalizeError> {
    let j = target.embedding();
    if j.source() != glob.input() {
        return Err(GlobalizeError::SourceMismatch);
    }
    let act = glob.input();
    let z = j.target();
    let mut sigma: Vec<Option<(ElementId, Seed)>> = vec![None; glob.quotient.class_count()];
    for &seed in glob.quotient.seeds() {
        let value = z
            .act(seed.arrow, j.apply(seed.point))
            .ok_or_else(|| GlobalizeError::Undefined(seed.display(act).to_string()))?;
        let c = glob.quotient.class_of(seed).expect("seed lies in D");
        match sigma[c.index()] {
            None => sigma[c.index()] = Some((value, seed)),
            Some((v, first)) if v != value => {
                return Err(ill_defined(act, "sigma".to_string(), first, seed))
            }
            Some(_) => {}
        }
    }
    let map = sigma
        .into_iter()
        .map(|v| v.expect("every class has a seed").0)
        .collect();
    Ok(SFunction::new(glob.global_action.clone(), z.clone(), map).expect("same structure"))
}

/// Checks that `σ` is an S-function with `σ ∘ i = j` and, when
/// `|Z|^|E| ≤ exhaustive_bound`, that it is the only such map.
pub fn verify_universal(
    glob: &Globalization,
    target: &GlobalizationTriple,
    sigma: &SFunction,
    exhaustive_bound: u64,
) -> ValidationReport {
    verify_universal_with(glob, target, sigma, exhaustive_bound, Execution::default())
}

pub fn verify_universal_with(
    glob: &Globalization,
    target: &GlobalizationTriple,
    sigma: &SFunction,
    exhaustive_bound: u64,
    exec: Execution,
) -> ValidationReport {
    let mut report = is_s_function(sigma);
    let i = glob.canonical_embedding();
    let j = target.embedding();
    match compose(sigma, i) {
        Ok(composite) if composite.map() == j.map() => {}
        Ok(composite) => {
            for x in i.source().elements().filter(|&x| composite.apply(x) != j.apply(x)) {
                report.push(
                    "commutes",
                    format!("sigma(i({0})) != j({0})", i.source().element_name(x)),
                    vec![Witness::Element(x)],
                );
            }
        }
        Err(e) => report.push("commutes", format!("sigma o i undefined: {e}"), vec![]),
    }
    match commuting_s_functions(i, j, exhaustive_bound, exec) {
        Ok(Some(found)) => {
            if found.len() != 1 || found[0] != sigma.map() {
                report.push(
                    "unique",
                    format!(
                        "{} S-functions E -> Z commute with i and j (expected exactly sigma)",
                        found.len()
                    ),
                    vec![],
                );
            } else {
                report.note("uniqueness confirmed by exhaustive enumeration");
            }
        }
        Ok(None) => report.note("uniqueness skipped (bound)"),
        Err(e) => report.push("unique", e.to_string(), vec![]),
    }
    report
}

/// `E_u`: classes of seeds whose arrow has codomain `u`.
pub fn fiber_classes(glob: &Globalization, u: ObjectId) -> Result<BTreeSet<ClassId>, GlobalizeError> {
    let isg = glob.input().structure();
    if u.index() >= isg.object_count() {
        return Err(GlobalizeError::UnknownObject(u.0.to_string()));
    }
    Ok(glob
        .quotient
        .seeds()
        .iter()
        .filter(|seed| isg.cod(seed.arrow) == u)
        .map(|&seed| glob.quotient.class_of(seed).expect("seed lies in D"))
        .collect())
}

/// `σ` restricted to each fiber `E_u` is injective.
pub fn check_fiber_injectivity(sigma: &SFunction, glob: &Globalization) -> ValidationReport {
    let isg = glob.input().structure();
    let mut report = ValidationReport::new();
    for u in isg.objects() {
        let mut seen: HashMap<ElementId, ClassId> = HashMap::new();
        for c in fiber_classes(glob, u).expect("object of the structure") {
            let v = sigma.apply(c);
            if let Some(&prev) = seen.get(&v) {
                report.push(
                    "fiber-injective",
                    format!(
                        "{} and {} in the fiber over {} both map to {}",
                        glob.class_label(prev),
                        glob.class_label(c),
                        isg.object_name(u),
                        sigma.target().element_name(v)
                    ),
                    vec![Witness::Object(u), Witness::Element(prev), Witness::Element(c)],
                );
            } else {
                seen.insert(v, c);
            }
        }
    }
    report
}

/// Ordered pairs of `≈`-equivalent seeds, each seed paired with itself included.
fn equivalent_pairs(q: &Quotient) -> Vec<(Seed, Seed)> {
    let mut by_class: Vec<Vec<Seed>> = vec![Vec::new(); q.class_count()];
    for (&seed, &c) in q.seeds.iter().zip(&q.class_of) {
        by_class[c.index()].push(seed);
    }
    by_class
        .iter()
        .flat_map(|members| {
            members
                .iter()
                .flat_map(move |&a| members.iter().map(move |&b| (a, b)))
        })
        .collect()
}

/// For `≈`-equivalent `(s,x), (t,y)`: `x ∈ X_{s*}` iff `y ∈ X_{t*}`, and then
/// `θ_s(x) = θ_t(y)`.
pub fn audit_evaluation_coherence(glob: &Globalization) -> ValidationReport {
    let act = glob.input();
    let isg = act.structure();
    let mut report = ValidationReport::new();
    for (p, q) in equivalent_pairs(&glob.quotient) {
        let left = act.domain(isg.inv(p.arrow)).contains(&p.point);
        let right = act.domain(isg.inv(q.arrow)).contains(&q.point);
        let agrees = left == right && (!left || act.act(p.arrow, p.point) == act.act(q.arrow, q.point));
        if !agrees {
            report.push(
                "evaluation-coherence",
                format!(
                    "{} and {} are equivalent but evaluate differently",
                    p.display(act),
                    q.display(act)
                ),
                vec![Witness::Arrow(p.arrow), Witness::Element(p.point), Witness::Arrow(q.arrow), Witness::Element(q.point)],
            );
        }
    }
    report
}

/// For `≈`-equivalent `(s,x), (t,y)` and every `p` composable with both:
/// `x ∈ X_{(ps)*(ps)}` iff `y ∈ X_{(pt)*(pt)}`, and then `(ps,x) ≈ (pt,y)`.
pub fn audit_translation(glob: &Globalization) -> ValidationReport {
    audit_translation_with(glob, Execution::default())
}

pub fn audit_translation_with(glob: &Globalization, exec: Execution) -> ValidationReport {
    let act = glob.input();
    let isg = act.structure();
    let pairs = equivalent_pairs(&glob.quotient);
    let failures = filter_map_indexed(pairs.len(), exec, |k| {
        let (a, b) = pairs[k];
        let bad: Vec<(Seed, Seed, ArrowId)> = isg
            .arrows()
            .filter(|&p| isg.composable(p, a.arrow) && isg.composable(p, b.arrow))
            .filter(|&p| {
                let ps = isg.compose(p, a.arrow);
                let pt = isg.compose(p, b.arrow);
                let left = act.domain(isg.domain_idempotent(ps)).contains(&a.point);
                let right = act.domain(isg.domain_idempotent(pt)).contains(&b.point);
                left != right
                    || (left
                        && glob.quotient.class_of(Seed::new(ps, a.point))
                            != glob.quotient.class_of(Seed::new(pt, b.point)))
            })
            .map(|p| (a, b, p))
            .collect();
        (!bad.is_empty()).then_some(bad)
    });
    let mut report = ValidationReport::new();
    for (a, b, p) in failures.into_iter().flatten() {
        report.push(
            "translation",
            format!(
                "{} ≈ {} but translating by {} breaks the equivalence",
                a.display(act),
                b.display(act),
                isg.arrow_name(p)
            ),
            vec![Witness::Arrow(a.arrow), Witness::Element(a.point), Witness::Arrow(b.arrow), Witness::Element(b.point), Witness::Arrow(p)],
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::is_global;
    use crate::fixtures;

    fn seed(act: &PartialAction, s: &str, x: &str) -> Seed {
        Seed::new(
            act.structure().arrow_by_name(s).unwrap(),
            act.element_by_name(x).unwrap(),
        )
    }

    #[test]
    fn tilde_is_not_transitive_on_the_four_point_example() {
        let x = fixtures::demo_x();
        let (a1, aa4, bb4) = (seed(&x, "a", "1"), seed(&x, "aa*", "4"), seed(&x, "bb*", "4"));
        assert!(tilde(&x, a1, aa4));
        assert!(tilde(&x, aa4, bb4));
        assert!(!tilde(&x, a1, bb4));
    }

    #[test]
    fn one_point_trivial_action() {
        let isg = std::sync::Arc::new(
            crate::algebra::infer_inverses(
                crate::algebra::SemigroupoidTable::from_names(&["o"], &[("e", "o", "o")], &[("e", "e", "e")])
                    .unwrap(),
            )
            .unwrap(),
        );
        let act = PartialAction::from_names(isg, &["p"], &[("e", &["p"])], &[("e", &[("p", "p")])]).unwrap();
        assert_eq!(build_seed_set(&act).len(), 1);
        let g = build_globalization(&act).unwrap();
        assert_eq!(g.quotient().class_count(), 1);
        assert!(is_global(g.global_action()));
        let e = ArrowId(0);
        assert_eq!(g.eta(e).iter().collect::<Vec<_>>(), [(&ElementId(0), &ElementId(0))]);
        // D_{e*} contains every (e, x).
        assert_eq!(seed_domain(&act, e), vec![seed(&act, "e", "p")]);
    }

    #[test]
    fn sequential_and_parallel_closures_agree() {
        for act in [fixtures::demo_x(), fixtures::demo_restricted(), fixtures::demo_y()] {
            let seeds = build_seed_set(&act);
            assert_eq!(
                close_equivalence_with(&seeds, &act, Execution::Sequential),
                close_equivalence_with(&seeds, &act, Execution::Parallel)
            );
        }
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(matches!(
            build_globalization(&fixtures::demo_x_as_printed()),
            Err(GlobalizeError::InvalidInput(_))
        ));
    }

    #[test]
    fn representative_is_least_member() {
        let x = fixtures::demo_x();
        let q = close_equivalence(&build_seed_set(&x), &x);
        for c in q.classes() {
            let members = q.members(c);
            assert_eq!(q.representative(c), *members.iter().min().unwrap());
            assert_eq!(q.class_of(q.representative(c)), Some(c));
        }
    }

    #[test]
    fn mediating_rejects_foreign_target() {
        let g = build_globalization(&fixtures::demo_x()).unwrap();
        let other = GlobalizationTriple::new(
            SFunction::by_names(fixtures::demo_restricted(), fixtures::demo_y()).unwrap(),
        )
        .unwrap();
        assert_eq!(mediating(&g, &other), Err(GlobalizeError::SourceMismatch));
    }
}
