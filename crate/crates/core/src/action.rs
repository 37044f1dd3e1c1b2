//! Partial actions of a finite inverse semigroupoid on a finite set.
//!
//! A [`PartialAction`] stores, for every arrow `s`, a domain subset `X_s` and
//! an explicit finite map `θ_s` that should be a bijection `X_{s*} → X_s`.
//! Nothing is inferred at construction (identity maps included) so that the
//! validators see exactly what was supplied.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{ArrowId, InverseSemigroupoid};
use crate::report::{ValidationReport, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub u32);

impl ElementId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type ElementSet = BTreeSet<ElementId>;
pub type PartialMap = BTreeMap<ElementId, ElementId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("element `{0}` declared twice")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("expected {expected} per-arrow entries, got {found}")]
    ArrowCount { expected: usize, found: usize },
    #[error("element index {0} is outside the carrier")]
    ElementOutOfRange(u32),
    #[error("map of `{arrow}` sends `{point}` twice")]
    DuplicateMapEntry { arrow: String, point: String },
    #[error("carrier not covered by idempotent domains; uncovered: {}", .0.join(", "))]
    Coverage(Vec<String>),
}

/// How [`restrict`] treats points not covered by any idempotent domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoverageMode {
    /// Uncovered points are an error.
    #[default]
    Strict,
    /// Uncovered points are dropped from the carrier.
    Trim,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAction {
    structure: Arc<InverseSemigroupoid>,
    carrier: Vec<String>,
    element_index: HashMap<String, ElementId>,
    domains: Vec<ElementSet>,
    maps: Vec<PartialMap>,
}

fn index_names(names: &[String]) -> Result<HashMap<String, ElementId>, ActionError> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), ElementId(i as u32)).is_some() {
            return Err(ActionError::DuplicateElement(n.clone()));
        }
    }
    Ok(index)
}

impl PartialAction {
    /// Assembles an action from per-arrow domains and maps (indexed by arrow).
    /// Only checks that every index is in range.
    pub fn new(
        structure: Arc<InverseSemigroupoid>,
        carrier: Vec<String>,
        domains: Vec<ElementSet>,
        maps: Vec<PartialMap>,
    ) -> Result<Self, ActionError> {
        let n = structure.arrow_count();
        for found in [domains.len(), maps.len()] {
            if found != n {
                return Err(ActionError::ArrowCount { expected: n, found });
            }
        }
        let size = carrier.len() as u32;
        let out_of_range = domains
            .iter()
            .flat_map(|d| d.iter())
            .chain(maps.iter().flat_map(|m| m.iter().flat_map(|(a, b)| [a, b])))
            .find(|x| x.0 >= size);
        if let Some(x) = out_of_range {
            return Err(ActionError::ElementOutOfRange(x.0));
        }
        let element_index = index_names(&carrier)?;
        Ok(Self {
            structure,
            carrier,
            element_index,
            domains,
            maps,
        })
    }

    /// Builds an action from element and arrow names. Arrows not listed get
    /// an empty domain or map.
    pub fn from_names(
        structure: Arc<InverseSemigroupoid>,
        carrier: &[&str],
        domains: &[(&str, &[&str])],
        maps: &[(&str, &[(&str, &str)])],
    ) -> Result<Self, ActionError> {
        let carrier: Vec<String> = carrier.iter().map(|s| s.to_string()).collect();
        let index = index_names(&carrier)?;
        let elem = |x: &str| {
            index
                .get(x)
                .copied()
                .ok_or_else(|| ActionError::UnknownElement(x.to_string()))
        };
        let arrow = |s: &str| {
            structure
                .arrow_by_name(s)
                .ok_or_else(|| ActionError::UnknownArrow(s.to_string()))
        };
        let n = structure.arrow_count();
        let mut dom_sets = vec![ElementSet::new(); n];
        for (s, xs) in domains {
            let s = arrow(s)?;
            for x in *xs {
                dom_sets[s.index()].insert(elem(x)?);
            }
        }
        let mut map_sets = vec![PartialMap::new(); n];
        for (s, pairs) in maps {
            let a = arrow(s)?;
            for (x, y) in *pairs {
                if map_sets[a.index()].insert(elem(x)?, elem(y)?).is_some() {
                    return Err(ActionError::DuplicateMapEntry {
                        arrow: s.to_string(),
                        point: x.to_string(),
                    });
                }
            }
        }
        Self::new(structure, carrier, dom_sets, map_sets)
    }

    /// Builds an action from a domain rule and a point rule `θ_s(x)` that is
    /// evaluated on every `x ∈ X_{s*}`.
    pub fn from_fn(
        structure: Arc<InverseSemigroupoid>,
        carrier: Vec<String>,
        domain: impl Fn(ArrowId) -> ElementSet,
        point: impl Fn(ArrowId, ElementId) -> ElementId,
    ) -> Result<Self, ActionError> {
        let domains: Vec<ElementSet> = structure.arrows().map(&domain).collect();
        let maps = structure
            .arrows()
            .map(|s| {
                domains[structure.inv(s).index()]
                    .iter()
                    .map(|&x| (x, point(s, x)))
                    .collect()
            })
            .collect();
        Self::new(structure, carrier, domains, maps)
    }

    pub fn structure(&self) -> &Arc<InverseSemigroupoid> {
        &self.structure
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + Clone {
        (0..self.carrier.len() as u32).map(ElementId)
    }

    pub fn carrier_names(&self) -> &[String] {
        &self.carrier
    }

    pub fn element_name(&self, x: ElementId) -> &str {
        &self.carrier[x.index()]
    }

    pub fn element_by_name(&self, name: &str) -> Option<ElementId> {
        self.element_index.get(name).copied()
    }

    /// `X_s`
    pub fn domain(&self, s: ArrowId) -> &ElementSet {
        &self.domains[s.index()]
    }

    /// The stored map `θ_s`, intended as `X_{s*} → X_s`.
    pub fn map(&self, s: ArrowId) -> &PartialMap {
        &self.maps[s.index()]
    }

    /// `θ_s(x)` when `x ∈ X_{s*}`.
    pub fn act(&self, s: ArrowId, x: ElementId) -> Option<ElementId> {
        if !self.domain(self.structure.inv(s)).contains(&x) {
            return None;
        }
        self.map(s).get(&x).copied()
    }

    /// `θ_s(A)` for `A` intersected with `X_{s*}`.
    pub fn image(&self, s: ArrowId, set: &ElementSet) -> ElementSet {
        set.iter().filter_map(|&x| self.act(s, x)).collect()
    }

    /// `θ_t^{-1}(A)`: points of `X_{t*}` that `θ_t` sends into `A`.
    pub fn preimage(&self, t: ArrowId, set: &ElementSet) -> ElementSet {
        self.domain(self.structure.inv(t))
            .iter()
            .copied()
            .filter(|&x| self.act(t, x).is_some_and(|y| set.contains(&y)))
            .collect()
    }

    /// Domain of the composite `θ_s ∘ θ_t`: `θ_t^{-1}(X_t ∩ X_{s*})`.
    pub fn composite_domain(&self, s: ArrowId, t: ArrowId) -> ElementSet {
        let inner: ElementSet = self
            .domain(t)
            .intersection(self.domain(self.structure.inv(s)))
            .copied()
            .collect();
        self.preimage(t, &inner)
    }

    fn arrow_name(&self, s: ArrowId) -> &str {
        self.structure.arrow_name(s)
    }

    fn set_names(&self, set: &ElementSet) -> String {
        let names: Vec<&str> = set.iter().map(|&x| self.element_name(x)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Points covered by no idempotent domain.
    pub fn uncovered(&self) -> Vec<ElementId> {
        let covered: ElementSet = self
            .structure
            .idempotents()
            .into_iter()
            .flat_map(|e| self.domain(e).iter().copied())
            .collect();
        self.elements().filter(|x| !covered.contains(x)).collect()
    }

    /// Checks that each stored `θ_s` is a total map `X_{s*} → X_s`.
    fn check_map_shapes(&self, report: &mut ValidationReport, tag: &'static str) {
        let isg = &self.structure;
        for s in isg.arrows() {
            let source = self.domain(isg.inv(s));
            let target = self.domain(s);
            for (&x, &y) in self.map(s) {
                if !source.contains(&x) {
                    report.push(
                        tag,
                        format!(
                            "theta({}) is defined at {} outside X_{} = {}",
                            self.arrow_name(s),
                            self.element_name(x),
                            self.arrow_name(isg.inv(s)),
                            self.set_names(source)
                        ),
                        vec![Witness::Arrow(s), Witness::Element(x)],
                    );
                } else if !target.contains(&y) {
                    report.push(
                        tag,
                        format!(
                            "theta({}) sends {} to {}, not into X_{} = {}",
                            self.arrow_name(s),
                            self.element_name(x),
                            self.element_name(y),
                            self.arrow_name(s),
                            self.set_names(target)
                        ),
                        vec![Witness::Arrow(s), Witness::Element(x), Witness::Element(y)],
                    );
                }
            }
            for &x in source.iter().filter(|x| !self.map(s).contains_key(x)) {
                report.push(
                    tag,
                    format!(
                        "theta({}) is undefined at {} in its domain",
                        self.arrow_name(s),
                        self.element_name(x)
                    ),
                    vec![Witness::Arrow(s), Witness::Element(x)],
                );
            }
        }
    }

    fn check_coverage(&self, report: &mut ValidationReport, tag: &'static str) {
        for x in self.uncovered() {
            report.push(
                tag,
                format!("{} lies in no idempotent domain", self.element_name(x)),
                vec![Witness::Element(x)],
            );
        }
    }
}

/// Checks the defining axioms P1–P3 (and that each `θ_s` maps `X_{s*}` into
/// `X_s`).
pub fn validate_p_axioms(act: &PartialAction) -> ValidationReport {
    let isg = act.structure.as_ref();
    let mut report = ValidationReport::new();
    act.check_map_shapes(&mut report, "map");

    for e in isg.idempotents() {
        for (&x, &y) in act.map(e) {
            if x != y {
                report.push(
                    "P1",
                    format!(
                        "theta({}) is not the identity: {} -> {}",
                        act.arrow_name(e),
                        act.element_name(x),
                        act.element_name(y)
                    ),
                    vec![Witness::Arrow(e), Witness::Element(x)],
                );
            }
        }
    }
    act.check_coverage(&mut report, "P1");

    for s in isg.arrows() {
        let ss = isg.range_idempotent(s);
        for &x in act.domain(s).difference(act.domain(ss)) {
            report.push(
                "P2",
                format!(
                    "{} in X_{} but not in X_{}",
                    act.element_name(x),
                    act.arrow_name(s),
                    act.arrow_name(ss)
                ),
                vec![Witness::Arrow(s), Witness::Element(x)],
            );
        }
    }

    for (s, t) in isg.composable_pairs() {
        let st = isg.compose(s, t);
        let lhs = act.composite_domain(s, t);
        let rhs: ElementSet = act
            .domain(isg.inv(st))
            .intersection(act.domain(isg.inv(t)))
            .copied()
            .collect();
        for &x in lhs.symmetric_difference(&rhs) {
            report.push(
                "P3",
                format!(
                    "theta_{t}^-1(X_{t} ∩ X_{si}) = {} differs from X_{sti} ∩ X_{ti} = {} at {}",
                    act.set_names(&lhs),
                    act.set_names(&rhs),
                    act.element_name(x),
                    t = act.arrow_name(t),
                    si = act.arrow_name(isg.inv(s)),
                    ti = act.arrow_name(isg.inv(t)),
                    sti = act.arrow_name(isg.inv(st)),
                ),
                vec![Witness::Arrow(s), Witness::Arrow(t), Witness::Element(x)],
            );
        }
        for &x in &rhs {
            let lhs_value = act.act(t, x).and_then(|y| act.act(s, y));
            let rhs_value = act.act(st, x);
            if lhs_value != rhs_value || lhs_value.is_none() {
                report.push(
                    "P3",
                    format!(
                        "theta_{}(theta_{}({})) != theta_{}({})",
                        act.arrow_name(s),
                        act.arrow_name(t),
                        act.element_name(x),
                        act.arrow_name(st),
                        act.element_name(x)
                    ),
                    vec![Witness::Arrow(s), Witness::Arrow(t), Witness::Element(x)],
                );
            }
        }
    }
    report
}

/// Checks the alternative axiom system E1–E3.
pub fn validate_e_axioms(act: &PartialAction) -> ValidationReport {
    let isg = act.structure.as_ref();
    let mut report = ValidationReport::new();
    act.check_map_shapes(&mut report, "E1");

    for s in isg.arrows() {
        let map = act.map(s);
        let image: ElementSet = map.values().copied().collect();
        if image.len() != map.len() {
            report.push(
                "E1",
                format!("theta({}) is not injective", act.arrow_name(s)),
                vec![Witness::Arrow(s)],
            );
        }
        for &y in act.domain(s).difference(&image) {
            report.push(
                "E1",
                format!(
                    "theta({}) misses {} in X_{}",
                    act.arrow_name(s),
                    act.element_name(y),
                    act.arrow_name(s)
                ),
                vec![Witness::Arrow(s), Witness::Element(y)],
            );
        }
        let s_inv = isg.inv(s);
        for &x in act.domain(s_inv) {
            let back = act.act(s, x).and_then(|y| act.act(s_inv, y));
            if back != Some(x) {
                report.push(
                    "E1",
                    format!(
                        "theta({}) does not invert theta({}) at {}",
                        act.arrow_name(s_inv),
                        act.arrow_name(s),
                        act.element_name(x)
                    ),
                    vec![Witness::Arrow(s), Witness::Element(x)],
                );
            }
        }
    }
    let covered: ElementSet = isg
        .arrows()
        .flat_map(|s| act.domain(s).iter().copied())
        .collect();
    for x in act.elements().filter(|x| !covered.contains(x)) {
        report.push(
            "E1",
            format!("{} lies in no domain X_s", act.element_name(x)),
            vec![Witness::Element(x)],
        );
    }

    for (s, t) in isg.composable_pairs() {
        let st = isg.compose(s, t);
        for x in act.composite_domain(s, t) {
            let composite = act.act(t, x).and_then(|y| act.act(s, y));
            if act.act(st, x) != composite {
                report.push(
                    "E2",
                    format!(
                        "theta_{} does not extend theta_{} o theta_{} at {}",
                        act.arrow_name(st),
                        act.arrow_name(s),
                        act.arrow_name(t),
                        act.element_name(x)
                    ),
                    vec![Witness::Arrow(s), Witness::Arrow(t), Witness::Element(x)],
                );
            }
        }
    }

    for s in isg.arrows() {
        for t in isg.arrows().filter(|&t| isg.natural_leq(s, t)) {
            for &x in act.domain(s).difference(act.domain(t)) {
                report.push(
                    "E3",
                    format!(
                        "{} <= {} but {} in X_{} \\ X_{}",
                        act.arrow_name(s),
                        act.arrow_name(t),
                        act.element_name(x),
                        act.arrow_name(s),
                        act.arrow_name(t)
                    ),
                    vec![Witness::Arrow(s), Witness::Arrow(t), Witness::Element(x)],
                );
            }
        }
    }
    report
}

/// Both characterizations of a global action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlobalDiagnostic {
    /// `X_s = X_{ss*}` for every `s`.
    pub domains_saturated: bool,
    /// `θ_{st} = θ_s ∘ θ_t` for every composable pair.
    pub composition_exact: bool,
}

impl GlobalDiagnostic {
    pub fn agree(&self) -> bool {
        self.domains_saturated == self.composition_exact
    }
}

/// `X_s = X_{ss*}` for every arrow.
pub fn is_global(act: &PartialAction) -> bool {
    let isg = act.structure.as_ref();
    isg.arrows()
        .all(|s| act.domain(s) == act.domain(isg.range_idempotent(s)))
}

pub fn global_diagnostic(act: &PartialAction) -> GlobalDiagnostic {
    let isg = act.structure.as_ref();
    let composition_exact = isg.composable_pairs().all(|(s, t)| {
        let st = isg.compose(s, t);
        act.composite_domain(s, t) == *act.domain(isg.inv(st))
            && act
                .domain(isg.inv(st))
                .iter()
                .all(|&x| act.act(st, x) == act.act(t, x).and_then(|y| act.act(s, y)))
    });
    GlobalDiagnostic {
        domains_saturated: is_global(act),
        composition_exact,
    }
}

/// Consequences of the axioms, checked as a test oracle: the range of a
/// composite, extension along the natural order, idempotent domains, and
/// `θ_s ∘ θ_{s*} = id`.
pub fn check_derived_propositions(act: &PartialAction) -> ValidationReport {
    let isg = act.structure.as_ref();
    let mut report = ValidationReport::new();
    for (s, t) in isg.composable_pairs() {
        let st = isg.compose(s, t);
        let source: ElementSet = act
            .domain(isg.inv(s))
            .intersection(act.domain(t))
            .copied()
            .collect();
        let lhs = act.image(s, &source);
        let rhs: ElementSet = act.domain(s).intersection(act.domain(st)).copied().collect();
        if lhs != rhs {
            report.push(
                "range-of-composition",
                format!(
                    "theta_{s}(X_{si} ∩ X_{t}) = {} but X_{s} ∩ X_{st} = {}",
                    act.set_names(&lhs),
                    act.set_names(&rhs),
                    s = act.arrow_name(s),
                    t = act.arrow_name(t),
                    si = act.arrow_name(isg.inv(s)),
                    st = act.arrow_name(st),
                ),
                vec![Witness::Arrow(s), Witness::Arrow(t)],
            );
        }
        if isg.is_idempotent(s) && isg.is_idempotent(t) {
            let meet: ElementSet = act.domain(s).intersection(act.domain(t)).copied().collect();
            if *act.domain(st) != meet {
                report.push(
                    "idempotent-domain",
                    format!(
                        "X_({} {}) != X_{} ∩ X_{}",
                        act.arrow_name(s),
                        act.arrow_name(t),
                        act.arrow_name(s),
                        act.arrow_name(t)
                    ),
                    vec![Witness::Arrow(s), Witness::Arrow(t)],
                );
            }
        }
    }
    for s in isg.arrows() {
        for t in isg.arrows().filter(|&t| isg.natural_leq(s, t)) {
            let extends = act
                .domain(isg.inv(s))
                .iter()
                .all(|&x| act.act(s, x).is_some() && act.act(s, x) == act.act(t, x));
            if !act.domain(s).is_subset(act.domain(t)) || !extends {
                report.push(
                    "order-extension",
                    format!(
                        "{} <= {} but theta_{} does not extend theta_{}",
                        act.arrow_name(s),
                        act.arrow_name(t),
                        act.arrow_name(t),
                        act.arrow_name(s)
                    ),
                    vec![Witness::Arrow(s), Witness::Arrow(t)],
                );
            }
        }
        let s_inv = isg.inv(s);
        for &y in act.domain(s) {
            if act.act(s_inv, y).and_then(|x| act.act(s, x)) != Some(y) {
                report.push(
                    "inverse",
                    format!(
                        "theta_{} o theta_{} is not the identity at {}",
                        act.arrow_name(s),
                        act.arrow_name(s_inv),
                        act.element_name(y)
                    ),
                    vec![Witness::Arrow(s), Witness::Element(y)],
                );
            }
        }
    }
    report
}

/// Restriction to `subset` together with the inclusion into the source carrier.
pub fn restrict_with_inclusion(
    source: &PartialAction,
    subset: &ElementSet,
    mode: CoverageMode,
) -> Result<(PartialAction, Vec<ElementId>), ActionError> {
    let isg = &source.structure;
    if let Some(x) = subset.iter().find(|x| x.index() >= source.carrier_size()) {
        return Err(ActionError::ElementOutOfRange(x.0));
    }
    // X_s = θ_s(X ∩ Y_{s*}) ∩ X, in source numbering.
    let domains: Vec<ElementSet> = isg
        .arrows()
        .map(|s| {
            source
                .image(s, subset)
                .intersection(subset)
                .copied()
                .collect()
        })
        .collect();
    let covered: ElementSet = isg
        .idempotents()
        .into_iter()
        .flat_map(|e| domains[e.index()].iter().copied())
        .collect();
    let kept: Vec<ElementId> = match mode {
        CoverageMode::Strict => {
            let missing: Vec<String> = subset
                .difference(&covered)
                .map(|&x| source.element_name(x).to_string())
                .collect();
            if !missing.is_empty() {
                return Err(ActionError::Coverage(missing));
            }
            subset.iter().copied().collect()
        }
        CoverageMode::Trim => subset.intersection(&covered).copied().collect(),
    };
    let renumber: HashMap<ElementId, ElementId> = kept
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, ElementId(i as u32)))
        .collect();
    let carrier = kept
        .iter()
        .map(|&x| source.element_name(x).to_string())
        .collect();
    let new_domains: Vec<ElementSet> = domains
        .iter()
        .map(|d| d.iter().filter_map(|x| renumber.get(x).copied()).collect())
        .collect();
    let maps = isg
        .arrows()
        .map(|s| {
            domains[isg.inv(s).index()]
                .iter()
                .filter_map(|&x| {
                    let y = source.act(s, x)?;
                    Some((*renumber.get(&x)?, *renumber.get(&y)?))
                })
                .collect()
        })
        .collect();
    let action = PartialAction::new(isg.clone(), carrier, new_domains, maps)?;
    Ok((action, kept))
}

/// The restriction of `source` to `subset`: `X_s = θ_s(X ∩ Y_{s*}) ∩ X`.
pub fn restrict(
    source: &PartialAction,
    subset: &ElementSet,
    mode: CoverageMode,
) -> Result<PartialAction, ActionError> {
    restrict_with_inclusion(source, subset, mode).map(|(a, _)| a)
}
