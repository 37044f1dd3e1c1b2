//! Maps between partial actions of the same inverse semigroupoid.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::action::{is_global, ElementId, ElementSet, PartialAction, PartialMap};
use crate::algebra::ArrowId;
use crate::exec::{flat_map_range, Execution};
use crate::report::{ValidationReport, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("source and target act through different semigroupoids")]
    DifferentStructures,
    #[error("map has {found} entries for a carrier of {expected} points")]
    MapLength { expected: usize, found: usize },
    #[error("map value {0} is outside the target carrier")]
    OutOfRange(u32),
    #[error("`{0}` has no counterpart")]
    Unmatched(String),
    #[error("cannot compose: target of the first map is not the source of the second")]
    EndpointMismatch,
    #[error("map is not injective")]
    NotInjective,
    #[error("not a valid target: {0}")]
    InvalidTarget(String),
}

/// A carrier map `φ: X → Y` between two actions; whether it is an S-function
/// is decided by [`is_s_function`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SFunction {
    source: PartialAction,
    target: PartialAction,
    map: Vec<ElementId>,
}

fn same_structure(a: &PartialAction, b: &PartialAction) -> bool {
    Arc::ptr_eq(a.structure(), b.structure()) || a.structure() == b.structure()
}

impl SFunction {
    pub fn new(
        source: PartialAction,
        target: PartialAction,
        map: Vec<ElementId>,
    ) -> Result<Self, MorphismError> {
        if !same_structure(&source, &target) {
            return Err(MorphismError::DifferentStructures);
        }
        if map.len() != source.carrier_size() {
            return Err(MorphismError::MapLength {
                expected: source.carrier_size(),
                found: map.len(),
            });
        }
        if let Some(y) = map.iter().find(|y| y.index() >= target.carrier_size()) {
            return Err(MorphismError::OutOfRange(y.0));
        }
        Ok(Self {
            source,
            target,
            map,
        })
    }

    pub fn identity(act: &PartialAction) -> Self {
        Self {
            source: act.clone(),
            target: act.clone(),
            map: act.elements().collect(),
        }
    }

    /// Sends each point to the target point with the same name.
    pub fn by_names(source: PartialAction, target: PartialAction) -> Result<Self, MorphismError> {
        let map = source
            .elements()
            .map(|x| {
                let name = source.element_name(x);
                target
                    .element_by_name(name)
                    .ok_or_else(|| MorphismError::Unmatched(name.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Self::new(source, target, map)
    }

    /// Builds a map from `(source name, target name)` pairs covering the source.
    pub fn from_pairs(
        source: PartialAction,
        target: PartialAction,
        pairs: &[(&str, &str)],
    ) -> Result<Self, MorphismError> {
        let lookup: HashMap<&str, &str> = pairs.iter().copied().collect();
        let map = source
            .elements()
            .map(|x| {
                let name = source.element_name(x);
                lookup
                    .get(name)
                    .and_then(|y| target.element_by_name(y))
                    .ok_or_else(|| MorphismError::Unmatched(name.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Self::new(source, target, map)
    }

    pub fn source(&self) -> &PartialAction {
        &self.source
    }

    pub fn target(&self) -> &PartialAction {
        &self.target
    }

    pub fn map(&self) -> &[ElementId] {
        &self.map
    }

    pub fn apply(&self, x: ElementId) -> ElementId {
        self.map[x.index()]
    }

    pub fn image(&self) -> ElementSet {
        self.map.iter().copied().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().collect::<BTreeSet<_>>().len() == self.map.len()
    }

    /// `(source name, target name)` for every source point.
    pub fn named_pairs(&self) -> Vec<(String, String)> {
        self.source
            .elements()
            .map(|x| {
                (
                    self.source.element_name(x).to_string(),
                    self.target.element_name(self.apply(x)).to_string(),
                )
            })
            .collect()
    }
}

/// Short-circuiting S-function test over a raw map.
fn preserves_action(source: &PartialAction, target: &PartialAction, map: &[ElementId]) -> bool {
    let isg = source.structure();
    isg.arrows().all(|s| {
        source
            .domain(s)
            .iter()
            .all(|x| target.domain(s).contains(&map[x.index()]))
            && source.domain(isg.inv(s)).iter().all(|&x| {
                source
                    .act(s, x)
                    .is_some_and(|y| target.act(s, map[x.index()]) == Some(map[y.index()]))
            })
    })
}

/// `φ(X_s) ⊆ Y_s` and `φ(θ_s(x)) = θ_s(φ(x))` for every `x ∈ X_{s*}`.
pub fn is_s_function(f: &SFunction) -> ValidationReport {
    let (src, tgt) = (&f.source, &f.target);
    let isg = src.structure();
    let mut report = ValidationReport::new();
    for s in isg.arrows() {
        let name = isg.arrow_name(s);
        for &x in src.domain(s) {
            if !tgt.domain(s).contains(&f.apply(x)) {
                report.push(
                    "s-function-domain",
                    format!(
                        "{} in X_{name} but its image {} is not in Y_{name}",
                        src.element_name(x),
                        tgt.element_name(f.apply(x))
                    ),
                    vec![Witness::Arrow(s), Witness::Element(x), Witness::TargetElement(f.apply(x))],
                );
            }
        }
        for &x in src.domain(isg.inv(s)) {
            let left = src.act(s, x).map(|y| f.apply(y));
            let right = tgt.act(s, f.apply(x));
            if left.is_none() || left != right {
                report.push(
                    "s-function-equivariance",
                    format!(
                        "phi(theta_{name}({x})) != theta_{name}(phi({x}))",
                        x = src.element_name(x)
                    ),
                    vec![Witness::Arrow(s), Witness::Element(x)],
                );
            }
        }
    }
    report
}

fn injectivity(f: &SFunction, report: &mut ValidationReport) {
    let mut seen: HashMap<ElementId, ElementId> = HashMap::new();
    for x in f.source.elements() {
        if let Some(&prev) = seen.get(&f.apply(x)) {
            report.push(
                "injective",
                format!(
                    "{} and {} both map to {}",
                    f.source.element_name(prev),
                    f.source.element_name(x),
                    f.target.element_name(f.apply(x))
                ),
                vec![Witness::Element(prev), Witness::Element(x), Witness::TargetElement(f.apply(x))],
            );
        } else {
            seen.insert(f.apply(x), x);
        }
    }
}

/// Injective S-function with `X_s = φ^{-1}(θ^Y_s(φ(X) ∩ Y_{s*}))` for all `s`.
pub fn is_embedding(f: &SFunction) -> ValidationReport {
    let mut report = is_s_function(f);
    injectivity(f, &mut report);
    let (src, tgt) = (&f.source, &f.target);
    let isg = src.structure();
    let image = f.image();
    for s in isg.arrows() {
        let reachable = tgt.image(s, &image);
        let pulled: ElementSet = src
            .elements()
            .filter(|&x| reachable.contains(&f.apply(x)))
            .collect();
        for &x in pulled.symmetric_difference(src.domain(s)) {
            report.push(
                "embedding",
                format!(
                    "X_{name} differs from phi^-1(theta_{name}(phi(X) ∩ Y_{inv})) at {}",
                    src.element_name(x),
                    name = isg.arrow_name(s),
                    inv = isg.arrow_name(isg.inv(s))
                ),
                vec![Witness::Arrow(s), Witness::Element(x)],
            );
        }
    }
    report
}

/// Embedding test through the pointwise characterization: `x ∈ X_{s*}` iff
/// `φ(x) ∈ Y_{s*}` and `θ^Y_s(φ(x)) ∈ φ(X)`, with matching values.
pub fn is_embedding_pointwise(f: &SFunction) -> ValidationReport {
    let mut report = is_s_function(f);
    injectivity(f, &mut report);
    let (src, tgt) = (&f.source, &f.target);
    let isg = src.structure();
    let image = f.image();
    for s in isg.arrows() {
        let s_inv = isg.inv(s);
        for x in src.elements() {
            let in_source = src.domain(s_inv).contains(&x);
            let target_value = tgt.act(s, f.apply(x)).filter(|y| image.contains(y));
            let consistent = match (in_source, target_value) {
                (true, Some(y)) => src.act(s, x).map(|z| f.apply(z)) == Some(y),
                (false, None) => true,
                _ => false,
            };
            if !consistent {
                report.push(
                    "embedding-pointwise",
                    format!(
                        "membership of {} in X_{} disagrees with the target action",
                        src.element_name(x),
                        isg.arrow_name(s_inv)
                    ),
                    vec![Witness::Arrow(s), Witness::Element(x)],
                );
            }
        }
    }
    report
}

/// An embedding into a global action.
pub fn is_globalization_triple(f: &SFunction) -> ValidationReport {
    let mut report = is_embedding(f);
    if !is_global(&f.target) {
        report.push("global", "target action is not global", vec![]);
    }
    report
}

/// `g ∘ f`.
pub fn compose(g: &SFunction, f: &SFunction) -> Result<SFunction, MorphismError> {
    if f.target != g.source {
        return Err(MorphismError::EndpointMismatch);
    }
    let map = f.map.iter().map(|&y| g.apply(y)).collect();
    SFunction::new(f.source.clone(), g.target.clone(), map)
}

/// Bijective S-function whose inverse is also an S-function.
pub fn is_isomorphism(f: &SFunction) -> bool {
    if f.source.carrier_size() != f.target.carrier_size() || !f.is_injective() {
        return false;
    }
    let mut inverse = vec![ElementId(0); f.map.len()];
    for x in f.source.elements() {
        inverse[f.apply(x).index()] = x;
    }
    is_s_function(f).ok() && preserves_action(&f.target, &f.source, &inverse)
}

/// The action that the target induces on the source carrier along an
/// injective map: `X_s = φ^{-1}(θ^Y_s(φ(X) ∩ Y_{s*}))` and `θ_s = φ^{-1} θ^Y_s φ`.
/// For an embedding this reproduces the source action.
pub fn induced_action(f: &SFunction) -> Result<PartialAction, MorphismError> {
    if !f.is_injective() {
        return Err(MorphismError::NotInjective);
    }
    let (src, tgt) = (&f.source, &f.target);
    let isg = src.structure();
    let back: HashMap<ElementId, ElementId> = src.elements().map(|x| (f.apply(x), x)).collect();
    let image = f.image();
    let domains: Vec<ElementSet> = isg
        .arrows()
        .map(|s| {
            tgt.image(s, &image)
                .iter()
                .filter_map(|y| back.get(y).copied())
                .collect()
        })
        .collect();
    let maps: Vec<PartialMap> = isg
        .arrows()
        .map(|s| {
            domains[isg.inv(s).index()]
                .iter()
                .filter_map(|&x| {
                    let y = tgt.act(s, f.apply(x))?;
                    Some((x, *back.get(&y)?))
                })
                .collect()
        })
        .collect();
    PartialAction::new(isg.clone(), src.carrier_names().to_vec(), domains, maps)
        .map_err(|e| MorphismError::InvalidTarget(e.to_string()))
}

/// A target for the universal property: an S-function `j: X → Z` into a
/// global action. Built strictly (`j` an embedding, as for a globalization)
/// or relaxed (`j` any S-function, as for a reflector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalizationTriple {
    embedding: SFunction,
    is_embedding: bool,
}

impl GlobalizationTriple {
    /// Requires `j` to be an embedding into a global action.
    pub fn new(j: SFunction) -> Result<Self, ValidationReport> {
        let report = is_globalization_triple(&j);
        if report.ok() {
            Ok(Self {
                embedding: j,
                is_embedding: true,
            })
        } else {
            Err(report)
        }
    }

    /// Requires only that `j` is an S-function into a global action.
    pub fn global_target(j: SFunction) -> Result<Self, ValidationReport> {
        let mut report = is_s_function(&j);
        if !is_global(j.target()) {
            report.push("global", "target action is not global", vec![]);
        }
        if report.ok() {
            let is_embedding = is_embedding(&j).ok();
            Ok(Self {
                embedding: j,
                is_embedding,
            })
        } else {
            Err(report)
        }
    }

    pub fn embedding(&self) -> &SFunction {
        &self.embedding
    }

    pub fn is_globalization(&self) -> bool {
        self.is_embedding
    }
}

/// Enumerates every map `h: A → B` (all `|B|^|A|` of them) and returns those
/// that are S-functions with `h ∘ f = g`, in enumeration order. `None` when
/// the candidate count exceeds `bound`.
pub fn commuting_s_functions(
    f: &SFunction,
    g: &SFunction,
    bound: u64,
    exec: Execution,
) -> Result<Option<Vec<Vec<ElementId>>>, MorphismError> {
    if f.source != g.source || !same_structure(&f.target, &g.target) {
        return Err(MorphismError::EndpointMismatch);
    }
    let (a, b) = (&f.target, &g.target);
    let Some(count) = candidate_count(a.carrier_size(), b.carrier_size()) else {
        return Ok(None);
    };
    if count > bound {
        return Ok(None);
    }
    let radix = b.carrier_size() as u64;
    let width = a.carrier_size();
    let found = flat_map_range(count, exec, |mut k| {
        let mut h = Vec::with_capacity(width);
        for _ in 0..width {
            h.push(ElementId((k % radix) as u32));
            k /= radix;
        }
        let commutes = f.source.elements().all(|x| h[f.apply(x).index()] == g.apply(x));
        (commutes && preserves_action(a, b, &h)).then_some(h)
    });
    Ok(Some(found))
}

/// `|B|^|A|`, or `None` on overflow.
pub fn candidate_count(source: usize, target: usize) -> Option<u64> {
    (target as u64).checked_pow(u32::try_from(source).ok()?)
}

/// Arrows `s` with `x ∈ X_s`, for diagnostics.
pub fn arrows_containing(act: &PartialAction, x: ElementId) -> Vec<ArrowId> {
    act.structure()
        .arrows()
        .filter(|&s| act.domain(s).contains(&x))
        .collect()
}
