//! Finite semigroupoids: a graph of objects and arrows with a partial,
//! associative multiplication defined exactly on composable pairs.
//!
//! Arrows and objects are interned to dense indices; the multiplication is a
//! dense `n × n` table with an explicit "undefined" sentinel so that every
//! axiom can be checked by exhaustive scan.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::exec::{filter_map_indexed, Execution};
use crate::report::{ValidationReport, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowId(pub u32);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ArrowId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

const UNDEFINED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("object `{0}` declared twice")]
    DuplicateObject(String),
    #[error("arrow `{0}` declared twice")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` references undeclared object `{object}`")]
    UnknownObject { arrow: String, object: String },
    #[error("undeclared arrow `{0}`")]
    UnknownArrow(String),
    #[error("product `{0} {1}` given twice")]
    DuplicateProduct(String, String),
}

/// Raw semigroupoid data. Construction only checks that identifiers resolve;
/// the axioms are checked by [`validate_semigroupoid`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupoidTable {
    objects: Vec<String>,
    arrows: Vec<String>,
    dom: Vec<ObjectId>,
    cod: Vec<ObjectId>,
    mul: Vec<u32>,
    object_index: HashMap<String, ObjectId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl SemigroupoidTable {
    /// Declares objects and arrows `(name, dom, cod)` with an empty multiplication.
    pub fn new<S: AsRef<str>>(
        objects: &[S],
        arrows: &[(S, S, S)],
    ) -> Result<Self, StructureError> {
        let mut object_index = HashMap::new();
        let mut object_names = Vec::with_capacity(objects.len());
        for (i, o) in objects.iter().enumerate() {
            let o = o.as_ref();
            if object_index.insert(o.to_string(), ObjectId(i as u32)).is_some() {
                return Err(StructureError::DuplicateObject(o.to_string()));
            }
            object_names.push(o.to_string());
        }
        let mut arrow_index = HashMap::new();
        let mut arrow_names = Vec::with_capacity(arrows.len());
        let mut dom = Vec::with_capacity(arrows.len());
        let mut cod = Vec::with_capacity(arrows.len());
        for (i, (name, d, c)) in arrows.iter().enumerate() {
            let name = name.as_ref();
            if arrow_index.insert(name.to_string(), ArrowId(i as u32)).is_some() {
                return Err(StructureError::DuplicateArrow(name.to_string()));
            }
            let lookup = |o: &str| {
                object_index
                    .get(o)
                    .copied()
                    .ok_or_else(|| StructureError::UnknownObject {
                        arrow: name.to_string(),
                        object: o.to_string(),
                    })
            };
            dom.push(lookup(d.as_ref())?);
            cod.push(lookup(c.as_ref())?);
            arrow_names.push(name.to_string());
        }
        let n = arrow_names.len();
        Ok(Self {
            objects: object_names,
            arrows: arrow_names,
            dom,
            cod,
            mul: vec![UNDEFINED; n * n],
            object_index,
            arrow_index,
        })
    }

    /// Builds a table from names; products are `(s, t, st)`.
    pub fn from_names<S: AsRef<str>>(
        objects: &[S],
        arrows: &[(S, S, S)],
        products: &[(S, S, S)],
    ) -> Result<Self, StructureError> {
        let mut table = Self::new(objects, arrows)?;
        for (s, t, u) in products {
            let s = table.lookup_arrow(s.as_ref())?;
            let t = table.lookup_arrow(t.as_ref())?;
            let u = table.lookup_arrow(u.as_ref())?;
            if table.mul(s, t).is_some() {
                return Err(StructureError::DuplicateProduct(
                    table.arrow_name(s).to_string(),
                    table.arrow_name(t).to_string(),
                ));
            }
            table.set_mul(s, t, Some(u));
        }
        Ok(table)
    }

    fn lookup_arrow(&self, name: &str) -> Result<ArrowId, StructureError> {
        self.arrow_by_name(name)
            .ok_or_else(|| StructureError::UnknownArrow(name.to_string()))
    }

    /// Sets or clears the product `s t`, composable or not.
    pub fn set_mul(&mut self, s: ArrowId, t: ArrowId, value: Option<ArrowId>) {
        let n = self.arrows.len();
        self.mul[s.index() * n + t.index()] = value.map_or(UNDEFINED, |u| u.0);
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> + Clone {
        (0..self.objects.len() as u32).map(ObjectId)
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + Clone {
        (0..self.arrows.len() as u32).map(ArrowId)
    }

    pub fn object_name(&self, o: ObjectId) -> &str {
        &self.objects[o.index()]
    }

    pub fn arrow_name(&self, s: ArrowId) -> &str {
        &self.arrows[s.index()]
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjectId> {
        self.object_index.get(name).copied()
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.arrow_index.get(name).copied()
    }

    pub fn dom(&self, s: ArrowId) -> ObjectId {
        self.dom[s.index()]
    }

    pub fn cod(&self, s: ArrowId) -> ObjectId {
        self.cod[s.index()]
    }

    /// `(s, t)` is composable iff `dom(s) = cod(t)`.
    pub fn composable(&self, s: ArrowId, t: ArrowId) -> bool {
        self.dom(s) == self.cod(t)
    }

    /// The stored product, which on a raw table may exist off `S^(2)`.
    pub fn mul(&self, s: ArrowId, t: ArrowId) -> Option<ArrowId> {
        let v = self.mul[s.index() * self.arrows.len() + t.index()];
        (v != UNDEFINED).then_some(ArrowId(v))
    }

    /// All composable pairs in row-major order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (ArrowId, ArrowId)> + '_ {
        self.arrows()
            .flat_map(move |s| self.arrows().map(move |t| (s, t)))
            .filter(move |&(s, t)| self.composable(s, t))
    }
}

/// Checks totality on composable pairs, definedness only there, dom/cod
/// coherence of products, and associativity over every composable triple.
pub fn validate_semigroupoid(table: &SemigroupoidTable) -> ValidationReport {
    validate_semigroupoid_with(table, Execution::default())
}

pub fn validate_semigroupoid_with(table: &SemigroupoidTable, exec: Execution) -> ValidationReport {
    let mut report = ValidationReport::new();
    let name = |s: ArrowId| table.arrow_name(s);
    for s in table.arrows() {
        for t in table.arrows() {
            match (table.composable(s, t), table.mul(s, t)) {
                (true, None) => report.push(
                    "totality",
                    format!("composable pair ({}, {}) has no product", name(s), name(t)),
                    vec![Witness::Arrow(s), Witness::Arrow(t)],
                ),
                (false, Some(u)) => report.push(
                    "composable-only",
                    format!(
                        "non-composable pair ({}, {}) has product {}",
                        name(s),
                        name(t),
                        name(u)
                    ),
                    vec![Witness::Arrow(s), Witness::Arrow(t)],
                ),
                (true, Some(u)) => {
                    if table.dom(u) != table.dom(t) {
                        report.push(
                            "dom-cod",
                            format!("d({} {}) = d({}) fails", name(s), name(t), name(t)),
                            vec![Witness::Arrow(s), Witness::Arrow(t)],
                        );
                    }
                    if table.cod(u) != table.cod(s) {
                        report.push(
                            "dom-cod",
                            format!("c({} {}) = c({}) fails", name(s), name(t), name(s)),
                            vec![Witness::Arrow(s), Witness::Arrow(t)],
                        );
                    }
                }
                (false, None) => {}
            }
        }
    }

    // (ps)t = p(st) over every triple with (p,s), (s,t) composable. Triples
    // where an intermediate product is missing were reported above.
    let n = table.arrow_count();
    let failures = filter_map_indexed(n, exec, |p| {
        let p = ArrowId(p as u32);
        let mut found = Vec::new();
        for s in table.arrows().filter(|&s| table.composable(p, s)) {
            for t in table.arrows().filter(|&t| table.composable(s, t)) {
                let (Some(ps), Some(st)) = (table.mul(p, s), table.mul(s, t)) else {
                    continue;
                };
                let (Some(left), Some(right)) = (table.mul(ps, t), table.mul(p, st)) else {
                    continue;
                };
                if left != right {
                    found.push((p, s, t, left, right));
                }
            }
        }
        (!found.is_empty()).then_some(found)
    });
    for (p, s, t, left, right) in failures.into_iter().flatten() {
        report.push(
            "assoc",
            format!(
                "({} {}) {} = {} but {} ({} {}) = {}",
                name(p),
                name(s),
                name(t),
                name(left),
                name(p),
                name(s),
                name(t),
                name(right)
            ),
            vec![Witness::Arrow(p), Witness::Arrow(s), Witness::Arrow(t)],
        );
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InverseError {
    #[error("not a semigroupoid:\n{0}")]
    NotSemigroupoid(ValidationReport),
    #[error("arrow `{0}` has no inverse")]
    NoInverse(String),
    #[error("arrow `{arrow}` has two inverses `{first}` and `{second}`")]
    NonUniqueInverse {
        arrow: String,
        first: String,
        second: String,
    },
    #[error("declared inverse of `{arrow}` is `{declared}` but the unique inverse is `{inferred}`")]
    DeclaredMismatch {
        arrow: String,
        declared: String,
        inferred: String,
    },
}

/// A semigroupoid in which every arrow has a unique pseudo-inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSemigroupoid {
    table: SemigroupoidTable,
    inv: Vec<ArrowId>,
    idempotent: Vec<bool>,
}

impl Deref for InverseSemigroupoid {
    type Target = SemigroupoidTable;

    fn deref(&self) -> &SemigroupoidTable {
        &self.table
    }
}

fn is_pseudo_inverse(table: &SemigroupoidTable, s: ArrowId, c: ArrowId) -> bool {
    if !table.composable(s, c) || !table.composable(c, s) {
        return false;
    }
    let ss = table.mul(s, c).and_then(|sc| table.mul(sc, s));
    let cc = table.mul(c, s).and_then(|cs| table.mul(cs, c));
    ss == Some(s) && cc == Some(c)
}

/// All `c` with `(s,c), (c,s)` composable, `s c s = s` and `c s c = c`.
pub fn pseudo_inverses(table: &SemigroupoidTable, s: ArrowId) -> Vec<ArrowId> {
    table.arrows().filter(|&c| is_pseudo_inverse(table, s, c)).collect()
}

/// Finds the inverse of every arrow by exhaustive search; fails unless each
/// arrow has exactly one.
pub fn infer_inverses(table: SemigroupoidTable) -> Result<InverseSemigroupoid, InverseError> {
    let report = validate_semigroupoid(&table);
    if !report.ok() {
        return Err(InverseError::NotSemigroupoid(report));
    }
    let mut inv = Vec::with_capacity(table.arrow_count());
    for s in table.arrows() {
        match pseudo_inverses(&table, s).as_slice() {
            [] => return Err(InverseError::NoInverse(table.arrow_name(s).to_string())),
            [c] => inv.push(*c),
            [c1, c2, ..] => {
                return Err(InverseError::NonUniqueInverse {
                    arrow: table.arrow_name(s).to_string(),
                    first: table.arrow_name(*c1).to_string(),
                    second: table.arrow_name(*c2).to_string(),
                })
            }
        }
    }
    let idempotent = table
        .arrows()
        .map(|e| table.composable(e, e) && table.mul(e, e) == Some(e))
        .collect();
    Ok(InverseSemigroupoid {
        table,
        inv,
        idempotent,
    })
}

/// Like [`infer_inverses`], additionally requiring a supplied inverse map to
/// agree with the searched one.
pub fn infer_inverses_checked(
    table: SemigroupoidTable,
    declared: &[(ArrowId, ArrowId)],
) -> Result<InverseSemigroupoid, InverseError> {
    let isg = infer_inverses(table)?;
    for &(s, d) in declared {
        if isg.inv(s) != d {
            return Err(InverseError::DeclaredMismatch {
                arrow: isg.arrow_name(s).to_string(),
                declared: isg.arrow_name(d).to_string(),
                inferred: isg.arrow_name(isg.inv(s)).to_string(),
            });
        }
    }
    Ok(isg)
}

/// Agreement of the four characterizations of `s ≤ t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderDiagnostic {
    /// `s = t s* s`
    pub right_own: bool,
    /// `s = t e` for some idempotent `e`
    pub right_idempotent: bool,
    /// `s = s s* t`
    pub left_own: bool,
    /// `s = f t` for some idempotent `f`
    pub left_idempotent: bool,
}

impl OrderDiagnostic {
    pub fn agree(&self) -> bool {
        let v = self.right_own;
        self.right_idempotent == v && self.left_own == v && self.left_idempotent == v
    }
}

impl InverseSemigroupoid {
    pub fn table(&self) -> &SemigroupoidTable {
        &self.table
    }

    pub fn into_table(self) -> SemigroupoidTable {
        self.table
    }

    pub fn inv(&self, s: ArrowId) -> ArrowId {
        self.inv[s.index()]
    }

    pub fn is_idempotent(&self, e: ArrowId) -> bool {
        self.idempotent[e.index()]
    }

    /// `E(S)` in arrow order.
    pub fn idempotents(&self) -> Vec<ArrowId> {
        self.arrows().filter(|&e| self.is_idempotent(e)).collect()
    }

    /// Product of a composable pair; panics off `S^(2)`.
    pub fn compose(&self, s: ArrowId, t: ArrowId) -> ArrowId {
        self.table.mul(s, t).unwrap_or_else(|| {
            panic!(
                "({}, {}) is not composable",
                self.arrow_name(s),
                self.arrow_name(t)
            )
        })
    }

    /// Product when composable.
    pub fn try_mul(&self, s: ArrowId, t: ArrowId) -> Option<ArrowId> {
        if self.composable(s, t) {
            self.table.mul(s, t)
        } else {
            None
        }
    }

    /// `s s*`
    pub fn range_idempotent(&self, s: ArrowId) -> ArrowId {
        self.compose(s, self.inv(s))
    }

    /// `s* s`
    pub fn domain_idempotent(&self, s: ArrowId) -> ArrowId {
        self.compose(self.inv(s), s)
    }

    fn same_endpoints(&self, s: ArrowId, t: ArrowId) -> bool {
        self.dom(s) == self.dom(t) && self.cod(s) == self.cod(t)
    }

    /// Natural partial order: equal endpoints and `s = t s* s`.
    pub fn natural_leq(&self, s: ArrowId, t: ArrowId) -> bool {
        self.same_endpoints(s, t) && self.compose(t, self.domain_idempotent(s)) == s
    }

    /// Evaluates all four characterizations of the natural order.
    pub fn natural_leq_diagnostic(&self, s: ArrowId, t: ArrowId) -> OrderDiagnostic {
        if !self.same_endpoints(s, t) {
            return OrderDiagnostic {
                right_own: false,
                right_idempotent: false,
                left_own: false,
                left_idempotent: false,
            };
        }
        let idem = self.idempotents();
        OrderDiagnostic {
            right_own: self.compose(t, self.domain_idempotent(s)) == s,
            right_idempotent: idem.iter().any(|&e| self.try_mul(t, e) == Some(s)),
            left_own: self.compose(self.range_idempotent(s), t) == s,
            left_idempotent: idem.iter().any(|&f| self.try_mul(f, t) == Some(s)),
        }
    }

    /// `e s = s` and `t e = t` whenever defined.
    pub fn is_identity(&self, e: ArrowId) -> bool {
        self.arrows().all(|s| self.try_mul(e, s).is_none_or(|p| p == s))
            && self.arrows().all(|t| self.try_mul(t, e).is_none_or(|p| p == t))
    }
}

/// Audits the derived laws of an inverse semigroupoid: involution, the
/// anti-homomorphism rule, commuting idempotents, and the order laws.
pub fn check_inverse_laws(isg: &InverseSemigroupoid) -> ValidationReport {
    let mut report = ValidationReport::new();
    let name = |s: ArrowId| isg.arrow_name(s);
    let w = |xs: &[ArrowId]| xs.iter().map(|&s| Witness::Arrow(s)).collect::<Vec<_>>();
    for s in isg.arrows() {
        if isg.inv(isg.inv(s)) != s {
            report.push("involution", format!("({}*)* != {}", name(s), name(s)), w(&[s]));
        }
        for t in isg.arrows() {
            if !isg.natural_leq_diagnostic(s, t).agree() {
                report.push(
                    "order-characterizations",
                    format!("characterizations of {} <= {} disagree", name(s), name(t)),
                    w(&[s, t]),
                );
            }
            if isg.natural_leq(s, t) != isg.natural_leq(isg.inv(s), isg.inv(t)) {
                report.push(
                    "order-inverse",
                    format!("{} <= {} but not for inverses (or vice versa)", name(s), name(t)),
                    w(&[s, t]),
                );
            }
        }
    }
    for (s, t) in isg.composable_pairs().collect::<Vec<_>>() {
        let st = isg.compose(s, t);
        if isg.try_mul(isg.inv(t), isg.inv(s)) != Some(isg.inv(st)) {
            report.push(
                "inverse-product",
                format!("({} {})* != {}* {}*", name(s), name(t), name(t), name(s)),
                w(&[s, t]),
            );
        }
        if isg.is_idempotent(s) && isg.is_idempotent(t) {
            if isg.try_mul(t, s) != Some(st) {
                report.push(
                    "idempotents-commute",
                    format!("{} {} != {} {}", name(s), name(t), name(t), name(s)),
                    w(&[s, t]),
                );
            }
            if !isg.natural_leq(st, s) || !isg.natural_leq(st, t) {
                report.push(
                    "idempotent-product-order",
                    format!("{} {} is not below both factors", name(s), name(t)),
                    w(&[s, t]),
                );
            }
        }
        if isg.is_idempotent(t) {
            let ses = isg.compose(st, isg.inv(s));
            if !isg.is_idempotent(ses) || !isg.natural_leq(ses, isg.range_idempotent(s)) {
                report.push(
                    "conjugate-idempotent",
                    format!("{} {} {}* is not an idempotent below {} {}*", name(s), name(t), name(s), name(s), name(s)),
                    w(&[s, t]),
                );
            }
        }
    }
    // Compatibility of the order with multiplication.
    let arrows: Vec<ArrowId> = isg.arrows().collect();
    for &s1 in &arrows {
        for &t1 in arrows.iter().filter(|&&t1| isg.natural_leq(s1, t1)) {
            for &s2 in arrows.iter().filter(|&&s2| isg.composable(s1, s2)) {
                for &t2 in arrows.iter().filter(|&&t2| isg.natural_leq(s2, t2)) {
                    let ok = isg.composable(t1, t2)
                        && isg.natural_leq(isg.compose(s1, s2), isg.compose(t1, t2));
                    if !ok {
                        report.push(
                            "order-compatible",
                            format!(
                                "{} <= {}, {} <= {} but {} {} !<= {} {}",
                                name(s1), name(t1), name(s2), name(t2), name(s1), name(s2), name(t1), name(t2)
                            ),
                            w(&[s1, t1, s2, t2]),
                        );
                    }
                }
            }
        }
    }
    report
}

impl fmt::Display for SemigroupoidTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::io::print_structure(self, None))
    }
}
