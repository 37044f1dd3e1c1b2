use std::fmt;

use crate::algebra::{ArrowId, ObjectId};
use crate::action::ElementId;

/// One identifier that participates in a violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Witness {
    Arrow(ArrowId),
    Object(ObjectId),
    /// A point of the action (or the source action, for maps).
    Element(ElementId),
    /// A point of the target action of a map.
    TargetElement(ElementId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub message: String,
    pub witness: Vec<Witness>,
}

/// Outcome of a validator: every failed axiom instance, with witnesses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Informational lines that do not affect `ok`.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, axiom: &'static str, message: impl Into<String>, witness: Vec<Witness>) {
        self.violations.push(Violation {
            axiom,
            message: message.into(),
            witness,
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }

    /// Violations carrying the given axiom tag.
    pub fn with_axiom<'a>(&'a self, axiom: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }

    pub fn has_axiom(&self, axiom: &str) -> bool {
        self.with_axiom(axiom).next().is_some()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            writeln!(f, "ok")?;
        } else {
            writeln!(f, "FAILED ({} violation(s))", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  [{}] {}", v.axiom, v.message)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
