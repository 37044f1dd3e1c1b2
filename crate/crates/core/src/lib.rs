//! Finite inverse semigroupoids, their partial actions on finite sets, and
//! the universal globalization of a partial action.

pub mod action;
pub mod algebra;
pub mod cli;
pub mod exec;
pub mod fixtures;
pub mod generators;
pub mod globalize;
pub mod io;
pub mod morphism;
pub mod report;
mod union_find;

pub use action::{
    check_derived_propositions, is_global, restrict, restrict_with_inclusion, validate_e_axioms,
    validate_p_axioms, ActionError, CoverageMode, ElementId, ElementSet, PartialAction, PartialMap,
};
pub use algebra::{
    check_inverse_laws, infer_inverses, infer_inverses_checked, validate_semigroupoid, ArrowId,
    InverseError, InverseSemigroupoid, ObjectId, SemigroupoidTable, StructureError,
};
pub use cli::run_cli;
pub use exec::Execution;
pub use globalize::{
    build_globalization, close_equivalence, mediating, tilde, verify_universal, ClassId, Globalization,
    GlobalizeError, Quotient, Seed,
};
pub use morphism::{is_embedding, is_s_function, GlobalizationTriple, MorphismError, SFunction};
pub use report::{ValidationReport, Violation, Witness};
