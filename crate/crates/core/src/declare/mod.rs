//! DECLARE constraints, their automata and the fragment translation.

mod automaton;
mod constraint;
pub mod translate;

pub use automaton::{
    check_trace, constraint_automaton, spec_automaton, Checker, ConstraintAutomaton, Verdict,
};
pub use constraint::{
    display_label, internal_label, ConstraintInstance, DeclareError, DeclareSpec, Template,
};
pub use translate::{fragment_spec, translate_fragment_decl, translate_spec_decl};
