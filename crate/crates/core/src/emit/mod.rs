//! Text serializations of nets, automata, DECLARE specs and the AST.

mod decl;
mod dot;
mod tpn;

pub use decl::{decl_line, emit_decl};
pub use dot::{emit_dot_automaton, emit_dot_petri};
pub use tpn::emit_tpn;

use crate::grammar::Description;

/// Pretty JSON of the AST; keys follow field order.
pub fn emit_json_ast(d: &Description) -> String {
    assert!(
        !d.fragments.is_empty(),
        "a description always has a fragment"
    );
    let mut s = serde_json::to_string_pretty(d).expect("AST serializes");
    s.push('\n');
    s
}

pub fn read_json_ast(text: &str) -> Result<Description, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn emit_json_petri(net: &crate::petri::PetriNet) -> String {
    let mut s = serde_json::to_string_pretty(net).expect("net serializes");
    s.push('\n');
    s
}

pub fn emit_json_declare(spec: &crate::declare::DeclareSpec) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("spec serializes");
    s.push('\n');
    s
}
