use std::collections::BTreeMap;
use std::fmt::Write;

use crate::declare::{display_label, ConstraintAutomaton};
use crate::petri::{Arc, PetriNet};

const SILENT_STYLE: &str =
    "shape=\"box\",label=\"\",height=\".3\",width=\".1\",style=\"filled\",fillcolor=\"black\"";

pub fn emit_dot_petri(net: &PetriNet) -> String {
    let mut out = String::from(
        "digraph {\n  rankdir=\"LR\";\n  node [fontname=\"Arial\",fontsize=\"10\"];\n",
    );
    for p in net.places() {
        writeln!(out, "  \"{}\" [shape=\"circle\",label=\"\"];", p.id).unwrap();
    }
    for t in net.transitions() {
        match &t.label {
            None => writeln!(out, "  \"{}\" [{SILENT_STYLE}];", t.id).unwrap(),
            Some(l) if *l == t.id => writeln!(out, "  \"{}\" [shape=\"box\"];", t.id).unwrap(),
            Some(l) => writeln!(out, "  \"{}\" [shape=\"box\",label=\"{l}\"];", t.id).unwrap(),
        }
    }
    for a in net.arcs() {
        let (from, to) = match *a {
            Arc::PlaceToTransition(p, t) => (&net.place(p).id, &net.transition(t).id),
            Arc::TransitionToPlace(t, p) => (&net.transition(t).id, &net.place(p).id),
        };
        writeln!(out, "  \"{from}\" -> \"{to}\";").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Reachable live part only, parallel edges merged into one label.
pub fn emit_dot_automaton(a: &ConstraintAutomaton) -> String {
    let (states, edges) = a.trimmed_edges();
    let mut out = String::from("digraph {\n  rankdir=\"LR\";\n");
    out.push_str("  start [label=\"\",style=\"invisible\",width=0,height=0];\n");
    out.push_str("  node [height=\".3\",width=\".3\",shape=\"circle\",label=\"\"];\n");
    for &s in &states {
        if a.accepting[s] {
            writeln!(out, "  {s} [peripheries=2];").unwrap();
        } else {
            writeln!(out, "  {s};").unwrap();
        }
    }
    if !states.is_empty() {
        writeln!(out, "  start -> {};", a.initial).unwrap();
    }
    let mut merged: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
    for (from, sym, to) in &edges {
        merged
            .entry((*from, *to))
            .or_default()
            .push(display_label(sym));
    }
    for ((from, to), labels) in merged {
        writeln!(out, "  {from} -> {to} [label=\"{}\"];", labels.join(" ")).unwrap();
    }
    out.push_str("}\n");
    out
}
