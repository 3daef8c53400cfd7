use std::fmt::Write;

use crate::petri::PetriNet;

/// Places then transitions, each sorted by id.
pub fn emit_tpn(net: &PetriNet) -> String {
    let mut out = String::new();
    let mut places: Vec<_> = net.place_ids().collect();
    places.sort_by(|a, b| net.place(*a).id.cmp(&net.place(*b).id));
    for p in places {
        let tokens = net.initial_marking().get(p);
        let id = &net.place(p).id;
        if tokens > 0 {
            writeln!(out, "place \"{id}\" init {tokens};").unwrap();
        } else {
            writeln!(out, "place \"{id}\";").unwrap();
        }
    }
    let mut transitions: Vec<_> = net.transition_ids().collect();
    transitions.sort_by(|a, b| net.transition(*a).id.cmp(&net.transition(*b).id));
    for t in transitions {
        let tr = net.transition(t);
        let label = tr.label.as_deref().unwrap_or("$invisible$");
        let names = |ps: &[crate::petri::PlaceId]| {
            let mut v: Vec<&str> = ps.iter().map(|p| net.place(*p).id.as_str()).collect();
            v.sort();
            v.iter().map(|s| format!(" \"{s}\"")).collect::<String>()
        };
        writeln!(
            out,
            "trans \"{}\"~\"{label}\" in{} out{};",
            tr.id,
            names(net.preset(t)),
            names(net.postset(t))
        )
        .unwrap();
    }
    out
}
