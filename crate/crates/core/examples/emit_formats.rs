//! Prints one fragment in every output format.

use beepath::declare::translate_spec_decl;
use beepath::emit::{emit_decl, emit_dot_petri, emit_json_ast, emit_tpn};
use beepath::grammar::parse_source;
use beepath::grammar::LEADING_TEXT;
use beepath::model::analyze;
use beepath::petri::translate_spec_pn;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = format!(
        "{LEADING_TEXT}\nInitially start \"A\".\nAfter \"A\" ends, immediately either start \"B\" or start \"C\".\nAfter either \"B\" ends or \"C\" ends, the process finishes.\n"
    );
    let d = parse_source(&text)?;
    let p = analyze(&d)?;
    let net = translate_spec_pn(&p);
    println!("== tpn\n{}", emit_tpn(&net));
    println!("== dot\n{}", emit_dot_petri(&net));
    println!("== decl\n{}", emit_decl(&translate_spec_decl(&p)));
    println!("== ast\n{}", emit_json_ast(&d));
    Ok(())
}
