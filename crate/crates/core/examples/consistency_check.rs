//! Checks that every run of the hospital net satisfies its DECLARE model.

use beepath::consistency::verify_inclusion;
use beepath::declare::{display_label, translate_spec_decl};
use beepath::grammar::parse_source;
use beepath::model::analyze;
use beepath::petri::{translate_spec_pn, DEFAULT_MAX_STATES};

const HOSPITAL: &str = include_str!("../data/hospital.beepath");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = analyze(&parse_source(HOSPITAL)?)?;
    let net = translate_spec_pn(&p);
    let spec = translate_spec_decl(&p);
    let report = verify_inclusion(&net, &spec, 40, DEFAULT_MAX_STATES)?;
    println!(
        "{} traces checked, {} violations",
        report.checked,
        report.violations.len()
    );
    for v in report.violations.iter().take(3) {
        let trace: Vec<&str> = v.trace.iter().map(|l| display_label(l)).collect();
        println!("\n{}", trace.join(", "));
        for c in &v.violated {
            println!("  breaks {c}");
        }
    }
    Ok(())
}
