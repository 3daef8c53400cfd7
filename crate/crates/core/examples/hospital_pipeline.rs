//! Runs the whole pipeline on the bundled hospital description.

use beepath::declare::translate_spec_decl;
use beepath::grammar::parse_source;
use beepath::model::{analyze, validate};
use beepath::petri::{translate_spec_pn, DEFAULT_MAX_STATES};

const HOSPITAL: &str = include_str!("../data/hospital.beepath");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = parse_source(HOSPITAL)?;
    let p = analyze(&d)?;
    for w in validate(&p) {
        eprintln!("{w}");
    }
    println!(
        "{} fragments, {} subprocesses, {} activities",
        d.fragments.len(),
        p.subprocesses.len(),
        p.registry.len()
    );

    let net = translate_spec_pn(&p);
    println!(
        "net: {} places, {} transitions ({} labeled)",
        net.places().len(),
        net.transitions().len(),
        net.labeled_count()
    );
    let run = net.enumerate_complete_traces(40, DEFAULT_MAX_STATES)?;
    println!("{} complete firing sequences", run.traces.len());

    let spec = translate_spec_decl(&p);
    println!(
        "declare: {} constraints over {} labels",
        spec.len(),
        spec.alphabet.len()
    );
    Ok(())
}
