//! Builds template automata, intersects them, and checks traces.

use beepath::declare::{
    check_trace, constraint_automaton, spec_automaton, ConstraintInstance, DeclareSpec, Template,
    Verdict,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet: Vec<String> = ["A", "B", "C"].map(String::from).to_vec();
    let response = ConstraintInstance::binary(Template::AlternateResponse, "A", "B");
    let dfa = constraint_automaton(&response, &alphabet)?;
    println!("{response}: {} states", dfa.state_count());

    let mut spec = DeclareSpec::new(alphabet);
    spec.insert(response);
    spec.insert(ConstraintInstance::binary(
        Template::NotCoExistence,
        "B",
        "C",
    ));
    spec.insert(ConstraintInstance::unary(Template::ExactlyOne, "A"));
    let product = spec_automaton(&spec)?;
    println!("product: {} states", product.state_count());

    for trace in [
        vec!["A", "B"],
        vec!["A"],
        vec!["C", "A", "B"],
        vec!["A", "C"],
    ] {
        match check_trace(&spec, &trace)? {
            Verdict::Satisfied => println!("{trace:?}: satisfied"),
            Verdict::Violated(cs) => {
                let names: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                println!("{trace:?}: violates {}", names.join("; "));
            }
        }
    }
    Ok(())
}
