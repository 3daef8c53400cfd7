//! Builds a small net by hand, fires it step by step, and enumerates its runs.

use beepath::petri::{PetriNet, DEFAULT_MAX_STATES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut net = PetriNet::new();
    let source = net.add_place("source")?;
    let left = net.add_place("left")?;
    let right = net.add_place("right")?;
    let sink = net.add_place("sink")?;
    let split = net.add_transition("split", None)?;
    let a = net.add_transition("a", Some("A".into()))?;
    let b = net.add_transition("b", Some("B".into()))?;
    net.add_input_arc(source, split);
    net.add_output_arc(split, left);
    net.add_output_arc(split, right);
    net.add_input_arc(left, a);
    net.add_input_arc(right, b);
    net.add_output_arc(a, sink);
    net.add_output_arc(b, sink);
    net.set_initial(source, 1);
    net.set_final(sink, 2);

    let mut m = net.initial_marking().clone();
    for t in [split, b, a] {
        m = net.fire(&m, t)?;
        let enabled: Vec<&str> = net
            .enabled(&m)?
            .into_iter()
            .map(|t| net.transition(t).id.as_str())
            .collect();
        println!("fired {:<6} enabled {enabled:?}", net.transition(t).id);
    }
    println!("reached final marking: {}", &m == net.final_marking());

    for s in net.enumerate_complete_traces(5, DEFAULT_MAX_STATES)?.traces {
        println!("{}", s.ids(&net).join(" "));
    }
    Ok(())
}
