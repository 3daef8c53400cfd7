mod common;

use std::collections::BTreeSet;

use beepath::consistency::project;
use beepath::declare::translate_spec_decl;
use beepath::petri::{standalone_net, translate_spec_pn, NetError, PetriNet, DEFAULT_MAX_STATES};
use common::{spec_of, CATALOGUE, HOSPITAL};
use proptest::prelude::*;

fn projected(net: &PetriNet, max_len: usize) -> BTreeSet<Vec<String>> {
    net.enumerate_complete_traces(max_len, DEFAULT_MAX_STATES)
        .unwrap()
        .traces
        .iter()
        .map(|s| project(net, s))
        .collect()
}

fn hospital_with_flow_order(order: &[usize]) -> String {
    let lines: Vec<&str> = HOSPITAL.lines().collect();
    let (head, rest) = lines.split_at(4);
    let (flow, closing) = rest.split_at(rest.len() - 1);
    let mut out: Vec<&str> = head.to_vec();
    out.extend(order.iter().map(|&i| flow[i]));
    out.extend(closing);
    out.join("\n") + "\n"
}

#[test]
fn sequence_token_game() {
    let (p, f) = common::catalogue("Sequence");
    let net = standalone_net(&f, &p.registry, &p.subprocesses);
    let m0 = net.initial_marking().clone();
    let enabled: Vec<&str> = net
        .enabled(&m0)
        .unwrap()
        .into_iter()
        .map(|t| net.transition(t).id.as_str())
        .collect();
    assert_eq!(enabled, ["A_start"]);
    let b_start = net.transition_by_label("B_start").unwrap();
    assert!(matches!(
        net.fire(&m0, b_start),
        Err(NetError::NotEnabled(_))
    ));
    let traces = net
        .enumerate_complete_traces(10, DEFAULT_MAX_STATES)
        .unwrap();
    assert_eq!(traces.traces.len(), 1);
    assert_eq!(
        traces.traces[0].ids(&net),
        ["A_start", "A_end", "B_start", "B_end"]
    );
}

#[test]
fn every_complete_sequence_replays_to_the_final_marking() {
    for (name, _, _) in CATALOGUE {
        let (p, f) = common::catalogue(name);
        let net = standalone_net(&f, &p.registry, &p.subprocesses);
        let run = net
            .enumerate_complete_traces(12, DEFAULT_MAX_STATES)
            .unwrap();
        assert!(!run.traces.is_empty(), "{name}");
        for s in &run.traces {
            assert_eq!(
                &net.replay(&s.transitions).unwrap(),
                net.final_marking(),
                "{name}"
            );
            assert!(s.len() <= 12);
            let proj = project(&net, s);
            let starts = s
                .ids(&net)
                .iter()
                .filter(|id| id.ends_with("_start"))
                .count();
            assert_eq!(proj.len(), starts);
            assert!(proj.len() <= s.len());
        }
    }
}

#[test]
fn hospital_net_shape() {
    let p = spec_of(HOSPITAL);
    let net = translate_spec_pn(&p);
    assert_eq!(net.labeled_count(), 34);
    let labels: BTreeSet<&str> = net
        .transitions()
        .iter()
        .filter_map(|t| t.label.as_deref())
        .collect();
    assert_eq!(labels.len(), 34);
    assert!(net.connectivity_warnings().is_empty());
    let run = net
        .enumerate_complete_traces(40, DEFAULT_MAX_STATES)
        .unwrap();
    assert!(run.warnings.is_empty());
    assert_eq!(run.traces.len(), 403);
    assert_eq!(run.traces.iter().map(|s| s.len()).max(), Some(32));
}

#[test]
fn tight_state_budget_is_reported() {
    let net = translate_spec_pn(&spec_of(HOSPITAL));
    assert!(matches!(
        net.enumerate_complete_traces(40, 5),
        Err(NetError::StateBudgetExceeded(5))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn enumeration_is_deterministic(k in 0..CATALOGUE.len(), max_len in 0..14usize) {
        let (p, f) = common::catalogue(CATALOGUE[k].0);
        let net = standalone_net(&f, &p.registry, &p.subprocesses);
        let a = net.enumerate_complete_traces(max_len, DEFAULT_MAX_STATES).unwrap();
        let b = net.enumerate_complete_traces(max_len, DEFAULT_MAX_STATES).unwrap();
        prop_assert_eq!(a.traces, b.traces);
    }

    #[test]
    fn longer_bounds_only_add_sequences(k in 0..CATALOGUE.len(), max_len in 0..12usize) {
        let (p, f) = common::catalogue(CATALOGUE[k].0);
        let net = standalone_net(&f, &p.registry, &p.subprocesses);
        let short = net.enumerate_complete_traces(max_len, DEFAULT_MAX_STATES).unwrap();
        let long = net.enumerate_complete_traces(max_len + 2, DEFAULT_MAX_STATES).unwrap();
        for s in &short.traces {
            prop_assert!(long.traces.contains(s));
        }
    }

    #[test]
    fn fragment_order_does_not_change_the_models(
        order in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle()
    ) {
        let reference = spec_of(HOSPITAL);
        let shuffled = spec_of(&hospital_with_flow_order(&order));
        let (a, b) = (translate_spec_pn(&reference), translate_spec_pn(&shuffled));
        let labels = |n: &PetriNet| -> BTreeSet<String> {
            n.transitions().iter().filter_map(|t| t.label.clone()).collect()
        };
        prop_assert_eq!(labels(&a), labels(&b));
        prop_assert_eq!(projected(&a, 40), projected(&b, 40));
        prop_assert_eq!(
            translate_spec_decl(&reference).constraints,
            translate_spec_decl(&shuffled).constraints
        );
    }
}
