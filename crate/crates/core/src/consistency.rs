//! Cross-check of the two translations: every complete run of the net,
//! seen as the sequence of activity starts, must satisfy the DECLARE spec.

use serde::Serialize;
use thiserror::Error;

use crate::declare::{Checker, ConstraintInstance, DeclareError, DeclareSpec, Verdict};
use crate::model::{END_LABEL, INIT_LABEL};
use crate::petri::{FiringSequence, NetError, PetriNet};

#[derive(Debug, Error)]
pub enum ConsistencyError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Declare(#[from] DeclareError),
}

/// Activity labels of the `_start` transitions of `seq`, in firing order.
pub fn project(net: &PetriNet, seq: &FiringSequence) -> Vec<String> {
    seq.transitions
        .iter()
        .filter_map(|t| net.transition(*t).label.as_deref())
        .filter_map(|l| l.strip_suffix("_start"))
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// The checked trace, including any artificial init/end.
    pub trace: Vec<String>,
    pub violated: Vec<ConstraintInstance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Wraps a projected trace in `init`/`end` when the spec mentions them.
pub fn augment(spec: &DeclareSpec, mut trace: Vec<String>) -> Vec<String> {
    if spec.references(INIT_LABEL) {
        trace.insert(0, INIT_LABEL.to_string());
    }
    if spec.references(END_LABEL) {
        trace.push(END_LABEL.to_string());
    }
    trace
}

pub fn verify_inclusion(
    net: &PetriNet,
    spec: &DeclareSpec,
    max_len: usize,
    max_states: usize,
) -> Result<Report, ConsistencyError> {
    let run = net.enumerate_complete_traces(max_len, max_states)?;
    let checker = Checker::new(spec)?;
    let mut violations = Vec::new();
    for seq in &run.traces {
        let trace = augment(spec, project(net, seq));
        if let Verdict::Violated(violated) = checker.check(&trace)? {
            violations.push(Violation { trace, violated });
        }
    }
    violations.sort_by(|a, b| a.trace.cmp(&b.trace));
    violations.dedup();
    Ok(Report {
        checked: run.traces.len(),
        violations,
        warnings: run.warnings,
    })
}
