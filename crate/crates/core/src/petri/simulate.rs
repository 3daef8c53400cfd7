//! Bounded enumeration of complete firing sequences.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::net::{Marking, NetError, PetriNet, TransitionId};

pub const DEFAULT_MAX_STATES: usize = 100_000;

/// Tokens above this count in any place trigger a boundedness warning.
pub const CAPACITY_WARNING: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiringSequence {
    pub transitions: Vec<TransitionId>,
    pub marking: Marking,
}

impl FiringSequence {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn ids<'n>(&self, net: &'n PetriNet) -> Vec<&'n str> {
        self.transitions
            .iter()
            .map(|t| net.transition(*t).id.as_str())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Complete sequences, sorted and free of duplicates.
    pub traces: Vec<FiringSequence>,
    pub distinct_markings: usize,
    pub warnings: Vec<String>,
}

struct Search<'n> {
    net: &'n PetriNet,
    max_states: usize,
    seen: HashSet<Marking>,
    can_complete: HashMap<(Marking, usize), bool>,
    over_capacity: BTreeSet<usize>,
    found: Vec<Vec<TransitionId>>,
}

impl Search<'_> {
    fn visit(&mut self, m: &Marking) -> Result<(), NetError> {
        if self.seen.contains(m) {
            return Ok(());
        }
        if self.seen.len() >= self.max_states {
            return Err(NetError::StateBudgetExceeded(self.max_states));
        }
        for (i, &c) in m.0.iter().enumerate() {
            if c > CAPACITY_WARNING {
                self.over_capacity.insert(i);
            }
        }
        self.seen.insert(m.clone());
        Ok(())
    }

    fn is_final(&self, m: &Marking) -> bool {
        m == self.net.final_marking()
    }

    /// Whether some continuation of at most `budget` steps reaches the final marking.
    fn completes(&mut self, m: &Marking, budget: usize) -> Result<bool, NetError> {
        if let Some(&known) = self.can_complete.get(&(m.clone(), budget)) {
            return Ok(known);
        }
        self.visit(m)?;
        let mut ok = self.is_final(m);
        if !ok && budget > 0 {
            for t in self.net.transition_ids() {
                if self.net.is_enabled(m, t) {
                    let next = self.net.fire_unchecked(m, t);
                    if self.completes(&next, budget - 1)? {
                        ok = true;
                        break;
                    }
                }
            }
        }
        self.can_complete.insert((m.clone(), budget), ok);
        Ok(ok)
    }

    fn collect(
        &mut self,
        m: &Marking,
        budget: usize,
        path: &mut Vec<TransitionId>,
    ) -> Result<(), NetError> {
        if self.is_final(m) {
            self.found.push(path.clone());
        }
        if budget == 0 {
            return Ok(());
        }
        for t in self.net.transition_ids() {
            if !self.net.is_enabled(m, t) {
                continue;
            }
            let next = self.net.fire_unchecked(m, t);
            if self.completes(&next, budget - 1)? {
                path.push(t);
                self.collect(&next, budget - 1, path)?;
                path.pop();
            }
        }
        Ok(())
    }
}

impl PetriNet {
    /// Every firing sequence of length at most `max_len` from the initial
    /// marking that ends in exactly the final marking.
    ///
    /// Fails with [`NetError::StateBudgetExceeded`] once more than
    /// `max_states` distinct markings have been explored.
    pub fn enumerate_complete_traces(
        &self,
        max_len: usize,
        max_states: usize,
    ) -> Result<Enumeration, NetError> {
        let mut search = Search {
            net: self,
            max_states,
            seen: HashSet::new(),
            can_complete: HashMap::new(),
            over_capacity: BTreeSet::new(),
            found: Vec::new(),
        };
        let m0 = self.initial_marking().clone();
        if search.completes(&m0, max_len)? {
            search.collect(&m0, max_len, &mut Vec::new())?;
        }
        let final_marking = self.final_marking().clone();
        let mut traces: Vec<FiringSequence> = search
            .found
            .into_iter()
            .map(|transitions| FiringSequence {
                transitions,
                marking: final_marking.clone(),
            })
            .collect();
        traces.sort();
        traces.dedup();
        let warnings = search
            .over_capacity
            .iter()
            .map(|&p| {
                format!(
                    "place \"{}\" holds more than {CAPACITY_WARNING} tokens in a reachable marking",
                    self.places()[p].id
                )
            })
            .collect();
        Ok(Enumeration {
            traces,
            distinct_markings: search.seen.len(),
            warnings,
        })
    }
}
