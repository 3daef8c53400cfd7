use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PlaceId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TransitionId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Place {
    pub id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub id: String,
    /// `None` for silent transitions.
    pub label: Option<String>,
}

impl Transition {
    pub fn is_silent(&self) -> bool {
        self.label.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Arc {
    PlaceToTransition(PlaceId, TransitionId),
    TransitionToPlace(TransitionId, PlaceId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetError {
    #[error("unknown place \"{0}\"")]
    UnknownPlace(String),
    #[error("unknown transition \"{0}\"")]
    UnknownTransition(String),
    #[error("duplicate node id \"{0}\"")]
    DuplicateNode(String),
    #[error("marking has {got} entries but the net has {expected} places")]
    MarkingSize { expected: usize, got: usize },
    #[error("transition \"{0}\" is not enabled")]
    NotEnabled(String),
    #[error("state budget exceeded: more than {0} distinct markings")]
    StateBudgetExceeded(usize),
}

/// Token counts indexed by [`PlaceId`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Marking(pub Vec<u32>);

impl Marking {
    pub fn empty(places: usize) -> Self {
        Marking(vec![0; places])
    }

    pub fn get(&self, p: PlaceId) -> u32 {
        self.0[p.0]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }
}

/// A place/transition net without arc weights.
///
/// Nodes are addressed by dense ids; the string ids are what the emitters
/// print. Arcs form a set, so adding the same arc twice is a no-op.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PetriNet {
    places: Vec<Place>,
    transitions: Vec<Transition>,
    arcs: BTreeSet<Arc>,
    initial_marking: Marking,
    final_marking: Marking,
    #[serde(skip)]
    preset: Vec<Vec<PlaceId>>,
    #[serde(skip)]
    postset: Vec<Vec<PlaceId>>,
}

impl Default for PetriNet {
    fn default() -> Self {
        Self::new()
    }
}

impl PetriNet {
    pub fn new() -> Self {
        Self {
            places: Vec::new(),
            transitions: Vec::new(),
            arcs: BTreeSet::new(),
            initial_marking: Marking::default(),
            final_marking: Marking::default(),
            preset: Vec::new(),
            postset: Vec::new(),
        }
    }

    fn node_taken(&self, id: &str) -> bool {
        self.place_id(id).is_some() || self.transition_id(id).is_some()
    }

    pub fn add_place(&mut self, id: impl Into<String>) -> Result<PlaceId, NetError> {
        let id = id.into();
        if self.node_taken(&id) {
            return Err(NetError::DuplicateNode(id));
        }
        self.places.push(Place { id });
        self.initial_marking.0.push(0);
        self.final_marking.0.push(0);
        Ok(PlaceId(self.places.len() - 1))
    }

    pub fn add_transition(
        &mut self,
        id: impl Into<String>,
        label: Option<String>,
    ) -> Result<TransitionId, NetError> {
        let id = id.into();
        if self.node_taken(&id) {
            return Err(NetError::DuplicateNode(id));
        }
        self.transitions.push(Transition { id, label });
        self.preset.push(Vec::new());
        self.postset.push(Vec::new());
        Ok(TransitionId(self.transitions.len() - 1))
    }

    pub fn add_input_arc(&mut self, p: PlaceId, t: TransitionId) {
        if self.arcs.insert(Arc::PlaceToTransition(p, t)) {
            self.preset[t.0].push(p);
            self.preset[t.0].sort();
        }
    }

    pub fn add_output_arc(&mut self, t: TransitionId, p: PlaceId) {
        if self.arcs.insert(Arc::TransitionToPlace(t, p)) {
            self.postset[t.0].push(p);
            self.postset[t.0].sort();
        }
    }

    pub fn set_initial(&mut self, p: PlaceId, tokens: u32) {
        self.initial_marking.0[p.0] = tokens;
    }

    pub fn set_final(&mut self, p: PlaceId, tokens: u32) {
        self.final_marking.0[p.0] = tokens;
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn arcs(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    pub fn place(&self, p: PlaceId) -> &Place {
        &self.places[p.0]
    }

    pub fn transition(&self, t: TransitionId) -> &Transition {
        &self.transitions[t.0]
    }

    pub fn place_id(&self, id: &str) -> Option<PlaceId> {
        self.places.iter().position(|p| p.id == id).map(PlaceId)
    }

    pub fn transition_id(&self, id: &str) -> Option<TransitionId> {
        self.transitions
            .iter()
            .position(|t| t.id == id)
            .map(TransitionId)
    }

    pub fn transition_by_label(&self, label: &str) -> Option<TransitionId> {
        self.transitions
            .iter()
            .position(|t| t.label.as_deref() == Some(label))
            .map(TransitionId)
    }

    pub fn preset(&self, t: TransitionId) -> &[PlaceId] {
        &self.preset[t.0]
    }

    pub fn postset(&self, t: TransitionId) -> &[PlaceId] {
        &self.postset[t.0]
    }

    /// Transitions with an arc into `p`.
    pub fn place_preset(&self, p: PlaceId) -> Vec<TransitionId> {
        self.transition_ids()
            .filter(|t| self.postset[t.0].contains(&p))
            .collect()
    }

    /// Transitions consuming from `p`.
    pub fn place_postset(&self, p: PlaceId) -> Vec<TransitionId> {
        self.transition_ids()
            .filter(|t| self.preset[t.0].contains(&p))
            .collect()
    }

    pub fn place_ids(&self) -> impl Iterator<Item = PlaceId> {
        (0..self.places.len()).map(PlaceId)
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> {
        (0..self.transitions.len()).map(TransitionId)
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial_marking
    }

    pub fn final_marking(&self) -> &Marking {
        &self.final_marking
    }

    pub fn labeled_count(&self) -> usize {
        self.transitions.iter().filter(|t| !t.is_silent()).count()
    }

    pub fn silent_count(&self) -> usize {
        self.transitions.iter().filter(|t| t.is_silent()).count()
    }

    /// Builds a marking from `(place id, tokens)` pairs.
    pub fn marking(&self, tokens: &[(&str, u32)]) -> Result<Marking, NetError> {
        let mut m = Marking::empty(self.places.len());
        for (id, n) in tokens {
            let p = self
                .place_id(id)
                .ok_or_else(|| NetError::UnknownPlace(id.to_string()))?;
            m.0[p.0] = *n;
        }
        Ok(m)
    }

    pub(crate) fn check_marking(&self, m: &Marking) -> Result<(), NetError> {
        if m.0.len() != self.places.len() {
            return Err(NetError::MarkingSize {
                expected: self.places.len(),
                got: m.0.len(),
            });
        }
        Ok(())
    }

    pub fn is_enabled(&self, m: &Marking, t: TransitionId) -> bool {
        self.preset[t.0].iter().all(|p| m.0[p.0] >= 1)
    }

    /// All transitions enabled at `m`, in id order.
    pub fn enabled(&self, m: &Marking) -> Result<Vec<TransitionId>, NetError> {
        self.check_marking(m)?;
        Ok(self
            .transition_ids()
            .filter(|t| self.is_enabled(m, *t))
            .collect())
    }

    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking, NetError> {
        self.check_marking(m)?;
        if t.0 >= self.transitions.len() {
            return Err(NetError::UnknownTransition(format!("#{}", t.0)));
        }
        if !self.is_enabled(m, t) {
            return Err(NetError::NotEnabled(self.transitions[t.0].id.clone()));
        }
        Ok(self.fire_unchecked(m, t))
    }

    pub(crate) fn fire_unchecked(&self, m: &Marking, t: TransitionId) -> Marking {
        let mut next = m.clone();
        for p in &self.preset[t.0] {
            next.0[p.0] -= 1;
        }
        for p in &self.postset[t.0] {
            next.0[p.0] += 1;
        }
        next
    }

    /// Structural defects: source transitions, places that can never be
    /// marked and places whose tokens are never consumed.
    pub fn connectivity_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for t in self.transition_ids() {
            if self.preset[t.0].is_empty() {
                out.push(format!(
                    "transition \"{}\" has no input place",
                    self.transitions[t.0].id
                ));
            }
        }
        for p in self.place_ids() {
            let id = &self.places[p.0].id;
            if self.initial_marking.0[p.0] == 0 && self.place_preset(p).is_empty() {
                out.push(format!("place \"{id}\" can never be marked"));
            }
            if self.final_marking.0[p.0] == 0 && self.place_postset(p).is_empty() {
                out.push(format!("place \"{id}\" is never consumed"));
            }
        }
        out
    }

    /// Fires `seq` from the initial marking, failing at the first disabled step.
    pub fn replay(&self, seq: &[TransitionId]) -> Result<Marking, NetError> {
        seq.iter()
            .try_fold(self.initial_marking.clone(), |m, t| self.fire(&m, *t))
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> PetriNet {
        let mut n = PetriNet::new();
        let p1 = n.add_place("p1").unwrap();
        let p2 = n.add_place("p2").unwrap();
        let t = n.add_transition("A_start", Some("A_start".into())).unwrap();
        n.add_input_arc(p1, t);
        n.add_output_arc(t, p2);
        n.set_initial(p1, 1);
        n.set_final(p2, 1);
        n
    }

    #[test]
    fn fire_moves_token() {
        let n = chain();
        let m = n.marking(&[("p1", 1)]).unwrap();
        assert_eq!(n.enabled(&m).unwrap(), [TransitionId(0)]);
        let next = n.fire(&m, TransitionId(0)).unwrap();
        assert_eq!(next, n.marking(&[("p2", 1)]).unwrap());
        assert!(n.enabled(&next).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let n = chain();
        assert_eq!(
            n.marking(&[("nope", 1)]),
            Err(NetError::UnknownPlace("nope".into()))
        );
        assert!(matches!(
            n.enabled(&Marking(vec![1])),
            Err(NetError::MarkingSize { .. })
        ));
        let empty = Marking::empty(2);
        assert_eq!(
            n.fire(&empty, TransitionId(0)),
            Err(NetError::NotEnabled("A_start".into()))
        );
        let mut n = n;
        assert_eq!(
            n.add_place("A_start"),
            Err(NetError::DuplicateNode("A_start".into()))
        );
    }

    #[test]
    fn duplicate_arcs_collapse() {
        let mut n = chain();
        n.add_input_arc(PlaceId(0), TransitionId(0));
        assert_eq!(n.arcs().len(), 2);
        assert_eq!(n.preset(TransitionId(0)), [PlaceId(0)]);
    }

    #[test]
    fn enumeration_budget() {
        let n = chain();
        assert_eq!(n.enumerate_complete_traces(0, 10).unwrap().traces.len(), 0);
        assert_eq!(n.enumerate_complete_traces(1, 10).unwrap().traces.len(), 1);
        assert_eq!(
            n.enumerate_complete_traces(1, 1).unwrap_err(),
            NetError::StateBudgetExceeded(1)
        );
    }
}
