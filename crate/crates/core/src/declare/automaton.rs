//! Template automata, synchronous product and minimization.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use super::constraint::{ConstraintInstance, DeclareError, DeclareSpec, Template};

/// A total DFA over a named alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintAutomaton {
    pub alphabet: Vec<String>,
    pub initial: usize,
    pub accepting: Vec<bool>,
    /// `delta[state][symbol index]`
    pub delta: Vec<Vec<usize>>,
}

const A: usize = 0;
const B: usize = 1;
const OTHER: usize = 2;

/// `(accepting, [on a, on b, on anything else])` per state, state 0 initial.
type Table = &'static [(bool, [usize; 3])];

fn table(t: Template) -> Table {
    // The last row of every table that needs one is the rejecting sink.
    match t {
        Template::Init => &[(false, [1, 2, 2]), (true, [1, 1, 1]), (false, [2, 2, 2])],
        Template::ExactlyOne => &[(false, [1, 0, 0]), (true, [2, 1, 1]), (false, [2, 2, 2])],
        Template::CoExistence => &[
            (true, [1, 2, 0]),
            (false, [1, 3, 1]),
            (false, [3, 2, 2]),
            (true, [3, 3, 3]),
        ],
        Template::NotCoExistence => &[
            (true, [1, 2, 0]),
            (true, [1, 3, 1]),
            (true, [3, 2, 2]),
            (false, [3, 3, 3]),
        ],
        Template::Succession => &[
            (true, [1, 3, 0]),
            (false, [1, 2, 1]),
            (true, [1, 2, 2]),
            (false, [3, 3, 3]),
        ],
        Template::AlternateSuccession => {
            &[(true, [1, 2, 0]), (false, [2, 0, 1]), (false, [2, 2, 2])]
        }
        Template::ChainSuccession => &[(true, [1, 2, 0]), (false, [2, 0, 2]), (false, [2, 2, 2])],
        Template::NotChainSuccession => &[(true, [1, 0, 0]), (true, [1, 2, 0]), (false, [2, 2, 2])],
        Template::AlternatePrecedence => {
            &[(true, [2, 1, 0]), (true, [0, 1, 1]), (false, [2, 2, 2])]
        }
        Template::AlternateResponse => &[(true, [1, 0, 0]), (false, [2, 0, 1]), (false, [2, 2, 2])],
    }
}

/// The DFA of one constraint over `alphabet`; unmentioned symbols behave
/// like any other non-parameter.
pub fn constraint_automaton(
    c: &ConstraintInstance,
    alphabet: &[String],
) -> Result<ConstraintAutomaton, DeclareError> {
    for p in &c.params {
        if !alphabet.contains(p) {
            return Err(DeclareError::UnknownLabel(p.clone()));
        }
    }
    let class = |sym: &String| {
        if *sym == c.params[0] {
            A
        } else if c.params.get(1) == Some(sym) {
            B
        } else {
            OTHER
        }
    };
    let rows = table(c.template);
    Ok(ConstraintAutomaton {
        alphabet: alphabet.to_vec(),
        initial: 0,
        accepting: rows.iter().map(|r| r.0).collect(),
        delta: rows
            .iter()
            .map(|r| alphabet.iter().map(|s| r.1[class(s)]).collect())
            .collect(),
    })
}

impl ConstraintAutomaton {
    /// Accepts every word.
    pub fn universal(alphabet: &[String]) -> Self {
        Self {
            alphabet: alphabet.to_vec(),
            initial: 0,
            accepting: vec![true],
            delta: vec![vec![0; alphabet.len()]],
        }
    }

    /// Builds a total DFA from a partial edge list; missing moves go to a
    /// fresh rejecting sink.
    pub fn from_edges(
        alphabet: &[&str],
        states: usize,
        initial: usize,
        accepting: &[usize],
        edges: &[(usize, &str, usize)],
    ) -> Self {
        let sink = states;
        let mut delta = vec![vec![sink; alphabet.len()]; states + 1];
        for &(from, sym, to) in edges {
            let i = alphabet
                .iter()
                .position(|s| *s == sym)
                .unwrap_or_else(|| panic!("edge symbol {sym} outside the alphabet"));
            delta[from][i] = to;
        }
        let mut acc = vec![false; states + 1];
        for &s in accepting {
            acc[s] = true;
        }
        Self {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            initial,
            accepting: acc,
            delta,
        }
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn symbol(&self, label: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == label)
    }

    pub fn run<S: AsRef<str>>(&self, trace: &[S]) -> Result<usize, DeclareError> {
        let mut s = self.initial;
        for l in trace {
            let i = self
                .symbol(l.as_ref())
                .ok_or_else(|| DeclareError::UnknownLabel(l.as_ref().to_string()))?;
            s = self.delta[s][i];
        }
        Ok(s)
    }

    pub fn accepts<S: AsRef<str>>(&self, trace: &[S]) -> Result<bool, DeclareError> {
        Ok(self.accepting[self.run(trace)?])
    }

    /// Synchronous product over the common alphabet; reachable part only.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(
            self.alphabet, other.alphabet,
            "product needs equal alphabets"
        );
        let mut index = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let mut row = Vec::with_capacity(self.alphabet.len());
            for s in 0..self.alphabet.len() {
                let next = (self.delta[p][s], other.delta[q][s]);
                let id = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        Self {
            alphabet: self.alphabet.clone(),
            initial: 0,
            accepting: pairs
                .iter()
                .map(|&(p, q)| self.accepting[p] && other.accepting[q])
                .collect(),
            delta,
        }
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            for &t in &self.delta[order[i]] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Minimal equivalent DFA, states numbered in breadth-first order.
    pub fn minimize(&self) -> Self {
        let reach = self.reachable();
        let mut class: HashMap<usize, usize> = reach
            .iter()
            .map(|&s| (s, usize::from(self.accepting[s])))
            .collect();
        loop {
            let mut signatures: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next = HashMap::new();
            for &s in &reach {
                let sig = (
                    class[&s],
                    self.delta[s].iter().map(|t| class[t]).collect::<Vec<_>>(),
                );
                let n = signatures.len();
                let id = *signatures.entry(sig).or_insert(n);
                next.insert(s, id);
            }
            let before = class
                .values()
                .collect::<std::collections::HashSet<_>>()
                .len();
            let stable = signatures.len() == before;
            class = next;
            if stable {
                break;
            }
        }
        // Renumber blocks breadth-first from the initial block.
        let mut number: HashMap<usize, usize> = HashMap::new();
        let mut rep: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        number.insert(class[&self.initial], 0);
        rep.push(self.initial);
        while let Some(s) = queue.pop_front() {
            for &t in &self.delta[s] {
                let b = class[&t];
                if let std::collections::hash_map::Entry::Vacant(e) = number.entry(b) {
                    e.insert(rep.len());
                    rep.push(t);
                    queue.push_back(t);
                }
            }
        }
        Self {
            alphabet: self.alphabet.clone(),
            initial: 0,
            accepting: rep.iter().map(|&s| self.accepting[s]).collect(),
            delta: rep
                .iter()
                .map(|&s| self.delta[s].iter().map(|t| number[&class[t]]).collect())
                .collect(),
        }
    }

    /// States from which some accepting state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let mut live = self.accepting.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for s in 0..self.state_count() {
                if !live[s] && self.delta[s].iter().any(|&t| live[t]) {
                    live[s] = true;
                    changed = true;
                }
            }
        }
        live
    }

    /// Reachable, live states and the moves between them, as the drawings show them.
    pub fn trimmed_edges(&self) -> (Vec<usize>, Vec<(usize, String, usize)>) {
        let live = self.live_states();
        let states: Vec<usize> = self.reachable().into_iter().filter(|&s| live[s]).collect();
        let mut edges = Vec::new();
        for &s in &states {
            for (i, &t) in self.delta[s].iter().enumerate() {
                if live[t] {
                    edges.push((s, self.alphabet[i].clone(), t));
                }
            }
        }
        (states, edges)
    }

    /// Isomorphism of the trimmed automata, matching symbols by name.
    pub fn isomorphic(&self, other: &Self) -> bool {
        let mut ours = self.alphabet.clone();
        let mut theirs = other.alphabet.clone();
        ours.sort();
        theirs.sort();
        if ours != theirs {
            return false;
        }
        let (la, lb) = (self.live_states(), other.live_states());
        if la[self.initial] != lb[other.initial] {
            return false;
        }
        if !la[self.initial] {
            return true;
        }
        let perm: Vec<usize> = self
            .alphabet
            .iter()
            .map(|s| other.symbol(s).expect("same alphabet"))
            .collect();
        let mut map: HashMap<usize, usize> = HashMap::from([(self.initial, other.initial)]);
        let mut back: HashMap<usize, usize> = HashMap::from([(other.initial, self.initial)]);
        let mut queue = VecDeque::from([self.initial]);
        while let Some(s) = queue.pop_front() {
            let t = map[&s];
            if self.accepting[s] != other.accepting[t] {
                return false;
            }
            for (i, &j) in perm.iter().enumerate() {
                let (ns, nt) = (self.delta[s][i], other.delta[t][j]);
                match (la[ns], lb[nt]) {
                    (false, false) => continue,
                    (true, true) => {}
                    _ => return false,
                }
                match (map.get(&ns), back.get(&nt)) {
                    (Some(&m), _) if m != nt => return false,
                    (_, Some(&m)) if m != ns => return false,
                    (Some(_), Some(_)) => {}
                    _ => {
                        map.insert(ns, nt);
                        back.insert(nt, ns);
                        queue.push_back(ns);
                    }
                }
            }
        }
        true
    }
}

/// Conjunction of every constraint of `spec`, minimized.
pub fn spec_automaton(spec: &DeclareSpec) -> Result<ConstraintAutomaton, DeclareError> {
    let mut acc = ConstraintAutomaton::universal(&spec.alphabet);
    for c in &spec.constraints {
        acc = acc
            .product(&constraint_automaton(c, &spec.alphabet)?)
            .minimize();
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Satisfied,
    Violated(Vec<ConstraintInstance>),
}

impl Verdict {
    pub fn is_satisfied(&self) -> bool {
        *self == Verdict::Satisfied
    }
}

/// Per-constraint automata of a spec, built once for repeated checks.
#[derive(Debug, Clone)]
pub struct Checker {
    alphabet: Vec<String>,
    monitors: Vec<(ConstraintInstance, ConstraintAutomaton)>,
}

impl Checker {
    pub fn new(spec: &DeclareSpec) -> Result<Self, DeclareError> {
        let monitors = spec
            .constraints
            .iter()
            .map(|c| Ok((c.clone(), constraint_automaton(c, &spec.alphabet)?)))
            .collect::<Result<_, DeclareError>>()?;
        Ok(Self {
            alphabet: spec.alphabet.clone(),
            monitors,
        })
    }

    pub fn check<S: AsRef<str>>(&self, trace: &[S]) -> Result<Verdict, DeclareError> {
        for l in trace {
            if !self.alphabet.iter().any(|a| a == l.as_ref()) {
                return Err(DeclareError::UnknownLabel(l.as_ref().to_string()));
            }
        }
        let mut violated = Vec::new();
        for (c, a) in &self.monitors {
            if !a.accepts(trace)? {
                violated.push(c.clone());
            }
        }
        Ok(if violated.is_empty() {
            Verdict::Satisfied
        } else {
            Verdict::Violated(violated)
        })
    }
}

pub fn check_trace<S: AsRef<str>>(
    spec: &DeclareSpec,
    trace: &[S],
) -> Result<Verdict, DeclareError> {
    Checker::new(spec)?.check(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Vec<String> {
        ["A", "B", "C"].map(String::from).to_vec()
    }

    fn dfa(t: Template, params: &[&str]) -> ConstraintAutomaton {
        let c = ConstraintInstance::new(t, params.iter().map(|s| s.to_string()).collect()).unwrap();
        constraint_automaton(&c, &abc()).unwrap()
    }

    #[test]
    fn chain_succession_shape() {
        let a = dfa(Template::ChainSuccession, &["A", "B"]).minimize();
        let (states, _) = a.trimmed_edges();
        assert_eq!(states.len(), 2);
        assert!(a.accepting[a.initial]);
        assert!(a.accepts(&["A", "B"]).unwrap());
        assert!(!a.accepts(&["A"]).unwrap());
        assert!(!a.accepts(&["A", "C", "B"]).unwrap());
    }

    #[test]
    fn exactly_one_rejects_empty() {
        let a = dfa(Template::ExactlyOne, &["A"]);
        assert!(!a.accepts::<&str>(&[]).unwrap());
        assert!(a.accepts(&["C", "A", "B"]).unwrap());
        assert!(!a.accepts(&["A", "A"]).unwrap());
    }

    #[test]
    fn succession_examples() {
        let a = dfa(Template::Succession, &["A", "B"]);
        for ok in [&[][..], &["A", "B"], &["A", "A", "B"]] {
            assert!(a.accepts(ok).unwrap(), "{ok:?}");
        }
        assert!(!a.accepts(&["B"]).unwrap());
        assert!(!a.accepts(&["A", "B", "A"]).unwrap());
    }

    #[test]
    fn precedence_family_puts_the_constrained_activity_first() {
        let a = dfa(Template::AlternatePrecedence, &["B", "A"]);
        assert!(a.accepts(&["A", "B"]).unwrap());
        assert!(!a.accepts(&["B"]).unwrap());
        assert!(!a.accepts(&["A", "B", "B"]).unwrap());
        let r = dfa(Template::AlternateResponse, &["B", "C"]);
        assert!(r.accepts(&["B", "C"]).unwrap());
        assert!(!r.accepts(&["B", "B", "C"]).unwrap());
    }

    #[test]
    fn parallel_split_paths() {
        let mut spec = DeclareSpec::new(abc());
        spec.insert(ConstraintInstance::binary(
            Template::AlternateSuccession,
            "A",
            "B",
        ));
        spec.insert(ConstraintInstance::binary(
            Template::AlternateSuccession,
            "A",
            "C",
        ));
        spec.insert(ConstraintInstance::unary(Template::ExactlyOne, "A"));
        assert!(check_trace(&spec, &["A", "B", "C"]).unwrap().is_satisfied());
        assert!(check_trace(&spec, &["A", "C", "B"]).unwrap().is_satisfied());
        let v = check_trace(&spec, &["B", "A", "C"]).unwrap();
        assert_eq!(
            v,
            Verdict::Violated(vec![ConstraintInstance::binary(
                Template::AlternateSuccession,
                "A",
                "B"
            )])
        );
    }

    #[test]
    fn empty_trace_satisfies_successions() {
        let mut spec = DeclareSpec::new(abc());
        spec.insert(ConstraintInstance::binary(Template::Succession, "A", "B"));
        spec.insert(ConstraintInstance::binary(
            Template::ChainSuccession,
            "B",
            "C",
        ));
        spec.insert(ConstraintInstance::binary(
            Template::AlternateSuccession,
            "C",
            "A",
        ));
        assert!(check_trace::<&str>(&spec, &[]).unwrap().is_satisfied());
    }

    #[test]
    fn unknown_label_is_an_error() {
        let spec = DeclareSpec::new(abc());
        assert!(matches!(
            check_trace(&spec, &["A", "Z"]),
            Err(DeclareError::UnknownLabel(l)) if l == "Z"
        ));
        let c = ConstraintInstance::unary(Template::Init, "Z");
        assert!(constraint_automaton(&c, &abc()).is_err());
    }

    #[test]
    fn empty_product_is_universal() {
        let a = spec_automaton(&DeclareSpec::new(abc())).unwrap();
        assert_eq!(a.state_count(), 1);
        assert!(a.accepts(&["C", "B", "A"]).unwrap());
    }

    #[test]
    fn isomorphism_ignores_numbering_and_symbol_order() {
        let a =
            ConstraintAutomaton::from_edges(&["A", "B"], 2, 0, &[0], &[(0, "A", 1), (1, "B", 0)]);
        let b =
            ConstraintAutomaton::from_edges(&["B", "A"], 2, 1, &[1], &[(1, "A", 0), (0, "B", 1)]);
        assert!(a.isomorphic(&b));
        let c =
            ConstraintAutomaton::from_edges(&["A", "B"], 2, 0, &[0], &[(0, "B", 1), (1, "A", 0)]);
        assert!(!a.isomorphic(&c));
    }
}
