//! Fragment gadgets and their composition by label fusion.

use crate::grammar::{ClosingMode, FragmentKind};
use crate::model::{
    ActivityRegistry, Branch, Expanded, FragmentInstance, ProcessSpec, SubprocessTable,
};

use super::net::{PetriNet, PlaceId, TransitionId};
use super::{end_label, start_label};

/// What a fragment-level place stands for once the fragment is composed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaceRole {
    /// Owned by the fragment; renamed with the fragment prefix.
    Local,
    /// The place between `<activity>_start` and `<activity>_end`.
    Active(String),
    /// Drawn in the stand-alone picture only; dropped when composing.
    Boundary,
    /// Whatever places already enable `<activity>_start`.
    PreStart(String),
    Source,
    Sink,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FragmentTransition {
    Labeled(String),
    Silent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FragmentArc {
    In(usize, usize),
    Out(usize, usize),
}

/// A piece of net that refers to activity gadgets by label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetFragment {
    pub places: Vec<PlaceRole>,
    pub transitions: Vec<FragmentTransition>,
    pub arcs: Vec<FragmentArc>,
}

impl NetFragment {
    fn place(&mut self, role: PlaceRole) -> usize {
        if matches!(
            role,
            PlaceRole::Active(_) | PlaceRole::PreStart(_) | PlaceRole::Source | PlaceRole::Sink
        ) {
            if let Some(i) = self.places.iter().position(|r| *r == role) {
                return i;
            }
        }
        self.places.push(role);
        self.places.len() - 1
    }

    fn local(&mut self) -> usize {
        self.place(PlaceRole::Local)
    }

    fn labeled(&mut self, label: String) -> usize {
        let t = FragmentTransition::Labeled(label);
        if let Some(i) = self.transitions.iter().position(|x| *x == t) {
            return i;
        }
        self.transitions.push(t);
        self.transitions.len() - 1
    }

    fn silent(&mut self) -> usize {
        self.transitions.push(FragmentTransition::Silent);
        self.transitions.len() - 1
    }

    fn arc_in(&mut self, p: usize, t: usize) {
        let a = FragmentArc::In(p, t);
        if !self.arcs.contains(&a) {
            self.arcs.push(a);
        }
    }

    fn arc_out(&mut self, t: usize, p: usize) {
        let a = FragmentArc::Out(t, p);
        if !self.arcs.contains(&a) {
            self.arcs.push(a);
        }
    }

    /// `x_start` and the active place it marks.
    fn started(&mut self, x: &str) -> usize {
        let t = self.labeled(start_label(x));
        let a = self.place(PlaceRole::Active(x.to_string()));
        self.arc_out(t, a);
        t
    }

    /// `x_end` and the active place it consumes.
    fn ended(&mut self, x: &str) -> usize {
        let a = self.place(PlaceRole::Active(x.to_string()));
        let t = self.labeled(end_label(x));
        self.arc_in(a, t);
        t
    }

    /// Exclusive start of one branch from place `p`.
    fn xor_out(&mut self, p: usize, b: &[String], all: bool) {
        if all {
            let s = self.silent();
            self.arc_in(p, s);
            for m in b {
                let q = self.local();
                self.arc_out(s, q);
                let t = self.started(m);
                self.arc_in(q, t);
            }
        } else {
            for m in b {
                let t = self.started(m);
                self.arc_in(p, t);
            }
        }
    }

    /// Concurrent start of one branch from transition `from`.
    fn and_out(&mut self, from: usize, b: &[String], all: bool) {
        if all {
            for m in b {
                let q = self.local();
                self.arc_out(from, q);
                let t = self.started(m);
                self.arc_in(q, t);
            }
        } else {
            let q = self.local();
            self.arc_out(from, q);
            for m in b {
                let t = self.started(m);
                self.arc_in(q, t);
            }
        }
    }

    /// One branch ending into the merge place `p`.
    fn xor_in(&mut self, b: &[String], all: bool, p: usize) {
        if all {
            let s = self.silent();
            for m in b {
                let e = self.ended(m);
                let q = self.local();
                self.arc_out(e, q);
                self.arc_in(q, s);
            }
            self.arc_out(s, p);
        } else {
            for m in b {
                let e = self.ended(m);
                self.arc_out(e, p);
            }
        }
    }

    /// One branch ending as a precondition of transition `to`.
    fn and_in(&mut self, b: &[String], all: bool, to: usize) {
        if all {
            for m in b {
                let e = self.ended(m);
                let q = self.local();
                self.arc_out(e, q);
                self.arc_in(q, to);
            }
        } else {
            let q = self.local();
            for m in b {
                let e = self.ended(m);
                self.arc_out(e, q);
            }
            self.arc_in(q, to);
        }
    }

    pub fn silent_count(&self) -> usize {
        self.transitions
            .iter()
            .filter(|t| **t == FragmentTransition::Silent)
            .count()
    }

    /// The fragment as a net of its own, every role kept as a plain place.
    ///
    /// Places are named `p1..pn` in creation order, labeled transitions by
    /// their label and silent ones `t1..tn`.
    pub fn to_net(&self) -> PetriNet {
        let mut net = PetriNet::new();
        let places: Vec<PlaceId> = (0..self.places.len())
            .map(|i| {
                net.add_place(format!("p{}", i + 1))
                    .expect("fresh place id")
            })
            .collect();
        let mut silent = 0;
        let transitions: Vec<TransitionId> = self
            .transitions
            .iter()
            .map(|t| match t {
                FragmentTransition::Labeled(l) => net
                    .add_transition(l.clone(), Some(l.clone()))
                    .expect("labels are unique within a fragment"),
                FragmentTransition::Silent => {
                    silent += 1;
                    net.add_transition(format!("t{silent}"), None)
                        .expect("fresh transition id")
                }
            })
            .collect();
        for a in &self.arcs {
            match *a {
                FragmentArc::In(p, t) => net.add_input_arc(places[p], transitions[t]),
                FragmentArc::Out(t, p) => net.add_output_arc(transitions[t], places[p]),
            }
        }
        net
    }
}

struct Branches {
    members: Vec<Vec<String>>,
    all: Vec<bool>,
}

fn branches(args: &[Branch], registry: &ActivityRegistry, table: &SubprocessTable) -> Branches {
    let mut out = Branches {
        members: Vec::new(),
        all: Vec::new(),
    };
    for b in args {
        let e = b.expand(table);
        out.all.push(matches!(e, Expanded::All(_)));
        out.members.push(
            e.members()
                .iter()
                .map(|a| registry.name(*a).to_string())
                .collect(),
        );
    }
    out
}

fn single_name(b: &Branch, registry: &ActivityRegistry) -> String {
    let a = b
        .activity()
        .expect("argument position only admits an activity");
    registry.name(a).to_string()
}

/// The gadget for one fragment instance, in the topology of its picture
/// generalized to any number of branches.
pub fn translate_fragment_pn(
    f: &FragmentInstance,
    subprocesses: &SubprocessTable,
    registry: &ActivityRegistry,
) -> NetFragment {
    use FragmentKind::*;
    let mut g = NetFragment::default();
    match f.kind {
        Sequence | Eventually => {
            let a = single_name(&f.args[0], registry);
            let b = single_name(&f.args[1], registry);
            let before = g.place(PlaceRole::Boundary);
            let a_start = g.started(&a);
            g.arc_in(before, a_start);
            let a_end = g.ended(&a);
            g.and_out(a_end, std::slice::from_ref(&b), true);
            let b_end = g.ended(&b);
            let after = g.place(PlaceRole::Boundary);
            g.arc_out(b_end, after);
        }
        ParallelSplit | XorSplitInAndSplit => {
            let a = single_name(&f.args[0], registry);
            let e = g.ended(&a);
            let bs = branches(&f.args[1..], registry, subprocesses);
            for (m, all) in bs.members.iter().zip(bs.all) {
                g.and_out(e, m, all);
            }
        }
        ExclusiveChoice | AndSplitInXorSplit => {
            let a = single_name(&f.args[0], registry);
            let e = g.ended(&a);
            let p = g.local();
            g.arc_out(e, p);
            let bs = branches(&f.args[1..], registry, subprocesses);
            for (m, all) in bs.members.iter().zip(bs.all) {
                g.xor_out(p, m, all);
            }
        }
        Synchronization | XorJoinInAndJoin => {
            let n = f.args.len();
            let bs = branches(&f.args[..n - 1], registry, subprocesses);
            let h = single_name(&f.args[n - 1], registry);
            let mut pending = Vec::new();
            for (m, all) in bs.members.iter().zip(bs.all) {
                if all {
                    for x in m {
                        let e = g.ended(x);
                        let q = g.local();
                        g.arc_out(e, q);
                        pending.push(q);
                    }
                } else {
                    let q = g.local();
                    for x in m {
                        let e = g.ended(x);
                        g.arc_out(e, q);
                    }
                    pending.push(q);
                }
            }
            let t = g.started(&h);
            for q in pending {
                g.arc_in(q, t);
            }
        }
        SimpleMerge | AndJoinInXorJoin => {
            let n = f.args.len();
            let bs = branches(&f.args[..n - 1], registry, subprocesses);
            let h = single_name(&f.args[n - 1], registry);
            let p = g.local();
            for (m, all) in bs.members.iter().zip(bs.all) {
                g.xor_in(m, all, p);
            }
            let t = g.started(&h);
            g.arc_in(p, t);
        }
        RepeatSince => {
            let a = single_name(&f.args[0], registry);
            let b = single_name(&f.args[1], registry);
            let pre = g.place(PlaceRole::PreStart(b.clone()));
            let b_start = g.labeled(start_label(&b));
            g.arc_in(pre, b_start);
            let a_end = g.labeled(end_label(&a));
            let p = g.local();
            g.arc_out(a_end, p);
            let s = g.silent();
            g.arc_in(p, s);
            g.arc_out(s, pre);
            for c in &f.args[2..] {
                let c = single_name(c, registry);
                g.xor_out(p, std::slice::from_ref(&c), false);
            }
        }
        AndSubprocess | OrSubprocess => {}
    }
    g
}

/// Routes the closing branches into the sink place.
pub fn closing_fragment(
    mode: ClosingMode,
    args: &[Branch],
    registry: &ActivityRegistry,
    subprocesses: &SubprocessTable,
) -> NetFragment {
    let mut g = NetFragment::default();
    let bs = branches(args, registry, subprocesses);
    match mode {
        ClosingMode::Single | ClosingMode::Disjunctive => {
            let sink = g.place(PlaceRole::Sink);
            for (m, all) in bs.members.iter().zip(bs.all) {
                g.xor_in(m, all, sink);
            }
        }
        ClosingMode::Conjunctive => {
            let s = g.silent();
            for (m, all) in bs.members.iter().zip(bs.all) {
                g.and_in(m, all, s);
            }
            let sink = g.place(PlaceRole::Sink);
            g.arc_out(s, sink);
        }
    }
    g
}

/// Dual of [`closing_fragment`]: routes the source token into the branches.
fn opening_fragment(
    mode: ClosingMode,
    args: &[Branch],
    registry: &ActivityRegistry,
    subprocesses: &SubprocessTable,
) -> NetFragment {
    let mut g = NetFragment::default();
    let source = g.place(PlaceRole::Source);
    let bs = branches(args, registry, subprocesses);
    match mode {
        ClosingMode::Single | ClosingMode::Disjunctive => {
            for (m, all) in bs.members.iter().zip(bs.all) {
                g.xor_out(source, m, all);
            }
        }
        ClosingMode::Conjunctive => {
            let s = g.silent();
            g.arc_in(source, s);
            for (m, all) in bs.members.iter().zip(bs.all) {
                g.and_out(s, m, all);
            }
        }
    }
    g
}

struct Composer {
    net: PetriNet,
    source: Option<PlaceId>,
    sink: Option<PlaceId>,
}

fn active_id(activity: &str) -> String {
    format!("{activity}_active")
}

impl Composer {
    fn new<'a>(activities: impl IntoIterator<Item = &'a str>) -> Self {
        let mut net = PetriNet::new();
        for a in activities {
            let s = net
                .add_transition(start_label(a), Some(start_label(a)))
                .expect("activity node ids are collision free");
            let p = net
                .add_place(active_id(a))
                .expect("activity node ids are collision free");
            let e = net
                .add_transition(end_label(a), Some(end_label(a)))
                .expect("activity node ids are collision free");
            net.add_output_arc(s, p);
            net.add_input_arc(p, e);
        }
        Composer {
            net,
            source: None,
            sink: None,
        }
    }

    fn label(&self, label: &str) -> TransitionId {
        self.net
            .transition_by_label(label)
            .unwrap_or_else(|| panic!("no gadget carries label {label}"))
    }

    fn add(&mut self, prefix: &str, g: &NetFragment) {
        let mut local = 0;
        let mut resolved: Vec<Vec<PlaceId>> = Vec::with_capacity(g.places.len());
        for role in &g.places {
            let ids = match role {
                PlaceRole::Local => {
                    local += 1;
                    vec![self
                        .net
                        .add_place(format!("{prefix}_p{local}"))
                        .expect("fresh local id")]
                }
                PlaceRole::Boundary => Vec::new(),
                PlaceRole::Active(a) => {
                    vec![self.net.place_id(&active_id(a)).expect("gadget exists")]
                }
                PlaceRole::PreStart(a) => {
                    let t = self.label(&start_label(a));
                    let pre = self.net.preset(t).to_vec();
                    if pre.is_empty() {
                        local += 1;
                        vec![self
                            .net
                            .add_place(format!("{prefix}_p{local}"))
                            .expect("fresh local id")]
                    } else {
                        pre
                    }
                }
                PlaceRole::Source => vec![*self.source.get_or_insert_with(|| {
                    let p = self.net.add_place("source").expect("source is unique");
                    self.net.set_initial(p, 1);
                    p
                })],
                PlaceRole::Sink => vec![*self.sink.get_or_insert_with(|| {
                    let p = self.net.add_place("sink").expect("sink is unique");
                    self.net.set_final(p, 1);
                    p
                })],
            };
            resolved.push(ids);
        }
        let mut silent = 0;
        let transitions: Vec<TransitionId> = g
            .transitions
            .iter()
            .map(|t| match t {
                FragmentTransition::Labeled(l) => self.label(l),
                FragmentTransition::Silent => {
                    silent += 1;
                    self.net
                        .add_transition(format!("{prefix}_t{silent}"), None)
                        .expect("fresh silent id")
                }
            })
            .collect();
        for a in &g.arcs {
            match *a {
                FragmentArc::In(p, t) => {
                    for &q in &resolved[p] {
                        self.net.add_input_arc(q, transitions[t]);
                    }
                }
                FragmentArc::Out(t, p) => {
                    for &q in &resolved[p] {
                        self.net.add_output_arc(transitions[t], q);
                    }
                }
            }
        }
    }

    /// Gives every start transition without a precondition a dead place.
    fn finish(mut self, activities: &[String]) -> PetriNet {
        for a in activities {
            let t = self.label(&start_label(a));
            if self.net.preset(t).is_empty() {
                let p = self
                    .net
                    .add_place(format!("{a}_pre"))
                    .expect("activity node ids are collision free");
                self.net.add_input_arc(p, t);
            }
        }
        if self.sink.is_none() {
            let p = self.net.add_place("sink").expect("sink is unique");
            self.net.set_final(p, 1);
        }
        self.net
    }
}

fn compose_in_order(composer: &mut Composer, parts: &[(String, NetFragment, bool)]) {
    for (prefix, g, _) in parts.iter().filter(|p| !p.2) {
        composer.add(prefix, g);
    }
    for (prefix, g, _) in parts.iter().filter(|p| p.2) {
        composer.add(prefix, g);
    }
}

/// The global net: one gadget per activity, every fragment fused on labels,
/// a marked `source` before the initial activity and a `sink` reached by the
/// closing statement.
pub fn translate_spec_pn(p: &ProcessSpec) -> PetriNet {
    let names: Vec<String> = p.registry.names().map(str::to_string).collect();
    let mut composer = Composer::new(names.iter().map(String::as_str));
    let mut parts = Vec::new();
    parts.push((
        "open".to_string(),
        opening_fragment(
            ClosingMode::Single,
            &[Branch::Activity(p.initial)],
            &p.registry,
            &p.subprocesses,
        ),
        false,
    ));
    for (i, f) in p.fragments.iter().enumerate() {
        parts.push((
            format!("f{i}"),
            translate_fragment_pn(f, &p.subprocesses, &p.registry),
            f.kind == FragmentKind::RepeatSince,
        ));
    }
    parts.push((
        "close".to_string(),
        closing_fragment(
            p.closing.mode,
            &p.closing.args,
            &p.registry,
            &p.subprocesses,
        ),
        false,
    ));
    compose_in_order(&mut composer, &parts);
    composer.finish(&names)
}

/// A fragment made runnable on its own: a source feeding the activities it
/// consumes and a sink collecting the activities it starts.
pub fn standalone_net(
    f: &FragmentInstance,
    registry: &ActivityRegistry,
    subprocesses: &SubprocessTable,
) -> PetriNet {
    use FragmentKind::*;
    let names: Vec<String> = f
        .activities(subprocesses)
        .into_iter()
        .map(|a| registry.name(a).to_string())
        .collect();
    let (open_mode, open_args, close_mode, close_args): (
        ClosingMode,
        &[Branch],
        ClosingMode,
        &[Branch],
    ) = match f.kind {
        Sequence | Eventually => (
            ClosingMode::Single,
            &f.args[..1],
            ClosingMode::Single,
            &f.args[1..],
        ),
        ParallelSplit | XorSplitInAndSplit => (
            ClosingMode::Single,
            &f.args[..1],
            ClosingMode::Conjunctive,
            &f.args[1..],
        ),
        ExclusiveChoice | AndSplitInXorSplit => (
            ClosingMode::Single,
            &f.args[..1],
            ClosingMode::Disjunctive,
            &f.args[1..],
        ),
        Synchronization | XorJoinInAndJoin => {
            let n = f.args.len();
            (
                ClosingMode::Conjunctive,
                &f.args[..n - 1],
                ClosingMode::Single,
                &f.args[n - 1..],
            )
        }
        SimpleMerge | AndJoinInXorJoin => {
            let n = f.args.len();
            (
                ClosingMode::Disjunctive,
                &f.args[..n - 1],
                ClosingMode::Single,
                &f.args[n - 1..],
            )
        }
        RepeatSince => (
            ClosingMode::Single,
            &f.args[..1],
            ClosingMode::Disjunctive,
            &f.args[2..],
        ),
        AndSubprocess | OrSubprocess => {
            let composer = Composer::new(std::iter::empty());
            return composer.finish(&[]);
        }
    };
    let mut composer = Composer::new(names.iter().map(String::as_str));
    let parts = vec![
        (
            "open".to_string(),
            opening_fragment(open_mode, open_args, registry, subprocesses),
            false,
        ),
        (
            "f0".to_string(),
            translate_fragment_pn(f, subprocesses, registry),
            f.kind == RepeatSince,
        ),
        (
            "close".to_string(),
            closing_fragment(close_mode, close_args, registry, subprocesses),
            false,
        ),
    ];
    compose_in_order(&mut composer, &parts);
    composer.finish(&names)
}
