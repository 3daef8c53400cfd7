//! Fragment instances to DECLARE constraint sets.

use std::collections::BTreeSet;

use crate::grammar::FragmentKind;
use crate::model::{
    ActivityRegistry, Branch, Expanded, FragmentInstance, ProcessSpec, SubprocessTable, END_LABEL,
    INIT_LABEL,
};

use super::constraint::{ConstraintInstance, DeclareSpec, Template};

pub const JOIN_INTERPRETATION: &str =
    "AND-join in XOR-join: the undefined activity e in Not Chain Succession(init, e) and \
     Not Chain Succession(e, init) is read as the joined activity";

pub const INIT_INTERPRETATION: &str =
    "the initial statement adds Init of the initial activity; the closing statement adds nothing";

enum Group {
    Act(String),
    And(Vec<String>),
    Or(Vec<String>),
}

impl Group {
    fn members(&self) -> &[String] {
        match self {
            Group::Act(a) => std::slice::from_ref(a),
            Group::And(m) | Group::Or(m) => m,
        }
    }

    /// Labels standing for this branch when branches exclude each other.
    fn representatives(&self) -> &[String] {
        match self {
            Group::Act(a) => std::slice::from_ref(a),
            Group::And(m) => &m[..1],
            Group::Or(m) => m,
        }
    }
}

fn group(b: &Branch, registry: &ActivityRegistry, table: &SubprocessTable) -> Group {
    let names =
        |m: &[crate::model::ActivityId]| m.iter().map(|a| registry.name(*a).to_string()).collect();
    match b.expand(table) {
        Expanded::Single(a) => Group::Act(registry.name(a).to_string()),
        Expanded::All(m) => Group::And(names(&m)),
        Expanded::Any(m) => Group::Or(names(&m)),
    }
}

struct Out(BTreeSet<ConstraintInstance>);

impl Out {
    fn one(&mut self, t: Template, a: &str) {
        self.0.insert(ConstraintInstance::unary(t, a));
    }

    fn two(&mut self, t: Template, a: &str, b: &str) {
        if a != b {
            self.0.insert(ConstraintInstance::binary(t, a, b));
        }
    }

    fn pairwise(&mut self, t: Template, items: &[String]) {
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                self.two(t, a, b);
            }
        }
    }

    /// CoExistence inside AND groups, Not CoExistence inside OR groups and
    /// across branches.
    fn exclusive_branches(&mut self, groups: &[Group]) {
        for g in groups {
            match g {
                Group::And(m) => {
                    for x in &m[1..] {
                        self.two(Template::CoExistence, &m[0], x);
                    }
                }
                Group::Or(m) => self.pairwise(Template::NotCoExistence, m),
                Group::Act(_) => {}
            }
        }
        for (i, g) in groups.iter().enumerate() {
            for h in &groups[i + 1..] {
                for a in g.representatives() {
                    for b in h.representatives() {
                        self.two(Template::NotCoExistence, a, b);
                    }
                }
            }
        }
    }
}

/// The constraint set of one fragment, generalized to any number of branches.
pub fn translate_fragment_decl(
    f: &FragmentInstance,
    subprocesses: &SubprocessTable,
    registry: &ActivityRegistry,
) -> BTreeSet<ConstraintInstance> {
    use FragmentKind::*;
    use Template::*;
    let groups: Vec<Group> = f
        .args
        .iter()
        .map(|b| group(b, registry, subprocesses))
        .collect();
    let first = || groups[0].members()[0].as_str();
    let last = || groups[groups.len() - 1].members()[0].as_str();
    let mut out = Out(BTreeSet::new());
    match f.kind {
        Sequence => out.two(ChainSuccession, first(), last()),
        Eventually => out.two(Succession, first(), last()),
        ParallelSplit => {
            for g in &groups[1..] {
                out.two(AlternateSuccession, first(), &g.members()[0]);
            }
            out.one(ExactlyOne, first());
        }
        Synchronization => {
            for g in &groups[..groups.len() - 1] {
                out.two(AlternateSuccession, &g.members()[0], last());
            }
            out.one(ExactlyOne, last());
        }
        ExclusiveChoice => {
            let targets: Vec<String> = groups[1..].iter().map(|g| g.members()[0].clone()).collect();
            out.pairwise(NotCoExistence, &targets);
            for b in &targets {
                out.two(AlternatePrecedence, b, first());
                out.two(AlternateResponse, b, END_LABEL);
            }
            out.one(ExactlyOne, first());
            out.two(NotChainSuccession, first(), END_LABEL);
            out.two(NotChainSuccession, END_LABEL, first());
        }
        SimpleMerge => {
            let sources: Vec<String> = groups[..groups.len() - 1]
                .iter()
                .map(|g| g.members()[0].clone())
                .collect();
            for d in &sources {
                out.two(AlternateResponse, d, last());
            }
            out.pairwise(NotCoExistence, &sources);
            out.two(NotChainSuccession, INIT_LABEL, last());
            out.two(NotChainSuccession, last(), INIT_LABEL);
            out.one(ExactlyOne, last());
            out.one(Init, INIT_LABEL);
            out.one(ExactlyOne, INIT_LABEL);
        }
        RepeatSince | AndSubprocess | OrSubprocess => {}
        AndSplitInXorSplit => {
            let a = first();
            for g in &groups[1..] {
                for m in g.members() {
                    out.two(AlternatePrecedence, m, a);
                    out.two(AlternateResponse, m, END_LABEL);
                }
            }
            out.exclusive_branches(&groups[1..]);
            out.one(ExactlyOne, a);
            out.one(ExactlyOne, END_LABEL);
            out.two(NotChainSuccession, a, END_LABEL);
            out.two(NotChainSuccession, END_LABEL, a);
        }
        XorSplitInAndSplit => {
            let a = first();
            for g in &groups[1..] {
                match g {
                    Group::Act(x) => out.two(AlternateSuccession, a, x),
                    Group::Or(m) => {
                        for x in m {
                            out.two(AlternatePrecedence, x, a);
                        }
                        out.pairwise(NotCoExistence, m);
                    }
                    Group::And(m) => {
                        for x in m {
                            out.two(AlternateSuccession, a, x);
                        }
                        for x in &m[1..] {
                            out.two(CoExistence, &m[0], x);
                        }
                    }
                }
            }
            out.one(ExactlyOne, a);
        }
        AndJoinInXorJoin => {
            let h = last();
            let sources = &groups[..groups.len() - 1];
            for g in sources {
                for m in g.members() {
                    out.two(AlternateResponse, m, h);
                }
            }
            out.exclusive_branches(sources);
            out.one(ExactlyOne, h);
            out.one(Init, INIT_LABEL);
            out.two(NotChainSuccession, INIT_LABEL, h);
            out.two(NotChainSuccession, h, INIT_LABEL);
        }
        XorJoinInAndJoin => {
            let h = last();
            for g in &groups[..groups.len() - 1] {
                match g {
                    Group::Act(x) => out.two(AlternateSuccession, x, h),
                    Group::Or(m) => {
                        for x in m {
                            out.two(AlternateResponse, x, h);
                        }
                        out.pairwise(NotCoExistence, m);
                    }
                    Group::And(m) => {
                        for x in m {
                            out.two(AlternateSuccession, x, h);
                        }
                        for x in &m[1..] {
                            out.two(CoExistence, &m[0], x);
                        }
                    }
                }
            }
            out.one(ExactlyOne, h);
        }
    }
    out.0
}

fn with_reserved(
    mut alphabet: Vec<String>,
    constraints: &BTreeSet<ConstraintInstance>,
) -> Vec<String> {
    for r in [INIT_LABEL, END_LABEL] {
        if constraints.iter().any(|c| c.params.iter().any(|p| p == r)) {
            alphabet.push(r.to_string());
        }
    }
    alphabet
}

/// One fragment as a spec of its own over the activities it mentions.
pub fn fragment_spec(
    f: &FragmentInstance,
    subprocesses: &SubprocessTable,
    registry: &ActivityRegistry,
) -> DeclareSpec {
    let constraints = translate_fragment_decl(f, subprocesses, registry);
    let names = f
        .activities(subprocesses)
        .into_iter()
        .map(|a| registry.name(a).to_string())
        .collect();
    let mut interpretations = Vec::new();
    if f.kind == FragmentKind::AndJoinInXorJoin {
        interpretations.push(JOIN_INTERPRETATION.to_string());
    }
    DeclareSpec {
        alphabet: with_reserved(names, &constraints),
        constraints,
        interpretations,
    }
}

/// Union of every fragment's set plus Init of the initial activity.
pub fn translate_spec_decl(p: &ProcessSpec) -> DeclareSpec {
    let mut constraints = BTreeSet::new();
    let mut interpretations = vec![INIT_INTERPRETATION.to_string()];
    for f in &p.fragments {
        constraints.extend(translate_fragment_decl(f, &p.subprocesses, &p.registry));
        if f.kind == FragmentKind::AndJoinInXorJoin
            && !interpretations.iter().any(|i| i == JOIN_INTERPRETATION)
        {
            interpretations.push(JOIN_INTERPRETATION.to_string());
        }
    }
    constraints.insert(ConstraintInstance::unary(Template::Init, p.name(p.initial)));
    let names = p.registry.names().map(str::to_string).collect();
    DeclareSpec {
        alphabet: with_reserved(names, &constraints),
        constraints,
        interpretations,
    }
}
