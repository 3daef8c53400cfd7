//! Semantic analysis: the global activity registry, the subprocess table and
//! resolved fragment instances, plus connectivity validation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::diagnostic::{Diagnostic, Diagnostics, Position};
use crate::grammar::{
    ActRef, ActivityName, ClosingMode, Description, Fragment, FragmentKind, Shape, SubprocessId,
};

/// Artificial initial event used by join-style DECLARE translations.
pub const INIT_LABEL: &str = "__INIT__";
/// Artificial terminal event used by split-style DECLARE translations.
pub const END_LABEL: &str = "__END__";

pub fn is_reserved(name: &str) -> bool {
    name == INIT_LABEL || name == END_LABEL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivityId(pub usize);

/// Insertion-ordered map from activity names to dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActivityRegistry {
    names: Vec<ActivityName>,
    first_seen: Vec<Position>,
    index: HashMap<ActivityName, ActivityId>,
}

impl ActivityRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &ActivityName, at: Position) -> ActivityId {
        if let Some(id) = self.index.get(name) {
            return *id;
        }
        let id = ActivityId(self.names.len());
        self.names.push(name.clone());
        self.first_seen.push(at);
        self.index.insert(name.clone(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<ActivityId> {
        self.index.get(&ActivityName::new(name)).copied()
    }

    pub fn name(&self, id: ActivityId) -> &str {
        self.names[id.0].as_str()
    }

    pub fn first_seen(&self, id: ActivityId) -> Position {
        self.first_seen[id.0]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ActivityId> {
        (0..self.names.len()).map(ActivityId)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(ActivityName::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubprocessKind {
    And,
    Or,
}

impl fmt::Display for SubprocessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubprocessKind::And => "AND",
            SubprocessKind::Or => "OR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subprocess {
    pub id: SubprocessId,
    pub kind: SubprocessKind,
    pub members: Vec<ActivityId>,
    /// Index of the declaring statement among all fragments of the description.
    pub declaration_index: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubprocessTable {
    entries: Vec<Subprocess>,
}

impl SubprocessTable {
    pub fn get(&self, id: &SubprocessId) -> Option<&Subprocess> {
        self.entries.iter().find(|s| &s.id == id)
    }

    pub fn insert(&mut self, sp: Subprocess) {
        self.entries.push(sp);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subprocess> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A resolved `act_fragment`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Activity(ActivityId),
    Subprocess(SubprocessId),
}

/// A branch with its subprocess expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expanded {
    Single(ActivityId),
    All(Vec<ActivityId>),
    Any(Vec<ActivityId>),
}

impl Expanded {
    pub fn members(&self) -> &[ActivityId] {
        match self {
            Expanded::Single(a) => std::slice::from_ref(a),
            Expanded::All(m) | Expanded::Any(m) => m,
        }
    }
}

impl Branch {
    pub fn expand(&self, table: &SubprocessTable) -> Expanded {
        match self {
            Branch::Activity(a) => Expanded::Single(*a),
            Branch::Subprocess(id) => {
                let sp = table
                    .get(id)
                    .unwrap_or_else(|| panic!("unresolved subprocess ({id}) survived analysis"));
                match sp.kind {
                    SubprocessKind::And => Expanded::All(sp.members.clone()),
                    SubprocessKind::Or => Expanded::Any(sp.members.clone()),
                }
            }
        }
    }

    pub fn activity(&self) -> Option<ActivityId> {
        match self {
            Branch::Activity(a) => Some(*a),
            Branch::Subprocess(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentInstance {
    pub kind: FragmentKind,
    pub args: Vec<Branch>,
    pub position: Position,
}

impl FragmentInstance {
    /// Branches whose end this fragment consumes.
    pub fn sources(&self) -> &[Branch] {
        match self.kind.shape() {
            Shape::Split | Shape::Repeat => &self.args[..1],
            Shape::Join => &self.args[..self.args.len() - 1],
            Shape::Declaration => &[],
        }
    }

    /// Branches this fragment starts (not including a repeat target).
    pub fn targets(&self) -> &[Branch] {
        match self.kind.shape() {
            Shape::Split => &self.args[1..],
            Shape::Join => &self.args[self.args.len() - 1..],
            Shape::Repeat => &self.args[2..],
            Shape::Declaration => &[],
        }
    }

    pub fn repeat_target(&self) -> Option<ActivityId> {
        (self.kind == FragmentKind::RepeatSince)
            .then(|| self.args[1].activity())
            .flatten()
    }

    /// Every activity this fragment mentions, in argument order, subprocesses expanded.
    pub fn activities(&self, table: &SubprocessTable) -> Vec<ActivityId> {
        let mut out = Vec::new();
        for b in &self.args {
            for a in b.expand(table).members() {
                if !out.contains(a) {
                    out.push(*a);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedClosing {
    pub mode: ClosingMode,
    pub args: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessSpec {
    pub registry: ActivityRegistry,
    pub subprocesses: SubprocessTable,
    /// Flow fragments in source order; declarations live in `subprocesses`.
    pub fragments: Vec<FragmentInstance>,
    pub initial: ActivityId,
    pub closing: ResolvedClosing,
}

impl ProcessSpec {
    pub fn name(&self, id: ActivityId) -> &str {
        self.registry.name(id)
    }
}

/// Builds the global storage and resolves fragment arguments.
pub fn analyze(d: &Description) -> Result<ProcessSpec, Diagnostics> {
    let mut errors = Vec::new();
    let mut registry = ActivityRegistry::new();
    let mut subprocesses = SubprocessTable::default();
    let mut fragments = Vec::new();

    let mut intern = |registry: &mut ActivityRegistry,
                      errors: &mut Vec<Diagnostic>,
                      name: &ActivityName,
                      at: Position| {
        if is_reserved(name.as_str()) {
            errors.push(Diagnostic::error(
                format!("activity name \"{name}\" is reserved"),
                at,
            ));
        }
        registry.intern(name, at)
    };

    let initial = intern(&mut registry, &mut errors, &d.initial, d.initial_position);

    let resolve = |r: &ActRef,
                   registry: &mut ActivityRegistry,
                   errors: &mut Vec<Diagnostic>,
                   table: &SubprocessTable,
                   pending: &[(SubprocessId, Position)],
                   at: Position|
     -> Option<Branch> {
        match r {
            ActRef::Activity(a) => {
                if is_reserved(a.as_str()) {
                    errors.push(Diagnostic::error(
                        format!("activity name \"{a}\" is reserved"),
                        at,
                    ));
                }
                Some(Branch::Activity(registry.intern(a, at)))
            }
            ActRef::Subprocess(id) => {
                if table.get(id).is_some() {
                    Some(Branch::Subprocess(id.clone()))
                } else if pending.iter().any(|(p, _)| p == id) {
                    errors.push(Diagnostic::error(
                        format!("subprocess {id} used before its declaration"),
                        at,
                    ));
                    None
                } else {
                    errors.push(Diagnostic::error(format!("undeclared subprocess {id}"), at));
                    None
                }
            }
        }
    };

    // Declarations that appear later in the text, for a better use-before-declaration message.
    let declared_later: Vec<(SubprocessId, Position)> = d
        .fragments
        .iter()
        .filter_map(|f| f.subprocess_id.clone().map(|id| (id, f.position)))
        .collect();

    for (index, f) in d.fragments.iter().enumerate() {
        if let Err(why) = f.check_shape() {
            errors.push(Diagnostic::error(why, f.position));
            continue;
        }
        if f.kind.is_declaration() {
            declare(
                f,
                index,
                &mut registry,
                &mut subprocesses,
                &mut errors,
                &mut intern,
            );
            continue;
        }
        let mut args = Vec::with_capacity(f.args.len());
        for a in &f.args {
            if let Some(b) = resolve(
                a,
                &mut registry,
                &mut errors,
                &subprocesses,
                &declared_later,
                f.position,
            ) {
                args.push(b);
            }
        }
        if args.len() == f.args.len() {
            fragments.push(FragmentInstance {
                kind: f.kind,
                args,
                position: f.position,
            });
        }
    }

    let closing_min = match d.closing.mode {
        ClosingMode::Single => 1,
        _ => 2,
    };
    if d.closing.args.len() < closing_min
        || (d.closing.mode == ClosingMode::Single && d.closing.args.len() != 1)
    {
        errors.push(Diagnostic::error(
            "closing statement has the wrong number of arguments for its mode",
            d.closing.position,
        ));
    }
    let mut closing_args = Vec::new();
    for a in &d.closing.args {
        if let Some(b) = resolve(
            a,
            &mut registry,
            &mut errors,
            &subprocesses,
            &declared_later,
            d.closing.position,
        ) {
            closing_args.push(b);
        }
    }

    if !errors.is_empty() {
        errors.dedup();
        return Err(Diagnostics(errors));
    }
    Ok(ProcessSpec {
        registry,
        subprocesses,
        fragments,
        initial,
        closing: ResolvedClosing {
            mode: d.closing.mode,
            args: closing_args,
        },
    })
}

fn declare(
    f: &Fragment,
    index: usize,
    registry: &mut ActivityRegistry,
    table: &mut SubprocessTable,
    errors: &mut Vec<Diagnostic>,
    intern: &mut impl FnMut(
        &mut ActivityRegistry,
        &mut Vec<Diagnostic>,
        &ActivityName,
        Position,
    ) -> ActivityId,
) {
    let id = f.subprocess_id.clone().expect("declaration carries an id");
    let mut members = Vec::new();
    for a in &f.args {
        if let ActRef::Activity(name) = a {
            let m = intern(registry, errors, name, f.position);
            if !members.contains(&m) {
                members.push(m);
            }
        }
    }
    if table.get(&id).is_some() {
        errors.push(Diagnostic::error(
            format!("duplicate subprocess id {id}"),
            f.position,
        ));
        return;
    }
    if members.len() < 2 {
        errors.push(Diagnostic::error(
            format!("subprocess {id} needs at least 2 distinct members"),
            f.position,
        ));
        return;
    }
    let kind = if f.kind == FragmentKind::AndSubprocess {
        SubprocessKind::And
    } else {
        SubprocessKind::Or
    };
    table.insert(Subprocess {
        id,
        kind,
        members,
        declaration_index: index,
    });
}

/// Connectivity and well-formedness warnings. Never returns errors.
pub fn validate(p: &ProcessSpec) -> Vec<Diagnostic> {
    let mut warnings = Vec::new();
    let n = p.registry.len();
    let names = |ids: &[ActivityId]| {
        ids.iter()
            .map(|a| p.name(*a))
            .collect::<Vec<_>>()
            .join(", ")
    };

    // Fragment graph: ended activities -> started (or repeated) activities.
    let mut edges: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut started = vec![false; n];
    let mut consumed = vec![false; n];
    started[p.initial.0] = true;
    for f in &p.fragments {
        let srcs: Vec<ActivityId> = f
            .sources()
            .iter()
            .flat_map(|b| b.expand(&p.subprocesses).members().to_vec())
            .collect();
        let mut tgts: Vec<ActivityId> = f
            .targets()
            .iter()
            .flat_map(|b| b.expand(&p.subprocesses).members().to_vec())
            .collect();
        for t in &tgts {
            started[t.0] = true;
        }
        if let Some(r) = f.repeat_target() {
            tgts.push(r);
        }
        for s in &srcs {
            consumed[s.0] = true;
            for t in &tgts {
                edges[s.0].insert(t.0);
            }
        }
    }
    for b in &p.closing.args {
        for a in b.expand(&p.subprocesses).members() {
            consumed[a.0] = true;
        }
    }

    let mut reachable = vec![false; n];
    let mut queue = VecDeque::from([p.initial.0]);
    reachable[p.initial.0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &edges[u] {
            if !reachable[v] {
                reachable[v] = true;
                queue.push_back(v);
            }
        }
    }

    let unreachable: Vec<ActivityId> = p.registry.ids().filter(|a| !reachable[a.0]).collect();
    if let Some(first) = unreachable.first() {
        warnings.push(Diagnostic::warning(
            format!("unreachable activities: {}", names(&unreachable)),
            p.registry.first_seen(*first),
        ));
    }

    for f in &p.fragments {
        if let Some(r) = f.repeat_target() {
            if !started[r.0] {
                warnings.push(Diagnostic::warning(
                    format!("repeat target {} is never started", p.name(r)),
                    f.position,
                ));
            }
        }
    }

    let dangling: Vec<ActivityId> = p
        .registry
        .ids()
        .filter(|a| reachable[a.0] && !consumed[a.0])
        .collect();
    if let Some(first) = dangling.first() {
        warnings.push(Diagnostic::warning(
            format!(
                "activities whose end leads nowhere (not consumed and not in the closing statement): {}",
                names(&dangling)
            ),
            p.registry.first_seen(*first),
        ));
    }

    // Two split-like fragments consuming the same end and starting a common activity.
    for (i, f) in p.fragments.iter().enumerate() {
        for g in &p.fragments[i + 1..] {
            if f.kind.shape() == Shape::Join || g.kind.shape() == Shape::Join {
                continue;
            }
            if f.sources() != g.sources() {
                continue;
            }
            let ft: BTreeSet<ActivityId> = f
                .targets()
                .iter()
                .flat_map(|b| b.expand(&p.subprocesses).members().to_vec())
                .collect();
            let common: Vec<ActivityId> = g
                .targets()
                .iter()
                .flat_map(|b| b.expand(&p.subprocesses).members().to_vec())
                .filter(|a| ft.contains(a))
                .collect();
            if let (Some(t), Some(src)) = (common.first(), f.sources()[0].activity()) {
                warnings.push(Diagnostic::warning(
                    format!(
                        "fragments at {} and {} both start {} after {} ends (possible over-specification)",
                        f.position,
                        g.position,
                        p.name(*t),
                        p.name(src)
                    ),
                    g.position,
                ));
            }
        }
    }
    warnings
}
