//! Parse tree of a BeePath description.
//!
//! Equality on AST nodes is structural: source positions are carried along for
//! diagnostics but never participate in `==`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diagnostic::Position;

/// Text of an activity literal, without the surrounding quotes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActivityName(pub String);

impl ActivityName {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ActivityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifier of a subprocess declaration, without the parentheses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubprocessId(pub String);

impl SubprocessId {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SubprocessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An `act_fragment`: either a quoted activity or a parenthesised subprocess id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActRef {
    Activity(ActivityName),
    Subprocess(SubprocessId),
}

impl ActRef {
    pub fn activity(s: impl Into<String>) -> Self {
        ActRef::Activity(ActivityName::new(s))
    }

    pub fn subprocess(s: impl Into<String>) -> Self {
        ActRef::Subprocess(SubprocessId::new(s))
    }

    pub fn is_subprocess(&self) -> bool {
        matches!(self, ActRef::Subprocess(_))
    }

    pub fn as_activity(&self) -> Option<&ActivityName> {
        match self {
            ActRef::Activity(a) => Some(a),
            ActRef::Subprocess(_) => None,
        }
    }
}

/// Surface syntax: `"name"` for activities, `(id)` for subprocesses.
impl fmt::Display for ActRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActRef::Activity(a) => write!(f, "\"{a}\""),
            ActRef::Subprocess(s) => write!(f, "({s})"),
        }
    }
}

// JSON form: plain string for activities, "(id)" for subprocess references.
impl Serialize for ActRef {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            ActRef::Activity(a) => ser.serialize_str(a.as_str()),
            ActRef::Subprocess(s) => ser.serialize_str(&format!("({s})")),
        }
    }
}

impl<'de> Deserialize<'de> for ActRef {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            if is_word(inner) {
                return Ok(ActRef::subprocess(inner));
            }
            return Err(serde::de::Error::custom(format!(
                "invalid subprocess id {s:?}"
            )));
        }
        if is_activity_text(&s) {
            Ok(ActRef::activity(s))
        } else {
            Err(serde::de::Error::custom(format!(
                "invalid activity name {s:?}"
            )))
        }
    }
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn is_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_word_char)
}

/// `WORD (' ' WORD)*`
pub(crate) fn is_activity_text(s: &str) -> bool {
    !s.is_empty() && s.split(' ').all(is_word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FragmentKind {
    Sequence,
    ParallelSplit,
    Synchronization,
    ExclusiveChoice,
    SimpleMerge,
    RepeatSince,
    Eventually,
    AndSplitInXorSplit,
    XorSplitInAndSplit,
    AndJoinInXorJoin,
    XorJoinInAndJoin,
    AndSubprocess,
    OrSubprocess,
}

/// How a fragment's argument list divides into the activities whose end it
/// consumes and the activities it starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `args[0]` ends, `args[1..]` start.
    Split,
    /// `args[..n-1]` end, `args[n-1]` starts.
    Join,
    /// `args[0]` ends, `args[1]` is repeated, `args[2..]` start.
    Repeat,
    Declaration,
}

impl FragmentKind {
    pub const ALL: [FragmentKind; 13] = [
        FragmentKind::Sequence,
        FragmentKind::ParallelSplit,
        FragmentKind::Synchronization,
        FragmentKind::ExclusiveChoice,
        FragmentKind::SimpleMerge,
        FragmentKind::RepeatSince,
        FragmentKind::Eventually,
        FragmentKind::AndSplitInXorSplit,
        FragmentKind::XorSplitInAndSplit,
        FragmentKind::AndJoinInXorJoin,
        FragmentKind::XorJoinInAndJoin,
        FragmentKind::AndSubprocess,
        FragmentKind::OrSubprocess,
    ];

    /// The eleven control-flow fragments (everything except declarations).
    pub const FLOW: [FragmentKind; 11] = [
        FragmentKind::Sequence,
        FragmentKind::ParallelSplit,
        FragmentKind::Synchronization,
        FragmentKind::ExclusiveChoice,
        FragmentKind::SimpleMerge,
        FragmentKind::RepeatSince,
        FragmentKind::Eventually,
        FragmentKind::AndSplitInXorSplit,
        FragmentKind::XorSplitInAndSplit,
        FragmentKind::AndJoinInXorJoin,
        FragmentKind::XorJoinInAndJoin,
    ];

    pub fn shape(self) -> Shape {
        use FragmentKind::*;
        match self {
            Sequence | ParallelSplit | ExclusiveChoice | Eventually | AndSplitInXorSplit
            | XorSplitInAndSplit => Shape::Split,
            Synchronization | SimpleMerge | AndJoinInXorJoin | XorJoinInAndJoin => Shape::Join,
            RepeatSince => Shape::Repeat,
            AndSubprocess | OrSubprocess => Shape::Declaration,
        }
    }

    pub fn is_declaration(self) -> bool {
        self.shape() == Shape::Declaration
    }

    /// Variants whose arguments may name subprocesses.
    pub fn is_nested(self) -> bool {
        use FragmentKind::*;
        matches!(
            self,
            AndSplitInXorSplit | XorSplitInAndSplit | AndJoinInXorJoin | XorJoinInAndJoin
        )
    }

    pub fn name(self) -> &'static str {
        use FragmentKind::*;
        match self {
            Sequence => "Sequence",
            ParallelSplit => "ParallelSplit",
            Synchronization => "Synchronization",
            ExclusiveChoice => "ExclusiveChoice",
            SimpleMerge => "SimpleMerge",
            RepeatSince => "RepeatSince",
            Eventually => "Eventually",
            AndSplitInXorSplit => "AndSplitInXorSplit",
            XorSplitInAndSplit => "XorSplitInAndSplit",
            AndJoinInXorJoin => "AndJoinInXorJoin",
            XorJoinInAndJoin => "XorJoinInAndJoin",
            AndSubprocess => "AndSubprocess",
            OrSubprocess => "OrSubprocess",
        }
    }
}

impl fmt::Display for FragmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fragment {
    #[serde(rename = "variant")]
    pub kind: FragmentKind,
    pub args: Vec<ActRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subprocess_id: Option<SubprocessId>,
    #[serde(skip)]
    pub position: Position,
}

impl PartialEq for Fragment {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.args == other.args
            && self.subprocess_id == other.subprocess_id
    }
}

impl Eq for Fragment {}

impl Fragment {
    pub fn new(kind: FragmentKind, args: Vec<ActRef>) -> Self {
        Self {
            kind,
            args,
            subprocess_id: None,
            position: Position::default(),
        }
    }

    pub fn declaration(kind: FragmentKind, id: SubprocessId, members: Vec<ActRef>) -> Self {
        Self {
            kind,
            args: members,
            subprocess_id: Some(id),
            position: Position::default(),
        }
    }

    pub fn at(mut self, position: Position) -> Self {
        self.position = position;
        self
    }

    /// Checks arity and argument-kind rules of the variant; returns a reason on violation.
    pub fn check_shape(&self) -> Result<(), String> {
        use FragmentKind::*;
        let n = self.args.len();
        let min = match self.kind {
            Sequence | Eventually => {
                if n != 2 {
                    return Err(format!("{} takes exactly 2 arguments, got {n}", self.kind));
                }
                2
            }
            AndSubprocess | OrSubprocess => 2,
            _ => 3,
        };
        if n < min {
            return Err(format!(
                "{} needs at least {min} arguments, got {n}",
                self.kind
            ));
        }
        let subprocess_ok = |i: usize| -> bool {
            match self.kind.shape() {
                _ if !self.kind.is_nested() => false,
                Shape::Split => i > 0,
                Shape::Join => i + 1 < n,
                _ => false,
            }
        };
        for (i, a) in self.args.iter().enumerate() {
            if a.is_subprocess() && !subprocess_ok(i) {
                return Err(format!(
                    "argument {} of {} must be an activity",
                    i + 1,
                    self.kind
                ));
            }
        }
        if self.kind.is_nested() && !self.args.iter().any(ActRef::is_subprocess) {
            return Err(format!(
                "{} requires at least one subprocess argument",
                self.kind
            ));
        }
        if self.kind.is_declaration() != self.subprocess_id.is_some() {
            return Err(format!("{} has a misplaced subprocess id", self.kind));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosingMode {
    Single,
    Conjunctive,
    Disjunctive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosingStatement {
    pub mode: ClosingMode,
    pub args: Vec<ActRef>,
    #[serde(skip)]
    pub position: Position,
}

impl PartialEq for ClosingStatement {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode && self.args == other.args
    }
}

impl Eq for ClosingStatement {}

impl ClosingStatement {
    pub fn new(mode: ClosingMode, args: Vec<ActRef>) -> Self {
        Self {
            mode,
            args,
            position: Position::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Description {
    pub leading_text: String,
    pub initial: ActivityName,
    pub fragments: Vec<Fragment>,
    pub closing: ClosingStatement,
    #[serde(skip)]
    pub initial_position: Position,
}

impl PartialEq for Description {
    fn eq(&self, other: &Self) -> bool {
        self.leading_text == other.leading_text
            && self.initial == other.initial
            && self.fragments == other.fragments
            && self.closing == other.closing
    }
}

impl Eq for Description {}
