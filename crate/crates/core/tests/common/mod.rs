//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use beepath::declare::{internal_label, ConstraintInstance, DeclareSpec, Template};
use beepath::grammar::{parse_source, LEADING_TEXT};
use beepath::llm::{ChatRequest, Transport, TransportError};
use beepath::model::{analyze, FragmentInstance, ProcessSpec};
use beepath::petri::PetriNet;

pub const HOSPITAL: &str = include_str!("../../data/hospital.beepath");

/// Wraps fragment statements into a complete document that starts with
/// "A" and finishes after `last`.
pub fn document(body: &str, last: &str) -> String {
    format!("{LEADING_TEXT}.\nInitially start \"A\".\n{body}\nAfter \"{last}\" ends, the process finishes.\n")
}

pub fn spec_of(source: &str) -> ProcessSpec {
    let d = parse_source(source).unwrap_or_else(|e| panic!("{e}\n{source}"));
    analyze(&d).unwrap_or_else(|e| panic!("{e}\n{source}"))
}

/// The last flow fragment of `body` together with the spec it lives in.
pub fn fragment(body: &str, last: &str) -> (ProcessSpec, FragmentInstance) {
    let p = spec_of(&document(body, last));
    let f = p.fragments.last().expect("no flow fragment").clone();
    (p, f)
}

/// The instances the fragment catalogue uses, one per flow fragment type,
/// each with the activity to close on.
pub const CATALOGUE: [(&str, &str, &str); 11] = [
    ("Sequence", "After \"A\" ends, immediately start \"B\".", "B"),
    (
        "ParallelSplit",
        "After \"A\" ends, immediately start \"B\" and start \"C\".",
        "C",
    ),
    (
        "Synchronization",
        "After \"D\" ends and \"E\" ends, immediately start \"F\".",
        "F",
    ),
    (
        "ExclusiveChoice",
        "After \"A\" ends, immediately either start \"B\" or start \"C\".",
        "C",
    ),
    (
        "SimpleMerge",
        "After either \"D\" ends or \"E\" ends, immediately start \"F\".",
        "F",
    ),
    (
        "RepeatSince",
        "After \"A\" ends, immediately repeat since \"B\" or start \"C\".",
        "C",
    ),
    ("Eventually", "After \"A\" ends, eventually start \"B\".", "B"),
    (
        "AndSplitInXorSplit",
        "(B_and_C): \"B\" and \"C\".\nAfter \"A\" ends, immediately either start (B_and_C) or start \"D\".",
        "D",
    ),
    (
        "XorSplitInAndSplit",
        "(B_or_C): \"B\" or \"C\".\nAfter \"A\" ends, immediately start (B_or_C) and start \"D\".",
        "D",
    ),
    (
        "AndJoinInXorJoin",
        "(E_and_F): \"E\" and \"F\".\nAfter either (E_and_F) ends or \"G\" ends, immediately start \"H\".",
        "H",
    ),
    (
        "XorJoinInAndJoin",
        "(E_or_F): \"E\" or \"F\".\nAfter (E_or_F) ends and \"G\" ends, immediately start \"H\".",
        "H",
    ),
];

pub fn catalogue(name: &str) -> (ProcessSpec, FragmentInstance) {
    let (_, body, last) = CATALOGUE
        .iter()
        .find(|(n, _, _)| *n == name)
        .unwrap_or_else(|| panic!("no catalogue entry {name}"));
    fragment(body, last)
}

/// Plays back canned replies and keeps every request it saw.
pub struct Scripted {
    replies: RefCell<VecDeque<Result<String, TransportError>>>,
    pub seen: RefCell<Vec<ChatRequest>>,
}

impl Scripted {
    pub fn new(replies: Vec<Result<String, TransportError>>) -> Self {
        Self {
            replies: RefCell::new(replies.into()),
            seen: RefCell::new(Vec::new()),
        }
    }

    pub fn texts(replies: &[&str]) -> Self {
        Self::new(replies.iter().map(|r| Ok(r.to_string())).collect())
    }
}

impl Transport for Scripted {
    fn complete(&self, request: &ChatRequest) -> Result<String, TransportError> {
        self.seen.borrow_mut().push(request.clone());
        self.replies
            .borrow_mut()
            .pop_front()
            .expect("transport called more often than scripted")
    }
}

pub fn c1(t: Template, a: &str) -> ConstraintInstance {
    ConstraintInstance::unary(t, internal_label(a))
}

pub fn c2(t: Template, a: &str, b: &str) -> ConstraintInstance {
    ConstraintInstance::binary(t, internal_label(a), internal_label(b))
}

// ---------------------------------------------------------------------------
// Direct template semantics, evaluated position by position.

fn at(trace: &[String], i: usize, x: &str) -> bool {
    trace.get(i).is_some_and(|s| s == x)
}

fn count(trace: &[String], x: &str) -> usize {
    trace.iter().filter(|s| *s == x).count()
}

fn no_between(trace: &[String], from: usize, to: usize, x: &str) -> bool {
    (from + 1..to).all(|k| !at(trace, k, x))
}

/// Every `x` is later followed by `y`, with no other `x` before that `y`.
fn alt_response(t: &[String], x: &str, y: &str) -> bool {
    (0..t.len())
        .filter(|&i| at(t, i, x))
        .all(|i| (i + 1..t.len()).any(|j| at(t, j, y) && no_between(t, i, j, x)))
}

/// Every `x` is preceded by a `y`, with no other `x` since that `y`.
fn alt_precedence(t: &[String], x: &str, y: &str) -> bool {
    (0..t.len())
        .filter(|&j| at(t, j, x))
        .all(|j| (0..j).any(|i| at(t, i, y) && no_between(t, i, j, x)))
}

pub fn holds(c: &ConstraintInstance, t: &[String]) -> bool {
    let a = c.params[0].as_str();
    let b = c.params.get(1).map(String::as_str).unwrap_or("");
    let n = t.len();
    match c.template {
        Template::Init => at(t, 0, a),
        Template::ExactlyOne => count(t, a) == 1,
        Template::CoExistence => (count(t, a) > 0) == (count(t, b) > 0),
        Template::NotCoExistence => count(t, a) == 0 || count(t, b) == 0,
        Template::Succession => {
            (0..n)
                .filter(|&i| at(t, i, a))
                .all(|i| (i + 1..n).any(|j| at(t, j, b)))
                && (0..n)
                    .filter(|&j| at(t, j, b))
                    .all(|j| (0..j).any(|i| at(t, i, a)))
        }
        Template::AlternateSuccession => alt_response(t, a, b) && alt_precedence(t, b, a),
        Template::ChainSuccession => {
            (0..n).filter(|&i| at(t, i, a)).all(|i| at(t, i + 1, b))
                && (0..n)
                    .filter(|&j| at(t, j, b))
                    .all(|j| j > 0 && at(t, j - 1, a))
        }
        Template::NotChainSuccession => (0..n).all(|i| !(at(t, i, a) && at(t, i + 1, b))),
        Template::AlternatePrecedence => alt_precedence(t, a, b),
        Template::AlternateResponse => alt_response(t, a, b),
    }
}

pub fn holds_all(spec: &DeclareSpec, t: &[String]) -> bool {
    spec.constraints.iter().all(|c| holds(c, t))
}

/// Every word over `alphabet` of length at most `max_len`.
pub fn words(alphabet: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in alphabet {
                let mut v: Vec<String> = w.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

// ---------------------------------------------------------------------------
// TPN reader.

/// Label (`None` when invisible), sorted inputs, sorted outputs.
pub type TpnTransition = (Option<String>, Vec<String>, Vec<String>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TpnNet {
    pub places: BTreeMap<String, u32>,
    pub transitions: BTreeMap<String, TpnTransition>,
}

#[derive(Debug, PartialEq)]
enum TpnTok {
    Word(String),
    Quoted(String),
    Tilde,
}

fn tpn_tokens(s: &str) -> Vec<TpnTok> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' => out.push(TpnTok::Quoted(
                chars.by_ref().take_while(|&x| x != '"').collect(),
            )),
            '~' => out.push(TpnTok::Tilde),
            c if c.is_whitespace() => {}
            c => {
                let mut w = c.to_string();
                while let Some(&x) = chars.peek() {
                    if x.is_whitespace() || x == '"' || x == '~' {
                        break;
                    }
                    w.push(x);
                    chars.next();
                }
                out.push(TpnTok::Word(w));
            }
        }
    }
    out
}

pub fn read_tpn(text: &str) -> TpnNet {
    let mut places = BTreeMap::new();
    let mut transitions = BTreeMap::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let body = line.strip_suffix(';').expect("statement without ';'");
        let toks = tpn_tokens(body);
        match toks.as_slice() {
            [TpnTok::Word(kw), TpnTok::Quoted(id)] if kw == "place" => {
                places.insert(id.clone(), 0);
            }
            [TpnTok::Word(kw), TpnTok::Quoted(id), TpnTok::Word(init), TpnTok::Word(n)]
                if kw == "place" && init == "init" =>
            {
                places.insert(id.clone(), n.parse().unwrap());
            }
            [TpnTok::Word(kw), TpnTok::Quoted(id), TpnTok::Tilde, TpnTok::Quoted(label), rest @ ..]
                if kw == "trans" =>
            {
                let mut ins = Vec::new();
                let mut outs = Vec::new();
                let mut side = None;
                for t in rest {
                    match t {
                        TpnTok::Word(w) if w == "in" => side = Some(&mut ins),
                        TpnTok::Word(w) if w == "out" => side = Some(&mut outs),
                        TpnTok::Quoted(p) => side
                            .as_mut()
                            .expect("place before 'in'/'out'")
                            .push(p.clone()),
                        other => panic!("unexpected {other:?} in {line}"),
                    }
                }
                ins.sort();
                outs.sort();
                let label = (label != "$invisible$").then(|| label.clone());
                transitions.insert(id.clone(), (label, ins, outs));
            }
            _ => panic!("unknown TPN statement {line}"),
        }
    }
    TpnNet {
        places,
        transitions,
    }
}

/// The same structure read straight off the in-memory net.
pub fn tpn_view(net: &PetriNet) -> TpnNet {
    let mut places = BTreeMap::new();
    for (i, p) in net.places().iter().enumerate() {
        places.insert(p.id.clone(), net.initial_marking().0[i]);
    }
    let mut transitions = BTreeMap::new();
    for t in net.transition_ids() {
        let tr = net.transition(t);
        let mut ins: Vec<String> = net
            .preset(t)
            .iter()
            .map(|p| net.places()[p.0].id.clone())
            .collect();
        let mut outs: Vec<String> = net
            .postset(t)
            .iter()
            .map(|p| net.places()[p.0].id.clone())
            .collect();
        ins.sort();
        outs.sort();
        transitions.insert(tr.id.clone(), (tr.label.clone(), ins, outs));
    }
    TpnNet {
        places,
        transitions,
    }
}

// ---------------------------------------------------------------------------
// DECL reader.

pub fn read_decl(text: &str) -> (Vec<String>, BTreeSet<ConstraintInstance>) {
    let mut alphabet = Vec::new();
    let mut constraints = BTreeSet::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(a) = line.strip_prefix("activity ") {
            alphabet.push(internal_label(a).to_string());
            continue;
        }
        let (name, rest) = line.split_once('[').expect("constraint without '['");
        let (args, tail) = rest.split_once(']').expect("constraint without ']'");
        assert!(tail.trim_start().starts_with('|'), "{line}");
        let template = Template::from_decl_name(name.trim())
            .unwrap_or_else(|| panic!("unknown template {name}"));
        let params: Vec<String> = args
            .split(',')
            .map(|p| internal_label(p.trim()).to_string())
            .collect();
        constraints.insert(ConstraintInstance::new(template, params).unwrap());
    }
    (alphabet, constraints)
}

// ---------------------------------------------------------------------------
// A small DOT syntax checker: `digraph { stmt* }` with node, edge,
// attribute and default-attribute statements.

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    Punct(char),
    Arrow,
}

fn dot_tokens(text: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('\\') => {
                        s.push('\\');
                        s.push(chars.next().ok_or("dangling escape")?);
                    }
                    Some('"') => break,
                    Some(x) => s.push(x),
                    None => return Err("unterminated string".into()),
                }
            }
            out.push(Tok::Id(s));
        } else if c == '-' {
            chars.next();
            if chars.next() != Some('>') {
                return Err("expected '->'".into());
            }
            out.push(Tok::Arrow);
        } else if "{}[];=,".contains(c) {
            chars.next();
            out.push(Tok::Punct(c));
        } else if c.is_alphanumeric() || c == '_' || c == '.' {
            let mut s = String::new();
            while let Some(&x) = chars.peek() {
                if x.is_alphanumeric() || x == '_' || x == '.' {
                    s.push(x);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Id(s));
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

/// Node and edge counts of a well-formed digraph.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct DotSummary {
    pub nodes: BTreeSet<String>,
    pub edges: Vec<(String, String)>,
}

pub fn check_dot(text: &str) -> Result<DotSummary, String> {
    let toks = dot_tokens(text)?;
    let mut i = 0;
    let expect = |i: &mut usize, t: Tok| -> Result<(), String> {
        if toks.get(*i) == Some(&t) {
            *i += 1;
            Ok(())
        } else {
            Err(format!(
                "expected {t:?} at token {i}, found {:?}",
                toks.get(*i)
            ))
        }
    };
    expect(&mut i, Tok::Id("digraph".into()))?;
    expect(&mut i, Tok::Punct('{'))?;
    let mut summary = DotSummary::default();
    let attrs = |i: &mut usize| -> Result<(), String> {
        if toks.get(*i) != Some(&Tok::Punct('[')) {
            return Ok(());
        }
        *i += 1;
        loop {
            match toks.get(*i) {
                Some(Tok::Punct(']')) => {
                    *i += 1;
                    return Ok(());
                }
                Some(Tok::Id(_)) => {
                    *i += 1;
                    if toks.get(*i) != Some(&Tok::Punct('=')) {
                        return Err("attribute without '='".into());
                    }
                    *i += 1;
                    if !matches!(toks.get(*i), Some(Tok::Id(_))) {
                        return Err("attribute without value".into());
                    }
                    *i += 1;
                    if toks.get(*i) == Some(&Tok::Punct(',')) {
                        *i += 1;
                    }
                }
                other => return Err(format!("bad attribute list at {other:?}")),
            }
        }
    };
    loop {
        match toks.get(i).cloned() {
            Some(Tok::Punct('}')) => {
                i += 1;
                break;
            }
            Some(Tok::Id(id)) => {
                i += 1;
                match toks.get(i) {
                    Some(Tok::Punct('=')) => {
                        i += 1;
                        if !matches!(toks.get(i), Some(Tok::Id(_))) {
                            return Err("assignment without value".into());
                        }
                        i += 1;
                    }
                    Some(Tok::Arrow) => {
                        let mut from = id;
                        while toks.get(i) == Some(&Tok::Arrow) {
                            i += 1;
                            let Some(Tok::Id(to)) = toks.get(i).cloned() else {
                                return Err("edge without target".into());
                            };
                            i += 1;
                            summary.nodes.insert(from.clone());
                            summary.nodes.insert(to.clone());
                            summary.edges.push((from, to.clone()));
                            from = to;
                        }
                        attrs(&mut i)?;
                    }
                    _ => {
                        if !matches!(id.as_str(), "node" | "edge" | "graph") {
                            summary.nodes.insert(id);
                        }
                        attrs(&mut i)?;
                    }
                }
                expect(&mut i, Tok::Punct(';'))?;
            }
            other => return Err(format!("unexpected {other:?}")),
        }
    }
    if i != toks.len() {
        return Err("trailing tokens after the graph".into());
    }
    Ok(summary)
}
