//! Recursive-descent parser producing a [`Description`].
//!
//! Statements are recognised purely by their token structure. On an error the
//! parser records a diagnostic and resynchronises at the next statement start
//! (`After`, `Initially`, or a subprocess declaration).

use super::ast::{
    ActRef, ActivityName, ClosingMode, ClosingStatement, Description, Fragment, FragmentKind,
    SubprocessId,
};
use super::lexer::{tokenize_with, Keyword, LexOptions, Token, TokenKind};
use crate::diagnostic::{Diagnostic, Diagnostics, Position};

/// One top-level sentence of a description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Initial(ActivityName),
    Fragment(Fragment),
    Closing(ClosingStatement),
}

pub fn parse(tokens: &[Token]) -> Result<Description, Diagnostics> {
    Parser::new(tokens).description()
}

/// Tokenizes and parses a whole description.
pub fn parse_source(source: &str) -> Result<Description, Diagnostics> {
    parse_source_with(source, LexOptions::default())
}

pub fn parse_source_with(source: &str, opts: LexOptions) -> Result<Description, Diagnostics> {
    let tokens = tokenize_with(source, opts)?;
    parse(&tokens)
}

/// Parses exactly one statement, e.g. a single fragment string.
pub fn parse_statement(source: &str) -> Result<Statement, Diagnostics> {
    let tokens = tokenize_with(source, LexOptions::default())?;
    let mut p = Parser::new(&tokens);
    let stmt = p.statement();
    if let Some(extra) = p.peek() {
        p.errors.push(Diagnostic::error(
            format!("unexpected {} after the end of the statement", extra.kind),
            extra.position(),
        ));
    }
    match stmt {
        Some(s) if p.errors.is_empty() => Ok(s),
        _ => {
            if p.errors.is_empty() {
                p.errors.push(Diagnostic::error(
                    "expected a statement",
                    Position::new(1, 1),
                ));
            }
            Err(Diagnostics(p.errors))
        }
    }
}

/// Argument order of an `After` statement before classification.
struct AfterParts {
    either: bool,
    sources: Vec<ActRef>,
    tail: Tail,
}

enum Tail {
    Finishes,
    StartOne(ActRef),
    StartAll(Vec<ActRef>),
    StartEither(Vec<ActRef>),
    RepeatSince(ActRef, Vec<ActRef>),
    Eventually(ActRef),
}

struct Parser<'t> {
    tokens: &'t [Token],
    i: usize,
    errors: Vec<Diagnostic>,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token]) -> Self {
        Self {
            tokens,
            i: 0,
            errors: Vec::new(),
        }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.i)
    }

    fn peek_kw(&self, k: Keyword) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(k))
    }

    fn next(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.i);
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    /// Position used for end-of-input errors: the last token, or 1:1.
    fn eof_position(&self) -> Position {
        self.tokens
            .last()
            .map(Token::position)
            .unwrap_or(Position::new(1, 1))
    }

    fn here(&self) -> Position {
        self.peek()
            .map(Token::position)
            .unwrap_or_else(|| self.eof_position())
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => Diagnostic::error(
                format!("expected {expected}, found {}", t.kind),
                t.position(),
            ),
            None => Diagnostic::error(
                format!("expected {expected}, found end of input"),
                self.eof_position(),
            ),
        }
    }

    fn expect_kw(&mut self, k: Keyword) -> PResult<&'t Token> {
        if self.peek_kw(k) {
            Ok(self.next().unwrap())
        } else {
            Err(self.unexpected(&format!("'{}'", k.as_str())))
        }
    }

    fn eat_kw(&mut self, k: Keyword) -> bool {
        if self.peek_kw(k) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn activity(&mut self) -> PResult<ActivityName> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Activity(a)) => {
                let a = ActivityName::new(a.clone());
                self.i += 1;
                Ok(a)
            }
            _ => Err(self.unexpected("an activity literal")),
        }
    }

    fn act_fragment(&mut self) -> PResult<ActRef> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Activity(a)) => {
                let r = ActRef::activity(a.clone());
                self.i += 1;
                Ok(r)
            }
            Some(TokenKind::SubprocessId(s)) => {
                let r = ActRef::subprocess(s.clone());
                self.i += 1;
                Ok(r)
            }
            _ => Err(self.unexpected("an activity literal or a subprocess id")),
        }
    }

    fn at_statement_start(&self) -> bool {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Keyword(Keyword::After | Keyword::Initially)) => true,
            Some(TokenKind::SubprocessId(_)) => {
                matches!(
                    self.tokens.get(self.i + 1).map(|t| &t.kind),
                    Some(TokenKind::Colon)
                )
            }
            _ => false,
        }
    }

    fn resync(&mut self) {
        if self.peek().is_some() {
            self.i += 1;
        }
        while self.peek().is_some() && !self.at_statement_start() {
            self.i += 1;
        }
    }

    fn description(mut self) -> Result<Description, Diagnostics> {
        let leading_text = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::LeadingText(text)) => {
                self.i += 1;
                Some(text.clone())
            }
            _ => {
                self.errors.push(Diagnostic::error(
                    "missing LEADINGTEXT: a description must open with the closed-world disclaimer \
                     ('The following textual description follows the closed-world assumption, ...')",
                    self.here(),
                ));
                None
            }
        };

        let mut initial: Option<(ActivityName, Position)> = None;
        let mut fragments = Vec::new();
        let mut closing: Option<ClosingStatement> = None;

        while self.peek().is_some() {
            if let Some(c) = &closing {
                let t = self.peek().unwrap();
                self.errors.push(Diagnostic::error(
                    format!(
                        "the closing statement (at {}) must be the last statement, found {}",
                        c.position, t.kind
                    ),
                    t.position(),
                ));
                break;
            }
            let at = self.here();
            match self.statement() {
                Some(Statement::Initial(a)) => {
                    if initial.is_some() {
                        self.errors
                            .push(Diagnostic::error("duplicate initial statement", at));
                    } else if !fragments.is_empty() {
                        self.errors.push(Diagnostic::error(
                            "the initial statement must precede all fragments",
                            at,
                        ));
                    } else {
                        initial = Some((a, at));
                    }
                }
                Some(Statement::Fragment(f)) => {
                    if initial.is_none() && fragments.is_empty() {
                        self.errors.push(Diagnostic::error(
                            "missing initial statement: expected 'Initially start \"...\"'",
                            at,
                        ));
                    }
                    fragments.push(f);
                }
                Some(Statement::Closing(c)) => closing = Some(c),
                None => {}
            }
        }

        if initial.is_none() && fragments.is_empty() {
            self.errors.push(Diagnostic::error(
                "missing initial statement: expected 'Initially start \"...\"'",
                self.eof_position(),
            ));
        }
        if fragments.is_empty() {
            let at = closing
                .as_ref()
                .map(|c| c.position)
                .unwrap_or_else(|| self.eof_position());
            self.errors.push(Diagnostic::error(
                "expected at least one fragment before the closing statement",
                at,
            ));
        }
        if closing.is_none() {
            self.errors.push(Diagnostic::error(
                "missing closing statement: expected 'After \"...\" ends, the process finishes'",
                self.eof_position(),
            ));
        }

        if !self.errors.is_empty() {
            self.errors.sort_by_key(|d| d.position());
            self.errors.dedup();
            return Err(Diagnostics(self.errors));
        }
        let (initial, initial_position) = initial.unwrap();
        Ok(Description {
            leading_text: leading_text.unwrap(),
            initial,
            fragments,
            closing: closing.unwrap(),
            initial_position,
        })
    }

    /// Parses one statement; on failure records the diagnostic, resyncs, returns None.
    fn statement(&mut self) -> Option<Statement> {
        let result = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Keyword(Keyword::Initially)) => self.initial(),
            Some(TokenKind::Keyword(Keyword::After)) => self.after_statement(),
            Some(TokenKind::SubprocessId(_)) => self.declaration(),
            Some(TokenKind::LeadingText(_)) => Err(Diagnostic::error(
                "LEADINGTEXT may only appear at the start of a description",
                self.here(),
            )),
            _ => Err(self.unexpected(
                "a statement ('Initially start', 'After ...', or a subprocess declaration)",
            )),
        };
        match result {
            Ok(s) => Some(s),
            Err(d) => {
                self.errors.push(d);
                self.resync();
                None
            }
        }
    }

    fn initial(&mut self) -> PResult<Statement> {
        self.expect_kw(Keyword::Initially)?;
        self.expect_kw(Keyword::Start)?;
        Ok(Statement::Initial(self.activity()?))
    }

    fn declaration(&mut self) -> PResult<Statement> {
        let at = self.here();
        let id = match self.next().map(|t| &t.kind) {
            Some(TokenKind::SubprocessId(s)) => SubprocessId::new(s.clone()),
            _ => unreachable!("declaration() is only entered on a subprocess id"),
        };
        match self.next().map(|t| &t.kind) {
            Some(TokenKind::Colon) => {}
            _ => {
                self.i -= 1;
                return Err(self.unexpected("':' after the subprocess id"));
            }
        }
        let mut members = vec![ActRef::Activity(self.activity()?)];
        let kind = if self.peek_kw(Keyword::And) {
            FragmentKind::AndSubprocess
        } else if self.peek_kw(Keyword::Or) {
            FragmentKind::OrSubprocess
        } else {
            return Err(self.unexpected("'and' or 'or' followed by another activity"));
        };
        let sep = if kind == FragmentKind::AndSubprocess {
            Keyword::And
        } else {
            Keyword::Or
        };
        while self.eat_kw(sep) {
            members.push(ActRef::Activity(self.activity()?));
        }
        if self.peek_kw(Keyword::And) || self.peek_kw(Keyword::Or) {
            return Err(Diagnostic::error(
                "a subprocess cannot mix 'and' and 'or'",
                self.here(),
            ));
        }
        Ok(Statement::Fragment(
            Fragment::declaration(kind, id, members).at(at),
        ))
    }

    fn after_statement(&mut self) -> PResult<Statement> {
        let at = self.here();
        let parts = self.after_parts()?;
        self.classify(parts, at)
    }

    fn after_parts(&mut self) -> PResult<AfterParts> {
        self.expect_kw(Keyword::After)?;
        let either = self.eat_kw(Keyword::Either);
        let mut sources = vec![self.act_fragment()?];
        self.expect_kw(Keyword::Ends)?;
        if either {
            self.expect_kw(Keyword::Or)?;
            sources.push(self.act_fragment()?);
            self.expect_kw(Keyword::Ends)?;
            while self.eat_kw(Keyword::Or) {
                sources.push(self.act_fragment()?);
                self.expect_kw(Keyword::Ends)?;
            }
        } else {
            while self.eat_kw(Keyword::And) {
                sources.push(self.act_fragment()?);
                self.expect_kw(Keyword::Ends)?;
            }
        }

        let tail = if self.eat_kw(Keyword::The) {
            self.expect_kw(Keyword::Process)?;
            self.expect_kw(Keyword::Finishes)?;
            Tail::Finishes
        } else if self.eat_kw(Keyword::Eventually) {
            self.expect_kw(Keyword::Start)?;
            Tail::Eventually(self.act_fragment()?)
        } else if self.eat_kw(Keyword::Immediately) {
            if self.eat_kw(Keyword::Start) {
                let mut targets = vec![self.act_fragment()?];
                while self.eat_kw(Keyword::And) {
                    self.expect_kw(Keyword::Start)?;
                    targets.push(self.act_fragment()?);
                }
                if targets.len() == 1 {
                    Tail::StartOne(targets.pop().unwrap())
                } else {
                    Tail::StartAll(targets)
                }
            } else if self.eat_kw(Keyword::Either) {
                self.expect_kw(Keyword::Start)?;
                let mut targets = vec![self.act_fragment()?];
                self.expect_kw(Keyword::Or)?;
                self.expect_kw(Keyword::Start)?;
                targets.push(self.act_fragment()?);
                while self.eat_kw(Keyword::Or) {
                    self.expect_kw(Keyword::Start)?;
                    targets.push(self.act_fragment()?);
                }
                Tail::StartEither(targets)
            } else if self.eat_kw(Keyword::Repeat) {
                self.expect_kw(Keyword::Since)?;
                let target = self.act_fragment()?;
                let mut cont = Vec::new();
                self.expect_kw(Keyword::Or)?;
                self.expect_kw(Keyword::Start)?;
                cont.push(self.act_fragment()?);
                while self.eat_kw(Keyword::Or) {
                    self.expect_kw(Keyword::Start)?;
                    cont.push(self.act_fragment()?);
                }
                Tail::RepeatSince(target, cont)
            } else {
                return Err(self.unexpected("'start', 'either' or 'repeat' after 'immediately'"));
            }
        } else {
            return Err(self
                .unexpected("'immediately', 'eventually' or 'the process finishes' after 'ends'"));
        };
        Ok(AfterParts {
            either,
            sources,
            tail,
        })
    }

    fn classify(&self, parts: AfterParts, at: Position) -> PResult<Statement> {
        use FragmentKind::*;
        let AfterParts {
            either,
            sources,
            tail,
        } = parts;
        let need_activity = |r: &ActRef, role: &str| -> PResult<()> {
            match r {
                ActRef::Activity(_) => Ok(()),
                ActRef::Subprocess(s) => Err(Diagnostic::error(
                    format!("expected an activity literal as {role}, found subprocess id ({s})"),
                    at,
                )),
            }
        };
        let any_sub = |v: &[ActRef]| v.iter().any(ActRef::is_subprocess);

        if let Tail::Finishes = tail {
            let mode = match (either, sources.len()) {
                (true, _) => ClosingMode::Disjunctive,
                (false, 1) => ClosingMode::Single,
                (false, _) => ClosingMode::Conjunctive,
            };
            let mut c = ClosingStatement::new(mode, sources);
            c.position = at;
            return Ok(Statement::Closing(c));
        }

        let multi_source = sources.len() > 1;
        let fragment = match tail {
            Tail::Finishes => unreachable!(),
            Tail::StartOne(target) if multi_source => {
                need_activity(&target, "the started activity")?;
                let kind = match (either, any_sub(&sources)) {
                    (true, false) => SimpleMerge,
                    (true, true) => AndJoinInXorJoin,
                    (false, false) => Synchronization,
                    (false, true) => XorJoinInAndJoin,
                };
                let mut args = sources;
                args.push(target);
                Fragment::new(kind, args)
            }
            Tail::StartOne(target) => {
                need_activity(&sources[0], "the ending activity")?;
                need_activity(&target, "the started activity")?;
                Fragment::new(Sequence, vec![sources[0].clone(), target])
            }
            _ if multi_source => {
                return Err(Diagnostic::error(
                    "a statement with several ending activities must be followed by \
                     'immediately start' a single activity or 'the process finishes'",
                    at,
                ));
            }
            Tail::Eventually(target) => {
                need_activity(&sources[0], "the ending activity")?;
                need_activity(&target, "the started activity")?;
                Fragment::new(Eventually, vec![sources[0].clone(), target])
            }
            Tail::StartAll(targets) => {
                need_activity(&sources[0], "the ending activity")?;
                let kind = if any_sub(&targets) {
                    XorSplitInAndSplit
                } else {
                    ParallelSplit
                };
                Fragment::new(kind, [sources, targets].concat())
            }
            Tail::StartEither(targets) => {
                need_activity(&sources[0], "the ending activity")?;
                let kind = if any_sub(&targets) {
                    AndSplitInXorSplit
                } else {
                    ExclusiveChoice
                };
                Fragment::new(kind, [sources, targets].concat())
            }
            Tail::RepeatSince(target, cont) => {
                need_activity(&sources[0], "the ending activity")?;
                need_activity(&target, "the repeated activity")?;
                for c in &cont {
                    need_activity(c, "a continuation")?;
                }
                let mut args = sources;
                args.push(target);
                args.extend(cont);
                Fragment::new(RepeatSince, args)
            }
        };
        Ok(Statement::Fragment(fragment.at(at)))
    }
}
