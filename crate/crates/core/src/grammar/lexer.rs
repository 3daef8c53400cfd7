//! Tokenizer for BeePath source text.
//!
//! Spaces, tabs, newlines, periods and commas outside activity literals are
//! skipped. The closed-world disclaimer at the top of a description is lexed as
//! a single [`TokenKind::LeadingText`] token.

use std::fmt;

use super::ast::is_word_char;
use crate::diagnostic::{Diagnostic, Diagnostics, Position};

/// The closed-world disclaimer every description must open with.
pub const LEADING_TEXT: &str = "The following textual description follows the closed-world \
assumption, meaning that only the activities specified can be executed in the specified order. \
Any possible activity and execution that is not specified is considered impossible";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    After,
    Ends,
    Immediately,
    Start,
    Either,
    Or,
    And,
    Repeat,
    Since,
    Eventually,
    Initially,
    The,
    Process,
    Finishes,
}

impl Keyword {
    fn from_word(w: &str) -> Option<Self> {
        use Keyword::*;
        Some(match w {
            "After" => After,
            "ends" => Ends,
            "immediately" => Immediately,
            "start" => Start,
            "either" => Either,
            "or" => Or,
            "and" => And,
            "repeat" => Repeat,
            "since" => Since,
            "eventually" => Eventually,
            "Initially" => Initially,
            "the" => The,
            "process" => Process,
            "finishes" => Finishes,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        use Keyword::*;
        match self {
            After => "After",
            Ends => "ends",
            Immediately => "immediately",
            Start => "start",
            Either => "either",
            Or => "or",
            And => "and",
            Repeat => "repeat",
            Since => "since",
            Eventually => "eventually",
            Initially => "Initially",
            The => "the",
            Process => "process",
            Finishes => "finishes",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    /// Activity text without quotes.
    Activity(String),
    /// Subprocess id without parentheses.
    SubprocessId(String),
    LeadingText(String),
    Colon,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => write!(f, "'{}'", k.as_str()),
            TokenKind::Activity(a) => write!(f, "activity \"{a}\""),
            TokenKind::SubprocessId(s) => write!(f, "subprocess id ({s})"),
            TokenKind::LeadingText(_) => f.write_str("LEADINGTEXT"),
            TokenKind::Colon => f.write_str("':'"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn position(&self) -> Position {
        Position::new(self.line, self.column)
    }

    pub fn is_keyword(&self, k: Keyword) -> bool {
        self.kind == TokenKind::Keyword(k)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LexOptions {
    /// Accept any first line ending in "impossible" as the leading text.
    pub lenient_leading_text: bool,
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, Diagnostics> {
    tokenize_with(source, LexOptions::default())
}

pub fn tokenize_with(source: &str, opts: LexOptions) -> Result<Vec<Token>, Diagnostics> {
    Lexer::new(source, opts).run()
}

struct Lexer {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
    opts: LexOptions,
    tokens: Vec<Token>,
    errors: Vec<Diagnostic>,
}

impl Lexer {
    fn new(src: &str, opts: LexOptions) -> Self {
        Self {
            chars: src.chars().collect(),
            i: 0,
            line: 1,
            col: 1,
            opts,
            tokens: Vec::new(),
            errors: Vec::new(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.i + off).copied()
    }

    fn pos(&self) -> Position {
        Position::new(self.line, self.col)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        match c {
            '\n' => {
                self.line += 1;
                self.col = 1;
            }
            '\r' if self.peek() != Some('\n') => {
                self.line += 1;
                self.col = 1;
            }
            '\r' => {}
            _ => self.col += 1,
        }
        Some(c)
    }

    fn push(&mut self, kind: TokenKind, lexeme: String, at: Position) {
        self.tokens.push(Token {
            kind,
            lexeme,
            line: at.line,
            column: at.column,
        });
    }

    fn run(mut self) -> Result<Vec<Token>, Diagnostics> {
        if self.opts.lenient_leading_text {
            self.lenient_leading_text();
        }
        while let Some(c) = self.peek() {
            match c {
                ' ' | '\t' | '.' | ',' | '\n' | '\r' => {
                    self.bump();
                }
                '"' => self.activity(),
                '(' => self.subprocess_id(),
                ':' => {
                    let at = self.pos();
                    self.bump();
                    self.push(TokenKind::Colon, ":".into(), at);
                }
                c if is_word_char(c) => self.word(),
                other => {
                    let at = self.pos();
                    self.bump();
                    self.errors.push(Diagnostic::error(
                        format!("unexpected character {other:?}"),
                        at,
                    ));
                }
            }
        }
        if self.errors.is_empty() {
            Ok(self.tokens)
        } else {
            Err(Diagnostics(self.errors))
        }
    }

    fn read_word(&mut self) -> String {
        let mut w = String::new();
        while let Some(c) = self.peek().filter(|c| is_word_char(*c)) {
            w.push(c);
            self.bump();
        }
        w
    }

    fn word(&mut self) {
        let at = self.pos();
        if self.tokens.is_empty() && self.rest_starts_with_word("The") {
            self.strict_leading_text();
            return;
        }
        let w = self.read_word();
        match Keyword::from_word(&w) {
            Some(k) => self.push(TokenKind::Keyword(k), w, at),
            None => self
                .errors
                .push(Diagnostic::error(format!("unexpected word '{w}'"), at)),
        }
    }

    fn rest_starts_with_word(&self, w: &str) -> bool {
        let n = w.chars().count();
        self.chars[self.i..].iter().take(n).copied().eq(w.chars())
            && !self.peek_at(n).is_some_and(is_word_char)
    }

    /// Matches the disclaimer word by word; any run of whitespace between words is accepted.
    fn strict_leading_text(&mut self) {
        let at = self.pos();
        let start = self.i;
        for (k, expected) in LEADING_TEXT.split(' ').enumerate() {
            if k > 0 {
                let mut saw_space = false;
                while matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r')) {
                    self.bump();
                    saw_space = true;
                }
                if !saw_space {
                    self.leading_text_mismatch(at, expected);
                    return;
                }
            }
            let got: String = self.chars[self.i..]
                .iter()
                .take_while(|c| !c.is_whitespace())
                .collect();
            // The final word may carry the sentence's terminal period.
            let matched = got == expected || (expected == "impossible" && got == "impossible.");
            if !matched {
                self.leading_text_mismatch(at, expected);
                return;
            }
            for _ in 0..expected.chars().count() {
                self.bump();
            }
        }
        let text: String = self.chars[start..self.i].iter().collect();
        self.push(TokenKind::LeadingText(LEADING_TEXT.to_string()), text, at);
    }

    fn leading_text_mismatch(&mut self, at: Position, expected: &str) {
        let here = self.pos();
        self.errors.push(Diagnostic::error(
            format!("malformed LEADINGTEXT: expected '{expected}' (the closed-world disclaimer starting at {at})"),
            here,
        ));
        // Skip the rest of the line so lexing can continue.
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }

    fn lenient_leading_text(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r')) {
            self.bump();
        }
        let at = self.pos();
        let line: String = self.chars[self.i..]
            .iter()
            .take_while(|c| **c != '\n')
            .collect();
        let trimmed = line.trim_end().trim_end_matches('.').trim_end();
        if trimmed.ends_with("impossible") {
            for _ in 0..line.chars().count() {
                self.bump();
            }
            self.push(TokenKind::LeadingText(trimmed.to_string()), line, at);
        }
    }

    fn activity(&mut self) {
        let at = self.pos();
        self.bump(); // opening quote
        let mut text = String::new();
        let mut bad = false;
        loop {
            match self.peek() {
                None | Some('\n') | Some('\r') => {
                    self.errors
                        .push(Diagnostic::error("unterminated activity literal", at));
                    return;
                }
                Some('"') => {
                    self.bump();
                    break;
                }
                Some(c) if is_word_char(c) || c == ' ' => {
                    text.push(c);
                    self.bump();
                }
                Some(c) => {
                    self.errors.push(Diagnostic::error(
                        format!("character {c:?} is not allowed in an activity literal"),
                        self.pos(),
                    ));
                    bad = true;
                    self.bump();
                }
            }
        }
        if bad {
            return;
        }
        if text.is_empty() {
            self.errors
                .push(Diagnostic::error("empty activity literal", at));
        } else if !super::ast::is_activity_text(&text) {
            self.errors.push(Diagnostic::error(
                "malformed activity literal: words must be separated by single spaces",
                at,
            ));
        } else {
            let lexeme = format!("\"{text}\"");
            self.push(TokenKind::Activity(text), lexeme, at);
        }
    }

    fn subprocess_id(&mut self) {
        let at = self.pos();
        self.bump(); // (
        let id = self.read_word();
        if id.is_empty() || self.peek() != Some(')') {
            self.errors.push(Diagnostic::error(
                "malformed subprocess id: expected '(' WORD ')'",
                at,
            ));
            return;
        }
        self.bump();
        let lexeme = format!("({id})");
        self.push(TokenKind::SubprocessId(id), lexeme, at);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn sequence_statement_skips_punctuation() {
        use Keyword::*;
        assert_eq!(
            kinds(r#"After "A" ends, immediately start "B"."#),
            vec![
                TokenKind::Keyword(After),
                TokenKind::Activity("A".into()),
                TokenKind::Keyword(Ends),
                TokenKind::Keyword(Immediately),
                TokenKind::Keyword(Start),
                TokenKind::Activity("B".into()),
            ]
        );
    }

    #[test]
    fn empty_input_is_empty() {
        assert!(tokenize("").unwrap().is_empty());
    }

    #[test]
    fn unterminated_literal_reports_quote_position() {
        let err = tokenize(r#"After "A"#).unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(
            err.0[0].to_string(),
            "error: unterminated activity literal at 1:7"
        );
    }

    #[test]
    fn foreign_character_in_literal() {
        let err = tokenize("After \"caf\u{e9}\" ends").unwrap_err();
        assert_eq!((err.0[0].line, err.0[0].column), (1, 11));
    }

    #[test]
    fn double_space_in_literal_is_rejected() {
        assert!(tokenize(r#""a  b""#).is_err());
        assert!(tokenize(r#"" a""#).is_err());
        assert!(tokenize(r#""""#).is_err());
    }

    #[test]
    fn keywords_are_case_sensitive() {
        let err = tokenize(r#"after "A" ends"#).unwrap_err();
        assert!(err.0[0].message.contains("unexpected word 'after'"));
    }

    #[test]
    fn subprocess_ids_and_colon() {
        assert_eq!(
            kinds(r#"(s1): "A" and "B""#),
            vec![
                TokenKind::SubprocessId("s1".into()),
                TokenKind::Colon,
                TokenKind::Activity("A".into()),
                TokenKind::Keyword(Keyword::And),
                TokenKind::Activity("B".into()),
            ]
        );
        assert!(tokenize("(a b)").is_err());
    }

    #[test]
    fn leading_text_tolerates_reflowed_whitespace() {
        let reflowed = LEADING_TEXT.replace(" Any ", "\n  Any ") + ".";
        let toks = tokenize(&reflowed).unwrap();
        assert_eq!(toks.len(), 1);
        assert!(matches!(toks[0].kind, TokenKind::LeadingText(_)));
    }

    #[test]
    fn truncated_leading_text_is_an_error() {
        let err = tokenize("The following textual description is short.").unwrap_err();
        assert!(err.0[0].message.contains("LEADINGTEXT"));
    }

    #[test]
    fn lenient_leading_text_accepts_any_impossible_line() {
        let src = "Everything unspecified is impossible.\nInitially start \"A\".";
        assert!(tokenize(src).is_err());
        let toks = tokenize_with(
            src,
            LexOptions {
                lenient_leading_text: true,
            },
        )
        .unwrap();
        assert!(matches!(toks[0].kind, TokenKind::LeadingText(_)));
        assert_eq!(toks[1].line, 2);
    }

    #[test]
    fn crlf_line_counting() {
        let toks = tokenize("After\r\n\"A\"").unwrap();
        assert_eq!((toks[1].line, toks[1].column), (2, 1));
    }
}
