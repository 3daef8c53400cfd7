//! BeePath front end: tokenizer, parser and canonical renderer.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod render;

pub use ast::{
    ActRef, ActivityName, ClosingMode, ClosingStatement, Description, Fragment, FragmentKind,
    Shape, SubprocessId,
};
pub use lexer::{tokenize, tokenize_with, Keyword, LexOptions, Token, TokenKind, LEADING_TEXT};
pub use parser::{parse, parse_source, parse_source_with, parse_statement, Statement};
pub use render::render;
