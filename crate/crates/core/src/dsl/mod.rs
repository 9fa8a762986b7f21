//! The exploration language: one operator call per expression, chained with
//! `.`, bound with `=`.
//!
//! ```text
//! s1 = p.pivot(:cite)
//! s7 = s4.pivot(:cite).rank(2, :citeCount[%item])[0..19]
//! s10 = s9.refine(equals(:type, Author))!
//! ```

pub mod ast;
mod lexer;
mod parser;
mod printer;

pub use ast::{Arg, Call, Expr, Loc, Script, Stmt, Term, TermOp};
pub use lexer::{lex, Tok, Token};
pub use parser::{parse_expr, parse_script};
pub use printer::{print_expr, print_script, print_stmt, print_term, quote};

use crate::error::Span;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
    /// What the parser would have accepted at `span`.
    pub expected: Vec<String>,
}
