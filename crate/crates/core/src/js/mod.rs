//! The JavaScript front end: lexer, parser, static checks and printer.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod validate;

use thiserror::Error;

pub use ast::{Expr, ExprKind, Program, Span, Stmt, StmtKind};
pub use parser::parse_expression;
pub use printer::print_program;

#[derive(Clone, Debug, Error, PartialEq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

/// Parses and validates a program.
pub fn parse(src: &str) -> Result<Program, ParseError> {
    let program = parser::parse(src)?;
    validate::validate(&program)?;
    Ok(program)
}

/// The AST as pretty JSON, for `parse --dump-ast`.
pub fn dump_ast(program: &Program) -> String {
    serde_json::to_string_pretty(program).expect("AST serialisation cannot fail")
}
