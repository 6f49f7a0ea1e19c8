//! Error types for parsing, stratification, and query evaluation.

use thiserror::Error;

/// A syntax error with the 1-based source position where it was detected.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, col, message: message.into() }
    }
}

/// Rejection of a non-stratified program: some cycle in the predicate
/// dependency graph passes through negation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("program is not stratified: negation cycle through {}", cycle.join(", "))]
pub struct StratifyError {
    /// Predicates (as `name/arity`) on the offending cycle, sorted.
    pub cycle: Vec<String>,
}

/// A runtime evaluation failure. These are errors, distinct from a goal
/// merely failing (which is a normal outcome).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineError {
    /// `not G` was reached while `G` still contained unbound variables.
    #[error("negated goal is not ground at call time: not {goal}")]
    NonGroundNaf { goal: String },

    /// A builtin was handed arguments it cannot evaluate.
    #[error("builtin {builtin}: {message}")]
    Builtin { builtin: String, message: String },

    /// Arithmetic could not be carried out (unbound operand, bad type,
    /// division by zero).
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    /// The resolution depth limit was exceeded; the derivation is almost
    /// certainly divergent in a way the loop check cannot fold.
    #[error("resolution depth limit of {limit} exceeded while solving {goal}")]
    DepthLimit { limit: usize, goal: String },
}
