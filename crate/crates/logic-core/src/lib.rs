//! A goal-directed interpreter for a stratified logic language with
//! negation-as-failure, arithmetic and host-registered builtins, integrity
//! constraints, and justification trees.
//!
//! The pieces, bottom to top:
//!
//! * [`term`] — terms, atoms, literals, rules, unification (occurs-check on).
//! * [`parser`] — text to clauses/directives, with positioned errors.
//! * [`builtins`] — the strategy registry of host-evaluated predicates;
//!   embedders register their own [`builtins::Builtin`] objects.
//! * [`stratify`] — the stratification check and stratum assignment; programs
//!   with negation cycles are rejected up front with a cycle diagnostic.
//! * [`solve`] — top-down resolution with loop checking, NAF, and proof
//!   capture.
//! * [`proof`] — justification trees and their English rendering.
//! * [`fixpoint`] — an independent bottom-up oracle plus a seeded program
//!   generator, used to cross-check the solver.
//!
//! Unknown predicates fail finitely (closed world). `not g` requires `g`
//! ground at call time. Queries against non-stratified programs are
//! undefined; run [`stratify::stratify`] first and refuse programs it
//! rejects.

pub mod builtins;
pub mod error;
pub mod fixpoint;
pub mod parser;
pub mod program;
pub mod proof;
pub mod solve;
pub mod stratify;
pub mod term;

pub use builtins::{Builtin, BuiltinRegistry};
pub use error::{EngineError, ParseError, StratifyError};
pub use parser::{parse_program, parse_query, parse_rules, Directive, Item};
pub use program::Program;
pub use proof::{
    render_justification, render_justification_forest, ProofKind, ProofTree, Verdict,
    CONSTRAINTS_HOLD_LINE,
};
pub use solve::{
    check_constraints, solve, solve_first, Answer, ConstraintViolation, Solver,
    DEFAULT_DEPTH_LIMIT,
};
pub use stratify::{stratify, Strata};
pub use term::{unify, unify_atoms, Atom, Literal, PredKey, Rule, Substitution, Term};
