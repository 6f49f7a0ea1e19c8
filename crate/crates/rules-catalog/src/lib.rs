//! The driving rulebase and per-frame decision layer.
//!
//! The catalog ships as embedded rule sources (`catalog/*.rules`), split by
//! action group and wired in three layers:
//!
//! * **defaults** — `<action>_conditions/1` rules describing when an action
//!   is a candidate;
//! * **exceptions** — `neg_select_action/2` rules vetoing a candidate;
//! * **selection** — one `select_action/2` rule per action pairing the two,
//!   plus the `suggest_action/2` surface queried by [`decide`].
//!
//! Site-specific overlays are parsed after the catalog and may add defaults,
//! exceptions, or definitions for the declared [`OVERLAY_HOOKS`]
//! (`ab/1`, `neg_suggest_action/2`, `abnormal/2`). The combined program must
//! stratify, and in [`LintMode::Strict`] must pass the hygiene lint.
//!
//! [`decide`] compiles one scenario frame to facts, queries every action in
//! vocabulary order, arbitrates by fixed priority (turns, then lane changes
//! left over right, brake, accelerate, cruise as the fallback), and checks
//! the global integrity constraints. The result carries proofs: rendering a
//! [`Decision`] yields the indented justification listing ending in the
//! constraint verdict.

mod action;
mod decide;
mod error;
mod rulebase;

pub use action::{arbitrate, Action};
pub use decide::{decide, decide_all, effective_speed_limit, Decision};
pub use error::{CatalogError, DecideError};
pub use rulebase::{load_rulebase, LintMode, Rulebase, CATALOG_SOURCES, OVERLAY_HOOKS};
