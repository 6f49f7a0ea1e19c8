//! Error types for loading the rulebase and running decisions.

use logic_core::{EngineError, ParseError, StratifyError};
use scene_model::SceneError;
use thiserror::Error;

/// Failure while loading or validating a rulebase.
#[derive(Debug, Error)]
pub enum CatalogError {
    /// A rule source failed to parse. `source_name` names the catalog file or
    /// overlay; line numbers in the inner error are relative to that source.
    #[error("parse error in {source_name}: {error}")]
    Parse {
        source_name: String,
        #[source]
        error: ParseError,
    },

    /// Negation in the combined program is cyclic.
    #[error(transparent)]
    Stratify(#[from] StratifyError),

    /// Strict-mode lint findings: undefined predicates, unconsumed scene
    /// facts, or malformed action heads.
    #[error("rulebase lint failed:\n{}", issues.join("\n"))]
    Lint { issues: Vec<String> },
}

/// Failure while deciding on a frame or evaluating a speed-limit query.
#[derive(Debug, Error)]
pub enum DecideError {
    /// The scenario could not produce facts for the requested frame.
    #[error(transparent)]
    Scene(#[from] SceneError),

    /// The engine faulted mid-query (builtin misuse, depth limit, ...).
    #[error("engine error while {context}: {source}")]
    Engine {
        context: String,
        #[source]
        source: EngineError,
    },
}
