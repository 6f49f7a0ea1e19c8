//! Loading, stratifying, and linting the rulebase.

use logic_core::{parse_rules, stratify, PredKey, Program, Rule, Strata, Term};
use scene_model::{fact_schema, register_scene_builtins, BrakingModel};

use crate::action::Action;
use crate::error::CatalogError;

/// The shipped catalog sources, in load order. Order matters: it fixes rule
/// indices and therefore derivation order inside each predicate.
pub const CATALOG_SOURCES: &[(&str, &str)] = &[
    ("actions.rules", include_str!("../catalog/actions.rules")),
    ("derived.rules", include_str!("../catalog/derived.rules")),
    ("select.rules", include_str!("../catalog/select.rules")),
    ("lane_change.rules", include_str!("../catalog/lane_change.rules")),
    ("turns.rules", include_str!("../catalog/turns.rules")),
    ("brake.rules", include_str!("../catalog/brake.rules")),
    ("accelerate.rules", include_str!("../catalog/accelerate.rules")),
    ("constraints.rules", include_str!("../catalog/constraints.rules")),
];

/// Extension points the catalog references without defining. Overlays supply
/// facts or rules for these; an empty definition simply never fires.
pub const OVERLAY_HOOKS: &[(&str, usize)] = &[
    ("ab", 1),
    ("neg_suggest_action", 2),
    ("abnormal", 2),
];

/// Scene facts emitted for forward compatibility that the shipped catalog
/// deliberately does not consume yet.
const RESERVED_FACTS: &[(&str, usize)] = &[("obj_rel_speed", 3)];

/// How lint findings are treated by [`load_rulebase`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LintMode {
    /// Findings abort the load with [`CatalogError::Lint`].
    Strict,
    /// Findings are kept on the rulebase as warnings.
    Warn,
}

/// A loaded, stratified rulebase: the compiled program (with scene builtins
/// registered), its stratum assignment, and any lint warnings kept in
/// [`LintMode::Warn`].
#[derive(Debug, Clone)]
pub struct Rulebase {
    program: Program,
    strata: Strata,
    lint_warnings: Vec<String>,
}

impl Rulebase {
    /// The shipped catalog with no overlays, lint-strict.
    pub fn shipped() -> Result<Rulebase, CatalogError> {
        load_rulebase(&[], LintMode::Strict)
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn strata(&self) -> &Strata {
        &self.strata
    }

    pub fn lint_warnings(&self) -> &[String] {
        &self.lint_warnings
    }

    pub fn rule_count(&self) -> usize {
        self.program.rules().len()
    }
}

/// Loads the shipped catalog plus `overlays` (each a `(name, source)` pair,
/// appended after the catalog in order), checks stratification of the
/// combined program, and lints it. Parse-error line numbers are relative to
/// the named source.
pub fn load_rulebase(
    overlays: &[(String, String)],
    mode: LintMode,
) -> Result<Rulebase, CatalogError> {
    let mut rules: Vec<Rule> = Vec::new();
    for (name, source) in CATALOG_SOURCES {
        rules.extend(parse_source(name, source)?);
    }
    for (name, source) in overlays {
        rules.extend(parse_source(name, source)?);
    }

    let mut program = Program::with_standard_builtins(rules);
    // Register the scene builtins before stratifying and linting so both see
    // the complete registry. `decide` re-registers stopping_distance with the
    // scenario's own braking model; the key is identical, so the shape of the
    // program is unaffected.
    register_scene_builtins(&mut program.builtins, BrakingModel::default());

    let strata = stratify(&program)?;

    let issues = lint(&program);
    let lint_warnings = match mode {
        LintMode::Strict if !issues.is_empty() => {
            return Err(CatalogError::Lint { issues });
        }
        LintMode::Strict => Vec::new(),
        LintMode::Warn => issues,
    };

    Ok(Rulebase { program, strata, lint_warnings })
}

fn parse_source(name: &str, source: &str) -> Result<Vec<Rule>, CatalogError> {
    parse_rules(source).map_err(|error| CatalogError::Parse {
        source_name: name.to_string(),
        error,
    })
}

fn key_matches(key: &PredKey, table: &[(&str, usize)]) -> bool {
    table.iter().any(|(name, arity)| key.name == *name && key.arity == *arity)
}

/// Static hygiene checks over the combined program:
///
/// * every consumed predicate is defined by a rule, emitted as a scene fact,
///   evaluated as a builtin, or a declared overlay hook;
/// * every scene fact the compiler can emit is consumed somewhere (reserved
///   facts excepted);
/// * action-valued heads and `action/1` facts stay inside the vocabulary.
fn lint(program: &Program) -> Vec<String> {
    let mut issues = Vec::new();
    let defined = program.defined_predicates();
    let schema = fact_schema();

    for key in program.referenced_predicates() {
        if defined.contains(&key)
            || schema.contains(&key)
            || program.builtins.contains(&key)
            || key_matches(&key, OVERLAY_HOOKS)
        {
            continue;
        }
        issues.push(format!("predicate {key} is consumed but never defined"));
    }

    let referenced = program.referenced_predicates();
    for key in &schema {
        if referenced.contains(key) || key_matches(key, RESERVED_FACTS) {
            continue;
        }
        issues.push(format!("scene fact {key} is never consumed"));
    }

    for rule in program.rules() {
        let Some(head) = &rule.head else { continue };
        let action_position = match (head.name.as_str(), head.args.len()) {
            ("action", 1) => 0,
            ("select_action", 2)
            | ("neg_select_action", 2)
            | ("suggest_action", 2)
            | ("neg_suggest_action", 2) => 0,
            _ => continue,
        };
        match &head.args[action_position] {
            Term::Sym(s) if Action::from_symbol(s).is_some() => {}
            Term::Var(_) => {}
            other => issues.push(format!(
                "head {head} names {other}, which is not a driving action"
            )),
        }
    }

    issues
}
