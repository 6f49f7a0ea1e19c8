//! Per-frame decision making.

use std::time::{Duration, Instant};

use logic_core::{
    render_justification, Atom, ConstraintViolation, Literal, ProofKind, ProofTree, Solver, Term,
    CONSTRAINTS_HOLD_LINE,
};
use scene_model::{compile_frame, num_term, register_scene_builtins, LocationClass, Scenario};

use crate::action::{arbitrate, Action};
use crate::error::DecideError;
use crate::rulebase::Rulebase;

/// The outcome of deciding one frame.
#[derive(Debug, Clone)]
pub struct Decision {
    pub timestamp: u64,
    /// The arbitrated action (cruise when nothing was suggested).
    pub action: Action,
    /// Every suggested action with its proof, in vocabulary order.
    pub suggested: Vec<(Action, ProofTree)>,
    /// Proof of the chosen action; a synthesized fallback node when cruise
    /// won by default.
    pub justification: ProofTree,
    /// Derivable integrity-constraint violations for this frame.
    pub constraint_violations: Vec<ConstraintViolation>,
    /// Wall-clock time spent deciding, measured inside [`decide`].
    pub latency: Duration,
}

impl Decision {
    pub fn constraints_hold(&self) -> bool {
        self.constraint_violations.is_empty()
    }

    /// The suggested actions without their proofs.
    pub fn suggested_actions(&self) -> Vec<Action> {
        self.suggested.iter().map(|(a, _)| *a).collect()
    }

    pub fn latency_ms(&self) -> f64 {
        self.latency.as_secs_f64() * 1e3
    }

    /// The full decision listing: the chosen action's justification tree
    /// followed by the constraint verdict. Byte-identical for identical
    /// inputs.
    pub fn render_justification(&self, max_depth: Option<usize>) -> String {
        let mut out = render_justification(&self.justification, max_depth);
        if self.constraints_hold() {
            out.push_str(CONSTRAINTS_HOLD_LINE);
            out.push('\n');
        } else {
            for v in &self.constraint_violations {
                out.push_str(&v.to_string());
                out.push('\n');
            }
        }
        out
    }
}

/// Decides the frame at timestamp `t`: compiles it to facts, queries
/// `suggest_action/2` for every action in vocabulary order, arbitrates, and
/// checks the integrity constraints.
pub fn decide(rulebase: &Rulebase, scenario: &Scenario, t: u64) -> Result<Decision, DecideError> {
    let start = Instant::now();
    let facts = compile_frame(scenario, t)?;
    let frame = scenario
        .frame(t)
        .expect("compile_frame succeeded, so the frame exists");

    let mut working = rulebase.program().clone();
    for fact in facts {
        working.add_fact(fact);
    }
    // The shipped rulebase registers a default braking model; frames decide
    // under their scenario's own.
    register_scene_builtins(&mut working.builtins, scenario.braking);

    let solver = Solver::new(&working);
    let ts = Term::Int(t as i64);
    let mut suggested: Vec<(Action, ProofTree)> = Vec::new();
    for &action in Action::ALL {
        let goal = Literal::pos(Atom::new(
            "suggest_action",
            vec![Term::sym(action.as_str()), ts.clone()],
        ));
        let answer = solver
            .solve_first(std::slice::from_ref(&goal))
            .map_err(|source| DecideError::Engine {
                context: format!("suggesting {action} at frame {t}"),
                source,
            })?;
        if let Some(answer) = answer {
            let proof = answer
                .proofs
                .into_iter()
                .next()
                .expect("one goal yields one proof tree");
            suggested.push((action, proof));
        }
    }

    let action = arbitrate(&suggested.iter().map(|(a, _)| *a).collect::<Vec<_>>(), frame.intent);
    let justification = suggested
        .iter()
        .find(|(a, _)| *a == action)
        .map(|(_, proof)| proof.clone())
        .unwrap_or_else(|| ProofTree {
            atom: Atom::new("default_action", vec![Term::sym(Action::Cruise.as_str()), ts.clone()]),
            kind: ProofKind::Fallback,
            children: Vec::new(),
        });

    let constraint_violations =
        solver.check_constraints().map_err(|source| DecideError::Engine {
            context: format!("checking constraints at frame {t}"),
            source,
        })?;

    Ok(Decision {
        timestamp: t,
        action,
        suggested,
        justification,
        constraint_violations,
        latency: start.elapsed(),
    })
}

/// Decides every frame of the scenario in timestamp order.
pub fn decide_all(rulebase: &Rulebase, scenario: &Scenario) -> Result<Vec<Decision>, DecideError> {
    scenario
        .frames
        .iter()
        .map(|f| decide(rulebase, scenario, f.timestamp))
        .collect()
}

/// The effective speed limit the mitigation rules assign to `location` given
/// a posted value: the lower of the posted and reasonable speeds, or `None`
/// when an overlay marks the winning value abnormal.
pub fn effective_speed_limit(
    rulebase: &Rulebase,
    location: LocationClass,
    posted: f64,
) -> Result<Option<f64>, DecideError> {
    let mut working = rulebase.program().clone();
    working.add_fact(Atom::new(
        "posted_speed_limit",
        vec![Term::sym(location.as_str()), num_term(posted)],
    ));
    let solver = Solver::new(&working);
    let goal = Literal::pos(Atom::new(
        "max_speed",
        vec![Term::sym(location.as_str()), Term::var("S")],
    ));
    let answer = solver
        .solve_first(std::slice::from_ref(&goal))
        .map_err(|source| DecideError::Engine {
            context: format!("evaluating the {location} speed limit"),
            source,
        })?;
    Ok(answer.and_then(|a| a.binding("S").as_f64()))
}
