//! Bottom-up evaluation oracle.
//!
//! The goal-directed solver is checked against an independent semantics: the
//! perfect model of a stratified ground program, computed stratum by stratum
//! as an iterated least fixpoint. Nothing here shares machinery with the
//! solver beyond the term types, which is what makes the comparison worth
//! running. The module also provides a seeded generator of random stratified
//! ground programs so the comparison can cover shapes nobody thought to
//! write by hand.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::error::{EngineError, StratifyError};
use crate::program::Program;
use crate::stratify::stratify;
use crate::term::{Atom, Rule, Substitution, Term};

#[derive(Debug, Clone, Error)]
pub enum ModelError {
    #[error(transparent)]
    Stratify(#[from] StratifyError),
    #[error("bottom-up evaluation requires a ground program; offending rule: {0}")]
    NonGround(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Computes the perfect model of a stratified ground program: process strata
/// from the bottom, running each to its least fixpoint before negation on it
/// is consulted. Ground builtin goals are evaluated through the program's
/// registry.
pub fn perfect_model(program: &Program) -> Result<BTreeSet<String>, ModelError> {
    let strata = stratify(program)?;
    for rule in program.rules() {
        let ground = rule.head.as_ref().map_or(true, Atom::is_ground)
            && rule.body.iter().all(|l| l.atom.is_ground());
        if !ground {
            return Err(ModelError::NonGround(rule.to_string()));
        }
    }

    let mut model: BTreeSet<String> = BTreeSet::new();
    for stratum in 0..strata.count.max(1) {
        loop {
            let mut changed = false;
            'rules: for rule in program.rules() {
                let Some(head) = &rule.head else { continue };
                if strata.stratum(&head.key()) != stratum {
                    continue;
                }
                let head_repr = head.to_string();
                if model.contains(&head_repr) {
                    continue;
                }
                for lit in &rule.body {
                    let key = lit.atom.key();
                    let truth = if program.builtins.contains(&key) {
                        let b = program.builtins.lookup(&key).unwrap();
                        !b.eval(&lit.atom.args, &Substitution::new())?.is_empty()
                    } else {
                        model.contains(&lit.atom.to_string())
                    };
                    if truth == lit.naf {
                        continue 'rules;
                    }
                }
                model.insert(head_repr);
                changed = true;
            }
            if !changed {
                break;
            }
        }
    }
    Ok(model)
}

// ---------------------------------------------------------------------------
// Seeded program generation
// ---------------------------------------------------------------------------

/// SplitMix64: tiny, seedable, and plenty for test-case generation.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n` (n > 0).
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// True with probability `num/den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// A randomly generated stratified ground program together with its atom
/// universe (every atom the generator could have mentioned).
pub struct GeneratedProgram {
    pub program: Program,
    pub universe: Vec<Atom>,
}

/// Generates a random ground program that is stratified by construction:
/// every predicate is assigned a stratum up front, positive body literals
/// only reference predicates at or below the head's stratum, and negated
/// literals only reference strictly lower strata.
pub fn random_stratified_program(seed: u64) -> GeneratedProgram {
    let mut rng = SplitMix64::new(seed);
    let n_preds = 4 + rng.below(6) as usize; // 4..=9
    let n_consts = 2 + rng.below(3) as usize; // 2..=4
    let consts: Vec<String> = (0..n_consts).map(|i| format!("c{i}")).collect();
    let strata: Vec<usize> = (0..n_preds).map(|_| rng.below(3) as usize).collect();

    let atom = |pred: usize, cons: usize| -> Atom {
        Atom::new(format!("p{pred}"), vec![Term::sym(consts[cons].clone())])
    };

    let mut rules = Vec::new();
    // Seed facts so lower strata have something to say.
    for pred in 0..n_preds {
        for cons in 0..n_consts {
            if rng.chance(1, 4) {
                rules.push(Rule::fact(atom(pred, cons)));
            }
        }
    }
    // Rules per predicate, bodies respecting the assigned strata.
    for pred in 0..n_preds {
        let n_rules = rng.below(3);
        for _ in 0..n_rules {
            let head = atom(pred, rng.below(n_consts as u64) as usize);
            let n_body = 1 + rng.below(3);
            let mut body = Vec::new();
            for _ in 0..n_body {
                let naf = strata[pred] > 0 && rng.chance(1, 3);
                let dep_strata: Vec<usize> = (0..n_preds)
                    .filter(|&q| {
                        if naf {
                            strata[q] < strata[pred]
                        } else {
                            strata[q] <= strata[pred]
                        }
                    })
                    .collect();
                if dep_strata.is_empty() {
                    continue;
                }
                let q = dep_strata[rng.below(dep_strata.len() as u64) as usize];
                let lit_atom = atom(q, rng.below(n_consts as u64) as usize);
                body.push(crate::term::Literal { naf, atom: lit_atom });
            }
            if body.is_empty() {
                rules.push(Rule::fact(head));
            } else {
                rules.push(Rule { head: Some(head), body, line: 0 });
            }
        }
    }

    let mut universe = Vec::new();
    for pred in 0..n_preds {
        for cons in 0..n_consts {
            universe.push(atom(pred, cons));
        }
    }
    GeneratedProgram { program: Program::with_standard_builtins(rules), universe }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_rules;

    fn model_of(src: &str) -> BTreeSet<String> {
        let program = Program::with_standard_builtins(parse_rules(src).unwrap());
        perfect_model(&program).unwrap()
    }

    #[test]
    fn stratified_negation_layers_correctly() {
        let model = model_of("a. b :- a. c :- not d. d :- b. e :- not b.");
        let expect: BTreeSet<String> =
            ["a", "b", "d"].iter().map(|s| s.to_string()).collect();
        assert_eq!(model, expect);
    }

    #[test]
    fn default_blocked_by_exception() {
        let model = model_of(
            "red_light.\n\
             blocked :- red_light.\n\
             action_ok :- not blocked.",
        );
        assert!(model.contains("red_light"));
        assert!(model.contains("blocked"));
        assert!(!model.contains("action_ok"));
    }

    #[test]
    fn positive_cycles_contribute_nothing_without_a_base() {
        let model = model_of("p :- q. q :- p. r :- not p.");
        assert!(!model.contains("p"));
        assert!(!model.contains("q"));
        assert!(model.contains("r"));
    }

    #[test]
    fn ground_builtins_are_consulted() {
        let model = model_of("ok :- 3 < 5. bad :- 5 < 3.");
        assert!(model.contains("ok"));
        assert!(!model.contains("bad"));
    }

    #[test]
    fn non_ground_programs_are_rejected() {
        let program = Program::with_standard_builtins(parse_rules("p(X) :- q(X). q(a).").unwrap());
        assert!(matches!(perfect_model(&program), Err(ModelError::NonGround(_))));
    }

    #[test]
    fn generator_is_deterministic_and_stratified() {
        for seed in 0..50 {
            let a = random_stratified_program(seed);
            let b = random_stratified_program(seed);
            let ra: Vec<String> = a.program.rules().iter().map(|r| r.to_string()).collect();
            let rb: Vec<String> = b.program.rules().iter().map(|r| r.to_string()).collect();
            assert_eq!(ra, rb, "seed {seed} not deterministic");
            assert!(
                stratify(&a.program).is_ok(),
                "seed {seed} generated an unstratified program"
            );
        }
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 of the standard SplitMix64 sequence.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220A8397B1DCDAF);
        assert_eq!(rng.next_u64(), 0x6E789E6AA1B965F4);
        assert_eq!(rng.next_u64(), 0x06C45D188009454F);
    }
}
