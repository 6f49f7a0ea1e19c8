//! Differential testing: the goal-directed solver must agree with the
//! independent bottom-up fixpoint oracle on every atom of every randomly
//! generated stratified ground program.

use std::collections::BTreeSet;

use logic_core::fixpoint::{perfect_model, random_stratified_program};
use logic_core::{render_justification, solve, solve_first, Atom, Literal, Term};

const SEEDS: u64 = 300;

#[test]
fn solver_matches_fixpoint_oracle_on_ground_queries() {
    for seed in 0..SEEDS {
        let generated = random_stratified_program(seed);
        let model = perfect_model(&generated.program)
            .unwrap_or_else(|e| panic!("seed {seed}: oracle failed: {e}"));
        for atom in &generated.universe {
            let goal = [Literal::pos(atom.clone())];
            let derived = solve_first(&generated.program, &goal)
                .unwrap_or_else(|e| panic!("seed {seed}: solver error on {atom}: {e}"))
                .is_some();
            let in_model = model.contains(&atom.to_string());
            assert_eq!(
                derived, in_model,
                "seed {seed}: solver and oracle disagree on {atom} \
                 (solver: {derived}, oracle: {in_model})"
            );
        }
    }
}

#[test]
fn solver_enumeration_matches_oracle_extension() {
    for seed in 0..SEEDS {
        let generated = random_stratified_program(seed);
        let model = perfect_model(&generated.program).unwrap();
        let preds: BTreeSet<(String, usize)> = generated
            .universe
            .iter()
            .map(|a| (a.name.clone(), a.args.len()))
            .collect();
        for (name, arity) in preds {
            assert_eq!(arity, 1, "generator emits unary atoms");
            let goal = [Literal::pos(Atom::new(name.clone(), vec![Term::var("X")]))];
            let answers = solve(&generated.program, &goal)
                .unwrap_or_else(|e| panic!("seed {seed}: solver error on {name}(X): {e}"));
            let derived: BTreeSet<String> = answers
                .iter()
                .map(|a| Atom::new(name.clone(), vec![a.binding("X")]).to_string())
                .collect();
            let expected: BTreeSet<String> = generated
                .universe
                .iter()
                .filter(|a| a.name == name)
                .map(|a| a.to_string())
                .filter(|repr| model.contains(repr))
                .collect();
            assert_eq!(
                derived, expected,
                "seed {seed}: enumeration of {name}(X) diverges from the oracle"
            );
        }
    }
}

#[test]
fn proofs_on_generated_programs_render_deterministically() {
    for seed in 0..50 {
        let generated = random_stratified_program(seed);
        for atom in &generated.universe {
            let goal = [Literal::pos(atom.clone())];
            let Some(first) = solve_first(&generated.program, &goal).unwrap() else {
                continue;
            };
            let again = solve_first(&generated.program, &goal).unwrap().unwrap();
            let r1 = render_justification(&first.proofs[0], None);
            let r2 = render_justification(&again.proofs[0], None);
            assert_eq!(r1, r2, "seed {seed}: rendering of {atom} not reproducible");
            assert_eq!(
                r1.lines().count(),
                first.proofs[0].size(),
                "seed {seed}: one line per proof node for {atom}"
            );
        }
    }
}
