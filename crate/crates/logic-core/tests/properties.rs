//! Property tests for the term layer, the stratifier, and the solver.

use proptest::prelude::*;

use logic_core::fixpoint::random_stratified_program;
use logic_core::{stratify, unify, Substitution, Term};

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        3 => prop::sample::select(vec!["a", "b", "c"]).prop_map(Term::sym),
        2 => (0..4i64).prop_map(Term::Int),
        2 => prop::sample::select(vec!["X", "Y", "Z"]).prop_map(Term::var),
        1 => Just(Term::Nil),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (prop::sample::select(vec!["f", "g"]), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(name, args)| Term::compound(name, args)),
            prop::collection::vec(inner, 0..3).prop_map(Term::list),
        ]
    })
}

proptest! {
    /// A successful unifier really does make both sides identical.
    #[test]
    fn unifier_equalizes_both_sides(a in term_strategy(), b in term_strategy()) {
        if let Some(s) = unify(&a, &b, &Substitution::new()) {
            prop_assert_eq!(s.apply(&a), s.apply(&b));
        }
    }

    /// Unifiability is symmetric.
    #[test]
    fn unification_is_symmetric(a in term_strategy(), b in term_strategy()) {
        prop_assert_eq!(
            unify(&a, &b, &Substitution::new()).is_some(),
            unify(&b, &a, &Substitution::new()).is_some()
        );
    }

    /// Applying a substitution is idempotent: chains resolve fully.
    #[test]
    fn apply_is_idempotent(a in term_strategy(), b in term_strategy(), probe in term_strategy()) {
        if let Some(s) = unify(&a, &b, &Substitution::new()) {
            let once = s.apply(&probe);
            prop_assert_eq!(s.apply(&once), once);
        }
    }

    /// Unifying a term with itself never fails and binds nothing new.
    #[test]
    fn self_unification_succeeds(a in term_strategy()) {
        let s = unify(&a, &a, &Substitution::new());
        prop_assert!(s.is_some());
        prop_assert_eq!(s.unwrap().apply(&a), a);
    }

    /// The computed stratum assignment satisfies the defining inequalities:
    /// positive dependencies never rise above their consumer, negated
    /// dependencies sit strictly below.
    #[test]
    fn strata_satisfy_dependency_inequalities(seed in 0u64..2000) {
        let generated = random_stratified_program(seed);
        let strata = stratify(&generated.program).expect("generated programs are stratified");
        for rule in generated.program.rules() {
            let Some(head) = &rule.head else { continue };
            let h = strata.stratum(&head.key());
            for lit in &rule.body {
                let key = lit.atom.key();
                if generated.program.builtins.contains(&key) {
                    continue;
                }
                let b = strata.stratum(&key);
                if lit.naf {
                    prop_assert!(b < h, "seed {}: naf dep {} not below head {}", seed, key, head.key());
                } else {
                    prop_assert!(b <= h, "seed {}: pos dep {} above head {}", seed, key, head.key());
                }
            }
        }
    }
}
