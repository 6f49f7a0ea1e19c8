//! A program: an indexed rule set plus its builtin registry.

use std::collections::{BTreeSet, HashMap};

use crate::builtins::BuiltinRegistry;
use crate::term::{Atom, PredKey, Rule};

/// An indexed collection of rules, facts, and integrity constraints,
/// together with the builtins visible to queries against it.
#[derive(Debug, Clone)]
pub struct Program {
    rules: Vec<Rule>,
    index: HashMap<PredKey, Vec<usize>>,
    constraints: Vec<usize>,
    pub builtins: BuiltinRegistry,
}

impl Program {
    pub fn new(rules: Vec<Rule>, builtins: BuiltinRegistry) -> Program {
        let mut p = Program {
            rules: Vec::new(),
            index: HashMap::new(),
            constraints: Vec::new(),
            builtins,
        };
        p.add_rules(rules);
        p
    }

    /// Convenience constructor with the standard builtins registered.
    pub fn with_standard_builtins(rules: Vec<Rule>) -> Program {
        Program::new(rules, BuiltinRegistry::standard())
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, idx: usize) -> &Rule {
        &self.rules[idx]
    }

    /// Indices of rules whose head predicate is `key`, in source order.
    pub fn rules_for(&self, key: &PredKey) -> &[usize] {
        self.index.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Indices of integrity constraints, in source order.
    pub fn constraint_indices(&self) -> &[usize] {
        &self.constraints
    }

    /// Appends rules, keeping the index consistent.
    pub fn add_rules(&mut self, rules: Vec<Rule>) {
        for rule in rules {
            let idx = self.rules.len();
            match &rule.head {
                Some(head) => self.index.entry(head.key()).or_default().push(idx),
                None => self.constraints.push(idx),
            }
            self.rules.push(rule);
        }
    }

    /// Appends one ground fact.
    pub fn add_fact(&mut self, atom: Atom) {
        self.add_rules(vec![Rule::fact(atom)]);
    }

    /// Predicates defined by at least one rule or fact.
    pub fn defined_predicates(&self) -> BTreeSet<PredKey> {
        self.index.keys().cloned().collect()
    }

    /// Predicates referenced from any rule body (constraints included),
    /// builtins excluded, each paired with whether some reference is negated.
    pub fn referenced_predicates(&self) -> BTreeSet<PredKey> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            for lit in &rule.body {
                let key = lit.atom.key();
                if !self.builtins.contains(&key) {
                    out.insert(key);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_rules;

    #[test]
    fn indexing_by_name_and_arity() {
        let rules = parse_rules(
            "p(a). p(b). p(a, b).\n\
             q(X) :- p(X).\n\
             :- q(c).",
        )
        .unwrap();
        let prog = Program::with_standard_builtins(rules);
        let p1 = PredKey { name: "p".into(), arity: 1 };
        let p2 = PredKey { name: "p".into(), arity: 2 };
        assert_eq!(prog.rules_for(&p1).len(), 2);
        assert_eq!(prog.rules_for(&p2).len(), 1);
        assert_eq!(prog.constraint_indices().len(), 1);
        assert!(prog.defined_predicates().contains(&p1));
        assert!(prog.referenced_predicates().contains(&PredKey { name: "q".into(), arity: 1 }));
    }

    #[test]
    fn added_facts_are_queryable_in_order() {
        let mut prog = Program::with_standard_builtins(vec![]);
        prog.add_fact(Atom::new("self_speed", vec![crate::term::Term::Int(12), crate::term::Term::sym("t0")]));
        let key = PredKey { name: "self_speed".into(), arity: 2 };
        assert_eq!(prog.rules_for(&key).len(), 1);
    }
}
