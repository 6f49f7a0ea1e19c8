//! Stratification check and stratum assignment.
//!
//! A program is stratified when no cycle in its predicate dependency graph
//! passes through a negated edge. Stratified programs have a unique perfect
//! model, computed stratum by stratum; the goal-directed solver assumes the
//! check has passed, and the bottom-up oracle iterates strata directly.

use std::collections::{BTreeMap, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;

use crate::error::StratifyError;
use crate::program::Program;
use crate::term::PredKey;

/// Stratum assignment for every non-builtin predicate in the program.
/// Facts and positive dependencies share a stratum; negated dependencies
/// sit strictly below their consumers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strata {
    pub of: BTreeMap<PredKey, usize>,
    pub count: usize,
}

impl Strata {
    pub fn stratum(&self, key: &PredKey) -> usize {
        self.of.get(key).copied().unwrap_or(0)
    }
}

/// Checks stratifiability and assigns strata. Integrity constraints consume
/// predicates but define none, so they can never close a cycle.
pub fn stratify(program: &Program) -> Result<Strata, StratifyError> {
    let mut graph: DiGraph<PredKey, bool> = DiGraph::new();
    let mut nodes: HashMap<PredKey, NodeIndex> = HashMap::new();

    let mut node_of = |graph: &mut DiGraph<PredKey, bool>, key: &PredKey| -> NodeIndex {
        if let Some(&n) = nodes.get(key) {
            return n;
        }
        let n = graph.add_node(key.clone());
        nodes.insert(key.clone(), n);
        n
    };

    for rule in program.rules() {
        let Some(head) = &rule.head else { continue };
        let h = node_of(&mut graph, &head.key());
        for lit in &rule.body {
            let key = lit.atom.key();
            if program.builtins.contains(&key) {
                continue;
            }
            let b = node_of(&mut graph, &key);
            graph.add_edge(h, b, lit.naf);
        }
    }
    // Constraints and queries reference predicates too; include them as
    // leaf nodes so every mentioned predicate gets a stratum.
    for key in program.referenced_predicates() {
        node_of(&mut graph, &key);
    }

    // Any strongly connected component containing a negated edge between two
    // of its own members is a negation cycle.
    for scc in tarjan_scc(&graph) {
        if scc.len() == 1 {
            let n = scc[0];
            let self_naf = graph
                .edges_connecting(n, n)
                .any(|e| *e.weight());
            if !self_naf {
                continue;
            }
            return Err(StratifyError { cycle: vec![graph[n].to_string()] });
        }
        let members: std::collections::HashSet<NodeIndex> = scc.iter().copied().collect();
        let has_naf = graph.edge_references().any(|e| {
            *e.weight() && members.contains(&e.source()) && members.contains(&e.target())
        });
        if has_naf {
            let mut cycle: Vec<String> = scc.iter().map(|&n| graph[n].to_string()).collect();
            cycle.sort();
            return Err(StratifyError { cycle });
        }
    }

    // No negation cycles: the iteration below is monotone and bounded, so it
    // reaches the least fixpoint of
    //   stratum(h) = max(stratum(b) for positive deps, stratum(b)+1 for naf).
    let mut of: BTreeMap<PredKey, usize> = graph
        .node_indices()
        .map(|n| (graph[n].clone(), 0usize))
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for rule in program.rules() {
            let Some(head) = &rule.head else { continue };
            let hk = head.key();
            let mut need = of[&hk];
            for lit in &rule.body {
                let key = lit.atom.key();
                if program.builtins.contains(&key) {
                    continue;
                }
                let dep = of[&key] + usize::from(lit.naf);
                need = need.max(dep);
            }
            if need > of[&hk] {
                of.insert(hk, need);
                changed = true;
            }
        }
    }

    let count = of.values().max().map_or(0, |m| m + 1);
    Ok(Strata { of, count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_rules;

    fn program(src: &str) -> Program {
        Program::with_standard_builtins(parse_rules(src).unwrap())
    }

    fn key(name: &str, arity: usize) -> PredKey {
        PredKey { name: name.into(), arity }
    }

    #[test]
    fn positive_recursion_is_stratified() {
        let s = stratify(&program("p :- q. q :- p. q :- r. r.")).unwrap();
        assert_eq!(s.stratum(&key("p", 0)), 0);
        assert_eq!(s.stratum(&key("q", 0)), 0);
        assert_eq!(s.count, 1);
    }

    #[test]
    fn negation_raises_the_stratum() {
        let s = stratify(&program(
            "base(a).\n\
             blocked(X) :- base(X), special(X).\n\
             special(a).\n\
             ok(X) :- base(X), not blocked(X).\n\
             report(X) :- ok(X).",
        ))
        .unwrap();
        assert_eq!(s.stratum(&key("base", 1)), 0);
        assert_eq!(s.stratum(&key("blocked", 1)), 0);
        assert_eq!(s.stratum(&key("ok", 1)), 1);
        assert_eq!(s.stratum(&key("report", 1)), 1);
        assert_eq!(s.count, 2);
    }

    #[test]
    fn even_negation_loop_is_rejected_with_cycle_members() {
        let err = stratify(&program("p :- not q. q :- not p.")).unwrap_err();
        assert_eq!(err.cycle, vec!["p/0".to_string(), "q/0".to_string()]);
    }

    #[test]
    fn self_negation_is_rejected() {
        let err = stratify(&program("p :- not p.")).unwrap_err();
        assert_eq!(err.cycle, vec!["p/0".to_string()]);
    }

    #[test]
    fn negation_cycle_through_a_longer_path_is_found() {
        let err = stratify(&program("a :- b. b :- c. c :- not a. x.")).unwrap_err();
        assert_eq!(
            err.cycle,
            vec!["a/0".to_string(), "b/0".to_string(), "c/0".to_string()]
        );
    }

    #[test]
    fn naf_in_constraints_never_creates_a_cycle() {
        let s = stratify(&program("p(a). :- p(X), not q(X).")).unwrap();
        assert_eq!(s.stratum(&key("p", 1)), 0);
        assert_eq!(s.stratum(&key("q", 1)), 0);
    }

    #[test]
    fn builtins_are_not_graph_nodes() {
        let s = stratify(&program("p(X) :- q(X), X < 3. q(1).")).unwrap();
        assert!(!s.of.contains_key(&key("<", 2)));
    }

    #[test]
    fn chained_negation_builds_multiple_strata() {
        let s = stratify(&program("a. b :- not a. c :- not b. d :- c, not a.")).unwrap();
        assert_eq!(s.stratum(&key("a", 0)), 0);
        assert_eq!(s.stratum(&key("b", 0)), 1);
        assert_eq!(s.stratum(&key("c", 0)), 2);
        assert_eq!(s.stratum(&key("d", 0)), 2);
        assert_eq!(s.count, 3);
    }
}
