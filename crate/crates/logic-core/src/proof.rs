//! Justification trees and their English rendering.
//!
//! A proof node either asserts that its goal holds (with the deriving fact,
//! rule instance, or builtin) or that there is no evidence for it (with
//! failure evidence gathered from each candidate rule). Rendered output is
//! the indented listing style used throughout the decision tooling:
//!
//! ```text
//! >'suggest_action' holds (for change_lane_left, and t1) because
//!  >'select_action' holds (for change_lane_left, and t1) because
//!   >'intent' holds (for merge_into_left_lane, and t1).
//!   >there is no evidence that 'neg_select_action' holds (for change_lane_left, and t1).
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::parser::is_operator_name;
use crate::term::{Atom, Literal, Rule, Term};

/// How a node's verdict was reached.
#[derive(Debug, Clone, PartialEq)]
pub enum ProofKind {
    /// Matched a stored fact.
    Fact { rule_idx: usize },
    /// Derived through a rule; `instance` is the rule under the final
    /// answer substitution, so children line up with its body literals.
    Rule { rule_idx: usize, instance: Box<Rule> },
    /// Evaluated by a registered builtin.
    Builtin,
    /// No evidence: every way of deriving the goal fails. Children are the
    /// failure evidence collected from candidate rules (possibly empty).
    Absent,
    /// Synthesized node for a policy fallback; not derived from the program.
    Fallback,
}

/// Verdict of a node, as surfaced in renderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    NoEvidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofTree {
    /// The goal, resolved under the answer substitution.
    pub atom: Atom,
    pub kind: ProofKind,
    pub children: Vec<ProofTree>,
}

impl ProofTree {
    pub fn verdict(&self) -> Verdict {
        match self.kind {
            ProofKind::Absent => Verdict::NoEvidence,
            _ => Verdict::Holds,
        }
    }

    pub fn is_builtin(&self) -> bool {
        matches!(self.kind, ProofKind::Builtin)
    }

    /// The goal as a literal: `not atom` for no-evidence nodes.
    pub fn goal(&self) -> Literal {
        match self.verdict() {
            Verdict::Holds => Literal::pos(self.atom.clone()),
            Verdict::NoEvidence => Literal::naf(self.atom.clone()),
        }
    }

    /// Total node count, for size assertions.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofTree::size).sum::<usize>()
    }
}

/// Renders one justification tree. `max_depth` limits nesting: children
/// beyond it are elided as an indented `...` line. Unbound variables are
/// shown as `Var0, Var1, ...` in order of first appearance. Output is fully
/// determined by the tree.
pub fn render_justification(tree: &ProofTree, max_depth: Option<usize>) -> String {
    let mut out = String::new();
    let mut renamer = VarRenamer::default();
    render_node(tree, 0, max_depth, &mut renamer, &mut out);
    out
}

/// Renders several trees into one listing, sharing the `VarN` numbering.
pub fn render_justification_forest(trees: &[ProofTree], max_depth: Option<usize>) -> String {
    let mut out = String::new();
    let mut renamer = VarRenamer::default();
    for tree in trees {
        render_node(tree, 0, max_depth, &mut renamer, &mut out);
    }
    out
}

/// Line appended to a decision listing when the integrity constraints of the
/// active program have no derivable violation.
pub const CONSTRAINTS_HOLD_LINE: &str = "The global constraints hold.";

#[derive(Default)]
struct VarRenamer {
    names: HashMap<String, String>,
}

impl VarRenamer {
    fn rename(&mut self, var: &str) -> String {
        if let Some(name) = self.names.get(var) {
            return name.clone();
        }
        let fresh = format!("Var{}", self.names.len());
        self.names.insert(var.to_string(), fresh.clone());
        fresh
    }

    fn term(&mut self, term: &Term) -> Term {
        match term {
            Term::Var(v) => Term::Var(self.rename(v)),
            Term::Cons(h, t) => Term::Cons(Box::new(self.term(h)), Box::new(self.term(t))),
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| self.term(a)).collect())
            }
            other => other.clone(),
        }
    }
}

fn render_node(
    node: &ProofTree,
    depth: usize,
    max_depth: Option<usize>,
    renamer: &mut VarRenamer,
    out: &mut String,
) {
    let show_children =
        !node.children.is_empty() && max_depth.map_or(true, |limit| depth < limit);

    for _ in 0..depth {
        out.push(' ');
    }
    out.push('>');
    match node.verdict() {
        Verdict::Holds => {
            let _ = write!(out, "{} holds{}", phrase_subject(&node.atom, renamer), phrase_args(&node.atom, renamer));
        }
        Verdict::NoEvidence => {
            let _ = write!(
                out,
                "there is no evidence that {} holds{}",
                phrase_subject(&node.atom, renamer),
                phrase_args(&node.atom, renamer)
            );
        }
    }
    if show_children {
        out.push_str(" because\n");
        for child in &node.children {
            render_node(child, depth + 1, max_depth, renamer, out);
        }
    } else {
        out.push_str(".\n");
        if !node.children.is_empty() {
            // Depth limit reached: mark the elision.
            for _ in 0..depth + 1 {
                out.push(' ');
            }
            out.push_str("...\n");
        }
    }
}

/// The quoted subject: the predicate name, or the whole comparison for
/// operator goals (`'8 =< 18.3'`).
fn phrase_subject(atom: &Atom, renamer: &mut VarRenamer) -> String {
    if is_operator_name(&atom.name) && atom.args.len() == 2 {
        format!(
            "'{} {} {}'",
            renamer.term(&atom.args[0]),
            atom.name,
            renamer.term(&atom.args[1])
        )
    } else {
        format!("'{}'", atom.name)
    }
}

/// `(for a)` / `(for a, and b)` / `(for a, b, and c)`; empty for zero-arg
/// goals and for operator goals (their arguments sit in the subject).
fn phrase_args(atom: &Atom, renamer: &mut VarRenamer) -> String {
    if atom.args.is_empty() || (is_operator_name(&atom.name) && atom.args.len() == 2) {
        return String::new();
    }
    let rendered: Vec<String> = atom.args.iter().map(|a| renamer.term(a).to_string()).collect();
    let joined = if rendered.len() == 1 {
        rendered[0].clone()
    } else {
        let (last, init) = rendered.split_last().unwrap();
        format!("{}, and {}", init.join(", "), last)
    };
    format!(" (for {joined})")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn fact(atom: Atom) -> ProofTree {
        ProofTree { atom, kind: ProofKind::Fact { rule_idx: 0 }, children: vec![] }
    }

    #[test]
    fn fact_line_uses_for_and_joining() {
        let tree = fact(Atom::new(
            "intent",
            vec![Term::sym("merge_into_left_lane"), Term::sym("t0")],
        ));
        assert_eq!(
            render_justification(&tree, None),
            ">'intent' holds (for merge_into_left_lane, and t0).\n"
        );
    }

    #[test]
    fn single_and_zero_arg_shapes() {
        let one = fact(Atom::new("action", vec![Term::sym("brake")]));
        assert_eq!(render_justification(&one, None), ">'action' holds (for brake).\n");
        let zero = fact(Atom::new("ready", vec![]));
        assert_eq!(render_justification(&zero, None), ">'ready' holds.\n");
    }

    #[test]
    fn three_args_join_with_commas_then_and() {
        let t = fact(Atom::new(
            "obj_distance",
            vec![Term::sym("o1"), Term::float(8.0), Term::sym("t0")],
        ));
        assert_eq!(
            render_justification(&t, None),
            ">'obj_distance' holds (for o1, 8.0, and t0).\n"
        );
    }

    #[test]
    fn absence_and_nesting() {
        let tree = ProofTree {
            atom: Atom::new("select_action", vec![Term::sym("brake"), Term::sym("t0")]),
            kind: ProofKind::Rule {
                rule_idx: 3,
                instance: Box::new(Rule::fact(Atom::new("x", vec![]))),
            },
            children: vec![
                fact(Atom::new("brake_conditions", vec![Term::sym("t0")])),
                ProofTree {
                    atom: Atom::new(
                        "neg_select_action",
                        vec![Term::sym("brake"), Term::sym("t0")],
                    ),
                    kind: ProofKind::Absent,
                    children: vec![],
                },
            ],
        };
        let text = render_justification(&tree, None);
        let expected = ">'select_action' holds (for brake, and t0) because\n \
                        >'brake_conditions' holds (for t0).\n \
                        >there is no evidence that 'neg_select_action' holds (for brake, and t0).\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn unbound_variables_render_as_var_n_in_first_appearance_order() {
        let tree = ProofTree {
            atom: Atom::new("class", vec![Term::var("Oid#3"), Term::var("C#3"), Term::sym("t0")]),
            kind: ProofKind::Absent,
            children: vec![],
        };
        assert_eq!(
            render_justification(&tree, None),
            ">there is no evidence that 'class' holds (for Var0, Var1, and t0).\n"
        );
        // Repeated variables share one name.
        let t2 = fact(Atom::new("p", vec![Term::var("X#9"), Term::var("X#9")]));
        assert_eq!(render_justification(&t2, None), ">'p' holds (for Var0, and Var0).\n");
    }

    #[test]
    fn comparison_goals_are_quoted_whole() {
        let t = fact(Atom::new("=<", vec![Term::Int(8), Term::float(18.33)]));
        assert_eq!(render_justification(&t, None), ">'8 =< 18.33' holds.\n");
    }

    #[test]
    fn max_depth_elides_with_marker() {
        let tree = ProofTree {
            atom: Atom::new("a", vec![]),
            kind: ProofKind::Rule {
                rule_idx: 0,
                instance: Box::new(Rule::fact(Atom::new("a", vec![]))),
            },
            children: vec![ProofTree {
                atom: Atom::new("b", vec![]),
                kind: ProofKind::Rule {
                    rule_idx: 1,
                    instance: Box::new(Rule::fact(Atom::new("b", vec![]))),
                },
                children: vec![fact(Atom::new("c", vec![]))],
            }],
        };
        let full = render_justification(&tree, None);
        assert!(full.contains(">'c' holds.\n"), "{full}");
        let capped = render_justification(&tree, Some(1));
        assert!(capped.contains("'b' holds.\n"), "{capped}");
        assert!(capped.contains("  ...\n"), "{capped}");
        assert!(!capped.contains("'c'"), "{capped}");
    }

    #[test]
    fn rendering_is_deterministic() {
        let tree = ProofTree {
            atom: Atom::new("suggest_action", vec![Term::sym("brake"), Term::sym("t1")]),
            kind: ProofKind::Rule {
                rule_idx: 7,
                instance: Box::new(Rule::fact(Atom::new("x", vec![]))),
            },
            children: vec![fact(Atom::new("action", vec![Term::sym("brake")]))],
        };
        let a = render_justification(&tree, None);
        let b = render_justification(&tree, None);
        assert_eq!(a, b);
    }
}
