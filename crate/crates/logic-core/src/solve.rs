//! Goal-directed resolution with negation-as-failure and proof capture.
//!
//! The solver answers queries top-down, left to right, trying rules in
//! source order. Three mechanisms keep it total on stratified programs:
//!
//! * **Positive loop check** — a call identical (under the current bindings)
//!   to one of its own ancestors is failed, which matches least-model
//!   semantics: such a derivation can never ground out.
//! * **Negation-as-failure** — `not g` requires `g` ground, then runs a
//!   fresh sub-search; the literal holds exactly when that search finitely
//!   fails. Stratification guarantees the sub-search cannot re-enter the
//!   suspended ancestor goals, so it starts with an empty ancestor path.
//! * **Depth limit** — derivations that grow terms forever (so the loop
//!   check never fires) are cut off with [`EngineError::DepthLimit`].
//!
//! Every solution carries proof trees; successful `not` literals carry
//! failure evidence gathered by re-walking each candidate rule to its first
//! failing body literal.

use std::cell::Cell;
use std::fmt;

use crate::error::EngineError;
use crate::program::Program;
use crate::proof::{ProofKind, ProofTree};
use crate::term::{unify_atoms, Atom, Literal, Rule, Substitution, Term};

/// Ancestor chain cap; hitting it is an error, not a failure.
pub const DEFAULT_DEPTH_LIMIT: usize = 2000;

/// One solution to a query: the bindings plus one proof tree per goal
/// literal.
#[derive(Debug, Clone)]
pub struct Answer {
    pub subst: Substitution,
    pub proofs: Vec<ProofTree>,
}

impl Answer {
    /// The binding of a query variable (the variable itself if unbound).
    pub fn binding(&self, var: &str) -> Term {
        self.subst.apply(&Term::var(var))
    }
}

/// A derivable integrity-constraint body, reported with the constraint's
/// source line and the instantiated body that witnesses the violation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintViolation {
    pub line: usize,
    pub body: Vec<Literal>,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "constraint at line {} violated: :- ", self.line)?;
        for (i, lit) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ".")
    }
}

/// Query evaluator over one program. Cheap to construct; holds no state
/// besides a counter for variable renaming.
pub struct Solver<'p> {
    program: &'p Program,
    depth_limit: usize,
    counter: Cell<usize>,
}

/// Stack-allocated chain of ancestor goals for the loop check.
struct PathNode<'a> {
    atom: &'a Atom,
    parent: Option<&'a PathNode<'a>>,
}

impl<'p> Solver<'p> {
    pub fn new(program: &'p Program) -> Solver<'p> {
        Solver::with_depth_limit(program, DEFAULT_DEPTH_LIMIT)
    }

    pub fn with_depth_limit(program: &'p Program, depth_limit: usize) -> Solver<'p> {
        Solver { program, depth_limit, counter: Cell::new(0) }
    }

    /// All answers, in derivation order (rule order, then left-to-right).
    pub fn solve(&self, goals: &[Literal]) -> Result<Vec<Answer>, EngineError> {
        self.solve_max(goals, usize::MAX)
    }

    /// Up to `max` answers.
    pub fn solve_max(&self, goals: &[Literal], max: usize) -> Result<Vec<Answer>, EngineError> {
        if max == 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        self.solve_seq(goals, &Substitution::new(), None, 0, max, &mut out)?;
        Ok(out
            .into_iter()
            .map(|(subst, proofs)| Answer { subst, proofs })
            .collect())
    }

    /// The first answer, if any.
    pub fn solve_first(&self, goals: &[Literal]) -> Result<Option<Answer>, EngineError> {
        Ok(self.solve_max(goals, 1)?.into_iter().next())
    }

    /// Evaluates every integrity constraint; a satisfiable body is a
    /// violation.
    pub fn check_constraints(&self) -> Result<Vec<ConstraintViolation>, EngineError> {
        let mut violations = Vec::new();
        for &idx in self.program.constraint_indices() {
            let rule = self.rename(self.program.rule(idx));
            let mut sols = Vec::new();
            self.solve_seq(&rule.body, &Substitution::new(), None, 0, 1, &mut sols)?;
            if let Some((s, _)) = sols.into_iter().next() {
                violations.push(ConstraintViolation {
                    line: self.program.rule(idx).line,
                    body: rule.body.iter().map(|l| s.apply_literal(l)).collect(),
                });
            }
        }
        Ok(violations)
    }

    // -- internals ----------------------------------------------------------

    /// Solves a conjunction, appending up to `max` total entries to `out`.
    fn solve_seq(
        &self,
        lits: &[Literal],
        subst: &Substitution,
        path: Option<&PathNode<'_>>,
        depth: usize,
        max: usize,
        out: &mut Vec<(Substitution, Vec<ProofTree>)>,
    ) -> Result<(), EngineError> {
        if out.len() >= max {
            return Ok(());
        }
        let Some((first, rest)) = lits.split_first() else {
            out.push((subst.clone(), Vec::new()));
            return Ok(());
        };

        if first.naf {
            let goal = subst.apply_atom(&first.atom);
            if !goal.is_ground() {
                return Err(EngineError::NonGroundNaf { goal: goal.to_string() });
            }
            let mut probe = Vec::new();
            self.solve_atom(&goal, subst, None, depth + 1, 1, &mut probe)?;
            if !probe.is_empty() {
                return Ok(()); // inner goal holds, so the naf literal fails
            }
            let evidence = self.witness_absent(&goal, subst, None, depth + 1)?;
            let mut tails = Vec::new();
            self.solve_seq(rest, subst, path, depth, max.saturating_sub(out.len()), &mut tails)?;
            for (s2, mut proofs) in tails {
                if out.len() >= max {
                    break;
                }
                proofs.insert(0, evidence.clone());
                out.push((s2, proofs));
            }
            return Ok(());
        }

        let mut firsts = Vec::new();
        self.solve_atom(&first.atom, subst, path, depth, usize::MAX, &mut firsts)?;
        for (s1, proof) in firsts {
            if out.len() >= max {
                break;
            }
            let mut tails = Vec::new();
            self.solve_seq(rest, &s1, path, depth, max.saturating_sub(out.len()), &mut tails)?;
            for (s2, mut proofs) in tails {
                if out.len() >= max {
                    break;
                }
                // Later literals may have refined bindings the earlier proof
                // was built without; settle it under the final substitution.
                proofs.insert(0, reapply(&s2, &proof));
                out.push((s2, proofs));
            }
        }
        Ok(())
    }

    /// Solves one positive goal, appending `(solution, proof)` pairs.
    fn solve_atom(
        &self,
        goal: &Atom,
        subst: &Substitution,
        path: Option<&PathNode<'_>>,
        depth: usize,
        max: usize,
        out: &mut Vec<(Substitution, ProofTree)>,
    ) -> Result<(), EngineError> {
        if out.len() >= max {
            return Ok(());
        }
        if depth > self.depth_limit {
            return Err(EngineError::DepthLimit {
                limit: self.depth_limit,
                goal: subst.apply_atom(goal).to_string(),
            });
        }
        let resolved = subst.apply_atom(goal);
        let key = resolved.key();

        if let Some(builtin) = self.program.builtins.lookup(&key) {
            for s2 in builtin.eval(&resolved.args, subst)? {
                if out.len() >= max {
                    break;
                }
                let shown = s2.apply_atom(&resolved);
                out.push((s2, ProofTree { atom: shown, kind: ProofKind::Builtin, children: vec![] }));
            }
            return Ok(());
        }

        // A call identical to an ancestor cannot contribute solutions the
        // ancestor would not already produce; fail this branch finitely.
        let mut ancestor = path;
        while let Some(node) = ancestor {
            if subst.apply_atom(node.atom) == resolved {
                return Ok(());
            }
            ancestor = node.parent;
        }
        let node = PathNode { atom: &resolved, parent: path };

        for &ridx in self.program.rules_for(&key) {
            if out.len() >= max {
                break;
            }
            let rule = self.rename(self.program.rule(ridx));
            let head = rule.head.as_ref().expect("indexed rules have heads");
            let Some(s1) = unify_atoms(&resolved, head, subst) else { continue };
            if rule.body.is_empty() {
                let shown = s1.apply_atom(&resolved);
                out.push((
                    s1,
                    ProofTree { atom: shown, kind: ProofKind::Fact { rule_idx: ridx }, children: vec![] },
                ));
                continue;
            }
            let mut bodies = Vec::new();
            self.solve_seq(
                &rule.body,
                &s1,
                Some(&node),
                depth + 1,
                max.saturating_sub(out.len()),
                &mut bodies,
            )?;
            for (s2, children) in bodies {
                let shown = s2.apply_atom(&resolved);
                let instance = Rule {
                    head: Some(shown.clone()),
                    body: rule.body.iter().map(|l| s2.apply_literal(l)).collect(),
                    line: self.program.rule(ridx).line,
                };
                out.push((
                    s2,
                    ProofTree {
                        atom: shown,
                        kind: ProofKind::Rule { rule_idx: ridx, instance: Box::new(instance) },
                        children,
                    },
                ));
            }
        }
        Ok(())
    }

    /// Builds failure evidence for a goal known to finitely fail: for each
    /// candidate rule whose head unifies, walk the body greedily (first
    /// solution per literal) up to the first literal that fails, recording
    /// the successful prefix and the failing literal's own evidence.
    fn witness_absent(
        &self,
        goal: &Atom,
        subst: &Substitution,
        wpath: Option<&PathNode<'_>>,
        depth: usize,
    ) -> Result<ProofTree, EngineError> {
        let resolved = subst.apply_atom(goal);
        let absent = |children| ProofTree { atom: resolved.clone(), kind: ProofKind::Absent, children };
        if depth > self.depth_limit {
            return Err(EngineError::DepthLimit {
                limit: self.depth_limit,
                goal: resolved.to_string(),
            });
        }
        // Builtins fail opaquely; the goal itself is the whole story.
        if self.program.builtins.contains(&resolved.key()) {
            return Ok(absent(Vec::new()));
        }
        // An atom already being witnessed higher up adds nothing new.
        let mut ancestor = wpath;
        while let Some(n) = ancestor {
            if subst.apply_atom(n.atom) == resolved {
                return Ok(absent(Vec::new()));
            }
            ancestor = n.parent;
        }
        let node = PathNode { atom: &resolved, parent: wpath };

        let mut children = Vec::new();
        for &ridx in self.program.rules_for(&resolved.key()) {
            let rule = self.rename(self.program.rule(ridx));
            let head = rule.head.as_ref().expect("indexed rules have heads");
            let Some(mut s) = unify_atoms(&resolved, head, subst) else { continue };
            let mut blocked = false;
            for lit in &rule.body {
                if lit.naf {
                    let inner = s.apply_atom(&lit.atom);
                    if !inner.is_ground() {
                        return Err(EngineError::NonGroundNaf { goal: inner.to_string() });
                    }
                    let mut probe = Vec::new();
                    self.solve_atom(&inner, &s, None, depth + 1, 1, &mut probe)?;
                    match probe.into_iter().next() {
                        Some((_, proof)) => {
                            // The inner goal holds, blocking this rule.
                            children.push(proof);
                            blocked = true;
                            break;
                        }
                        None => {
                            children.push(self.witness_absent(&inner, &s, Some(&node), depth + 1)?);
                        }
                    }
                } else {
                    let mut sols = Vec::new();
                    self.solve_atom(&lit.atom, &s, None, depth + 1, 1, &mut sols)?;
                    match sols.into_iter().next() {
                        Some((s2, proof)) => {
                            children.push(proof);
                            s = s2;
                        }
                        None => {
                            let failed = s.apply_atom(&lit.atom);
                            children.push(self.witness_absent(&failed, &s, Some(&node), depth + 1)?);
                            blocked = true;
                            break;
                        }
                    }
                }
            }
            debug_assert!(
                blocked || rule.body.is_empty() || !children.is_empty(),
                "witness walk completed the body of {resolved}, which contradicts its failure"
            );
        }
        Ok(absent(children))
    }

    /// Renames a rule's variables apart from everything seen so far. The
    /// `#` separator cannot appear in source-level variable names, so
    /// renamed variables can never collide with user variables.
    fn rename(&self, rule: &Rule) -> Rule {
        let mut vars = Vec::new();
        if let Some(h) = &rule.head {
            h.collect_vars(&mut vars);
        }
        for lit in &rule.body {
            lit.atom.collect_vars(&mut vars);
        }
        if vars.is_empty() {
            return rule.clone();
        }
        let n = self.counter.get();
        self.counter.set(n + 1);
        let mut map = Substitution::new();
        for v in &vars {
            map.bind(v.clone(), Term::Var(format!("{v}#{n}")));
        }
        Rule {
            head: rule.head.as_ref().map(|h| map.apply_atom(h)),
            body: rule.body.iter().map(|l| map.apply_literal(l)).collect(),
            line: rule.line,
        }
    }
}

/// Re-applies a (later, extended) substitution across a finished proof.
fn reapply(s: &Substitution, tree: &ProofTree) -> ProofTree {
    let kind = match &tree.kind {
        ProofKind::Rule { rule_idx, instance } => ProofKind::Rule {
            rule_idx: *rule_idx,
            instance: Box::new(Rule {
                head: instance.head.as_ref().map(|h| s.apply_atom(h)),
                body: instance.body.iter().map(|l| s.apply_literal(l)).collect(),
                line: instance.line,
            }),
        },
        other => other.clone(),
    };
    ProofTree {
        atom: s.apply_atom(&tree.atom),
        kind,
        children: tree.children.iter().map(|c| reapply(s, c)).collect(),
    }
}

/// Solves with a fresh [`Solver`] at the default depth limit.
pub fn solve(program: &Program, goals: &[Literal]) -> Result<Vec<Answer>, EngineError> {
    Solver::new(program).solve(goals)
}

/// First answer with a fresh [`Solver`].
pub fn solve_first(program: &Program, goals: &[Literal]) -> Result<Option<Answer>, EngineError> {
    Solver::new(program).solve_first(goals)
}

/// Constraint check with a fresh [`Solver`].
pub fn check_constraints(program: &Program) -> Result<Vec<ConstraintViolation>, EngineError> {
    Solver::new(program).check_constraints()
}
