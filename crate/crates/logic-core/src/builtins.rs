//! Host-evaluated predicates.
//!
//! Each builtin is a strategy object behind the [`Builtin`] trait, registered
//! under its name and arity in a [`BuiltinRegistry`]. The solver dispatches
//! any goal whose predicate key is registered to the corresponding object
//! instead of resolving against rules, so embedders can extend the language
//! (geometry, vehicle models, ...) without touching the engine.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::EngineError;
use crate::term::{unify, PredKey, Substitution, Term};

/// A host-evaluated predicate. `eval` receives the goal's arguments fully
/// resolved under the current substitution, plus the substitution itself for
/// builtins that bind variables. It returns one substitution per solution
/// (empty vector = the goal fails), or an error for misuse that no amount of
/// backtracking can repair.
pub trait Builtin: Send + Sync {
    fn name(&self) -> &str;
    fn arity(&self) -> usize;
    fn eval(&self, args: &[Term], subst: &Substitution) -> Result<Vec<Substitution>, EngineError>;
}

/// Name/arity-keyed table of builtin strategies.
#[derive(Clone, Default)]
pub struct BuiltinRegistry {
    table: HashMap<PredKey, Arc<dyn Builtin>>,
}

impl BuiltinRegistry {
    /// An empty registry with no builtins at all.
    pub fn empty() -> BuiltinRegistry {
        BuiltinRegistry::default()
    }

    /// The standard registry: comparisons, unification, arithmetic, lists.
    pub fn standard() -> BuiltinRegistry {
        let mut reg = BuiltinRegistry::default();
        for op in ["=<", "<", ">=", ">"] {
            reg.register(Arc::new(Compare { op }));
        }
        reg.register(Arc::new(UnifyTerms));
        reg.register(Arc::new(NotUnifiable));
        reg.register(Arc::new(EvalExpr));
        reg.register(Arc::new(Minimum));
        reg.register(Arc::new(Member));
        reg
    }

    /// Registers a builtin, replacing any previous entry with the same key.
    pub fn register(&mut self, builtin: Arc<dyn Builtin>) {
        let key = PredKey { name: builtin.name().to_string(), arity: builtin.arity() };
        self.table.insert(key, builtin);
    }

    pub fn lookup(&self, key: &PredKey) -> Option<&Arc<dyn Builtin>> {
        self.table.get(key)
    }

    pub fn contains(&self, key: &PredKey) -> bool {
        self.table.contains_key(key)
    }

    pub fn keys(&self) -> Vec<PredKey> {
        let mut keys: Vec<PredKey> = self.table.keys().cloned().collect();
        keys.sort();
        keys
    }
}

impl fmt::Debug for BuiltinRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BuiltinRegistry{:?}", self.keys())
    }
}

// ---------------------------------------------------------------------------
// Arithmetic evaluation
// ---------------------------------------------------------------------------

/// A numeric value: integer arithmetic stays integral until division or a
/// decimal operand forces a float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Num {
    Int(i64),
    Float(f64),
}

impl Num {
    pub fn as_f64(self) -> f64 {
        match self {
            Num::Int(i) => i as f64,
            Num::Float(f) => f,
        }
    }

    pub fn to_term(self) -> Term {
        match self {
            Num::Int(i) => Term::Int(i),
            Num::Float(f) => Term::float(f),
        }
    }
}

/// Evaluates an arithmetic expression term: numbers, and `+ - * /` compounds
/// over evaluable operands. Unbound variables and non-numeric leaves are
/// errors, not failures.
pub fn eval_arith(term: &Term) -> Result<Num, EngineError> {
    match term {
        Term::Int(i) => Ok(Num::Int(*i)),
        Term::Float(f) => Ok(Num::Float(f.0)),
        Term::Var(name) => Err(EngineError::Arithmetic(format!(
            "unbound variable {name} in expression"
        ))),
        Term::Compound(op, args) if args.len() == 2 => {
            let lhs = eval_arith(&args[0])?;
            let rhs = eval_arith(&args[1])?;
            match op.as_str() {
                "+" => Ok(num_binop(lhs, rhs, |a, b| a.checked_add(b), |a, b| a + b, "+")?),
                "-" => Ok(num_binop(lhs, rhs, |a, b| a.checked_sub(b), |a, b| a - b, "-")?),
                "*" => Ok(num_binop(lhs, rhs, |a, b| a.checked_mul(b), |a, b| a * b, "*")?),
                "/" => {
                    let d = rhs.as_f64();
                    if d == 0.0 {
                        Err(EngineError::Arithmetic("division by zero".into()))
                    } else {
                        Ok(Num::Float(lhs.as_f64() / d))
                    }
                }
                _ => Err(EngineError::Arithmetic(format!(
                    "cannot evaluate {term} as an expression"
                ))),
            }
        }
        _ => Err(EngineError::Arithmetic(format!(
            "cannot evaluate {term} as an expression"
        ))),
    }
}

fn num_binop(
    lhs: Num,
    rhs: Num,
    int_op: impl Fn(i64, i64) -> Option<i64>,
    float_op: impl Fn(f64, f64) -> f64,
    name: &str,
) -> Result<Num, EngineError> {
    match (lhs, rhs) {
        (Num::Int(a), Num::Int(b)) => int_op(a, b).map(Num::Int).ok_or_else(|| {
            EngineError::Arithmetic(format!("integer overflow in {a} {name} {b}"))
        }),
        _ => Ok(Num::Float(float_op(lhs.as_f64(), rhs.as_f64()))),
    }
}

// ---------------------------------------------------------------------------
// Standard builtins
// ---------------------------------------------------------------------------

/// Numeric comparison. Both operands are evaluated as expressions, so bound
/// variables and inline arithmetic both work.
struct Compare {
    op: &'static str,
}

impl Builtin for Compare {
    fn name(&self) -> &str {
        self.op
    }

    fn arity(&self) -> usize {
        2
    }

    fn eval(&self, args: &[Term], subst: &Substitution) -> Result<Vec<Substitution>, EngineError> {
        let lhs = eval_arith(&args[0])?.as_f64();
        let rhs = eval_arith(&args[1])?.as_f64();
        let holds = match self.op {
            "=<" => lhs <= rhs,
            "<" => lhs < rhs,
            ">=" => lhs >= rhs,
            ">" => lhs > rhs,
            _ => unreachable!("unknown comparison {}", self.op),
        };
        Ok(if holds { vec![subst.clone()] } else { vec![] })
    }
}

/// `=`/2: succeeds when the two terms unify, binding as needed.
struct UnifyTerms;

impl Builtin for UnifyTerms {
    fn name(&self) -> &str {
        "="
    }

    fn arity(&self) -> usize {
        2
    }

    fn eval(&self, args: &[Term], subst: &Substitution) -> Result<Vec<Substitution>, EngineError> {
        Ok(match unify(&args[0], &args[1], subst) {
            Some(s) => vec![s],
            None => vec![],
        })
    }
}

/// `\=`/2: succeeds exactly when `=`/2 fails; never binds anything.
struct NotUnifiable;

impl Builtin for NotUnifiable {
    fn name(&self) -> &str {
        "\\="
    }

    fn arity(&self) -> usize {
        2
    }

    fn eval(&self, args: &[Term], subst: &Substitution) -> Result<Vec<Substitution>, EngineError> {
        Ok(if unify(&args[0], &args[1], subst).is_none() {
            vec![subst.clone()]
        } else {
            vec![]
        })
    }
}

/// `eval`/2: evaluates the first argument and unifies the value with the
/// second.
struct EvalExpr;

impl Builtin for EvalExpr {
    fn name(&self) -> &str {
        "eval"
    }

    fn arity(&self) -> usize {
        2
    }

    fn eval(&self, args: &[Term], subst: &Substitution) -> Result<Vec<Substitution>, EngineError> {
        let value = eval_arith(&args[0])?.to_term();
        Ok(match unify(&value, &args[1], subst) {
            Some(s) => vec![s],
            None => vec![],
        })
    }
}

/// `minimum`/3: binds the third argument to the smaller of the first two.
/// Ties keep the first operand, preserving its representation.
struct Minimum;

impl Builtin for Minimum {
    fn name(&self) -> &str {
        "minimum"
    }

    fn arity(&self) -> usize {
        3
    }

    fn eval(&self, args: &[Term], subst: &Substitution) -> Result<Vec<Substitution>, EngineError> {
        let a = eval_arith(&args[0])?;
        let b = eval_arith(&args[1])?;
        let min = if a.as_f64() <= b.as_f64() { a } else { b };
        Ok(match unify(&min.to_term(), &args[2], subst) {
            Some(s) => vec![s],
            None => vec![],
        })
    }
}

/// `member`/2: enumerates elements of a proper list, unifying each with the
/// first argument. A non-list second argument is an error.
struct Member;

impl Builtin for Member {
    fn name(&self) -> &str {
        "member"
    }

    fn arity(&self) -> usize {
        2
    }

    fn eval(&self, args: &[Term], subst: &Substitution) -> Result<Vec<Substitution>, EngineError> {
        let items = args[1].as_list().ok_or_else(|| EngineError::Builtin {
            builtin: "member/2".into(),
            message: format!("second argument must be a list, got {}", args[1]),
        })?;
        let mut out = Vec::new();
        for item in items {
            if let Some(s) = unify(&args[0], item, subst) {
                out.push(s);
            }
        }
        Ok(out)
    }
}
