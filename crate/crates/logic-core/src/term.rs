//! Terms, literals, rules, and substitutions.

use std::collections::HashMap;
use std::fmt;

/// A first-order term. Variable names begin with an uppercase letter or `_`;
/// symbols begin lowercase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Sym(String),
    Int(i64),
    /// Decimal, compared bitwise for term identity.
    Float(OrderedF64),
    /// Empty list `[]`.
    Nil,
    /// List cell `[Head | Tail]`.
    Cons(Box<Term>, Box<Term>),
    Compound(String, Vec<Term>),
}

/// f64 wrapper with total equality on the bit pattern, so terms can be
/// hashed and compared structurally. NaN never enters through the parser.
#[derive(Debug, Clone, Copy, PartialOrd)]
pub struct OrderedF64(pub f64);

impl PartialEq for OrderedF64 {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}
impl Eq for OrderedF64 {}
impl std::hash::Hash for OrderedF64 {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn sym(name: impl Into<String>) -> Term {
        Term::Sym(name.into())
    }

    pub fn float(value: f64) -> Term {
        Term::Float(OrderedF64(value))
    }

    pub fn compound(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Compound(name.into(), args)
    }

    /// Builds a proper list from the given elements.
    pub fn list(items: Vec<Term>) -> Term {
        let mut tail = Term::Nil;
        for item in items.into_iter().rev() {
            tail = Term::Cons(Box::new(item), Box::new(tail));
        }
        tail
    }

    /// Splits a list term into its elements, returning `None` when the term
    /// is not a proper list (unbound or non-list tail).
    pub fn as_list(&self) -> Option<Vec<&Term>> {
        let mut items = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Term::Nil => return Some(items),
                Term::Cons(head, tail) => {
                    items.push(head.as_ref());
                    cur = tail.as_ref();
                }
                _ => return None,
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Sym(_) | Term::Int(_) | Term::Float(_) | Term::Nil => true,
            Term::Cons(h, t) => h.is_ground() && t.is_ground(),
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Collects variable names in first-appearance order.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(name) => {
                if !out.iter().any(|v| v == name) {
                    out.push(name.clone());
                }
            }
            Term::Cons(h, t) => {
                h.collect_vars(out);
                t.collect_vars(out);
            }
            Term::Compound(_, args) => {
                for arg in args {
                    arg.collect_vars(out);
                }
            }
            _ => {}
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Term::Int(i) => Some(*i as f64),
            Term::Float(f) => Some(f.0),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) => write!(f, "{name}"),
            Term::Sym(name) => write!(f, "{name}"),
            Term::Int(i) => write!(f, "{i}"),
            Term::Float(v) => {
                // Keep a decimal point so decimals stay distinct from integers.
                if v.0.fract() == 0.0 && v.0.is_finite() && v.0.abs() < 1e15 {
                    write!(f, "{:.1}", v.0)
                } else {
                    write!(f, "{}", v.0)
                }
            }
            Term::Nil => write!(f, "[]"),
            Term::Cons(_, _) => {
                write!(f, "[")?;
                let mut cur = self;
                let mut first = true;
                loop {
                    match cur {
                        Term::Cons(h, t) => {
                            if !first {
                                write!(f, ", ")?;
                            }
                            write!(f, "{h}")?;
                            first = false;
                            cur = t;
                        }
                        Term::Nil => break,
                        other => {
                            write!(f, " | {other}")?;
                            break;
                        }
                    }
                }
                write!(f, "]")
            }
            Term::Compound(name, args) => {
                // Arithmetic operators print infix so rendered goals stay readable.
                if args.len() == 2 && matches!(name.as_str(), "+" | "-" | "*" | "/") {
                    return write!(f, "({} {} {})", args[0], name, args[1]);
                }
                write!(f, "{name}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A predicate applied to argument terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(name: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom { name: name.into(), args }
    }

    pub fn key(&self) -> PredKey {
        PredKey { name: self.name.clone(), arity: self.args.len() }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        for arg in &self.args {
            arg.collect_vars(out);
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}(", self.name)?;
            for (i, arg) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{arg}")?;
            }
            write!(f, ")")
        }
    }
}

/// Predicate name plus arity; uniquely identifies a predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredKey {
    pub name: String,
    pub arity: usize,
}

impl fmt::Display for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A body literal: an atom, either positive or under negation-as-failure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub naf: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { naf: false, atom }
    }

    pub fn naf(atom: Atom) -> Literal {
        Literal { naf: true, atom }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.naf {
            write!(f, "not {}", self.atom)
        } else {
            write!(f, "{}", self.atom)
        }
    }
}

/// A clause: a fact (empty body), a rule, or an integrity constraint
/// (no head, nonempty body).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    /// `None` marks an integrity constraint.
    pub head: Option<Atom>,
    pub body: Vec<Literal>,
    /// 1-based source line of the clause, 0 for synthesized rules.
    pub line: usize,
}

impl Rule {
    pub fn fact(head: Atom) -> Rule {
        Rule { head: Some(head), body: Vec::new(), line: 0 }
    }

    pub fn is_fact(&self) -> bool {
        self.head.is_some() && self.body.is_empty()
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_none()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.head, self.body.is_empty()) {
            (Some(h), true) => write!(f, "{h}."),
            (Some(h), false) => {
                write!(f, "{h} :- ")?;
                write_body(f, &self.body)?;
                write!(f, ".")
            }
            (None, _) => {
                write!(f, ":- ")?;
                write_body(f, &self.body)?;
                write!(f, ".")
            }
        }
    }
}

fn write_body(f: &mut fmt::Formatter<'_>, body: &[Literal]) -> fmt::Result {
    for (i, lit) in body.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{lit}")?;
    }
    Ok(())
}

/// A binding of variables to terms. Bindings are triangular: a bound term
/// may itself contain bound variables, and `apply` resolves chains fully,
/// which makes application idempotent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Substitution {
    bindings: HashMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    fn insert(&mut self, var: String, term: Term) {
        self.bindings.insert(var, term);
    }

    /// Records a binding directly, without unification. Crate-internal:
    /// used for variable renaming, where freshness is guaranteed.
    pub(crate) fn bind(&mut self, var: String, term: Term) {
        self.bindings.insert(var, term);
    }

    /// Follows variable bindings one level at a time until reaching a
    /// non-variable term or an unbound variable.
    pub fn walk<'a>(&'a self, term: &'a Term) -> &'a Term {
        let mut cur = term;
        while let Term::Var(name) = cur {
            match self.bindings.get(name) {
                Some(next) => cur = next,
                None => break,
            }
        }
        cur
    }

    /// Fully resolves a term under this substitution.
    pub fn apply(&self, term: &Term) -> Term {
        let walked = self.walk(term);
        match walked {
            Term::Var(_) | Term::Sym(_) | Term::Int(_) | Term::Float(_) | Term::Nil => {
                walked.clone()
            }
            Term::Cons(h, t) => Term::Cons(Box::new(self.apply(h)), Box::new(self.apply(t))),
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    pub fn apply_atom(&self, atom: &Atom) -> Atom {
        Atom {
            name: atom.name.clone(),
            args: atom.args.iter().map(|a| self.apply(a)).collect(),
        }
    }

    pub fn apply_literal(&self, lit: &Literal) -> Literal {
        Literal { naf: lit.naf, atom: self.apply_atom(&lit.atom) }
    }

    fn occurs(&self, var: &str, term: &Term) -> bool {
        match self.walk(term) {
            Term::Var(name) => name == var,
            Term::Cons(h, t) => self.occurs(var, h) || self.occurs(var, t),
            Term::Compound(_, args) => args.iter().any(|a| self.occurs(var, a)),
            _ => false,
        }
    }
}

/// Computes the most general unifier of `a` and `b` extending `subst`,
/// with the occurs-check enabled. Failure is a normal outcome.
pub fn unify(a: &Term, b: &Term, subst: &Substitution) -> Option<Substitution> {
    let mut out = subst.clone();
    if unify_in(a, b, &mut out) {
        Some(out)
    } else {
        None
    }
}

pub(crate) fn unify_in(a: &Term, b: &Term, subst: &mut Substitution) -> bool {
    let a = subst.walk(a).clone();
    let b = subst.walk(b).clone();
    match (a, b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if subst.occurs(&x, &t) {
                return false;
            }
            subst.insert(x, t);
            true
        }
        (Term::Sym(x), Term::Sym(y)) => x == y,
        (Term::Int(x), Term::Int(y)) => x == y,
        (Term::Float(x), Term::Float(y)) => x == y,
        (Term::Nil, Term::Nil) => true,
        (Term::Cons(h1, t1), Term::Cons(h2, t2)) => {
            unify_in(&h1, &h2, subst) && unify_in(&t1, &t2, subst)
        }
        (Term::Compound(n1, a1), Term::Compound(n2, a2)) => {
            n1 == n2
                && a1.len() == a2.len()
                && a1.iter().zip(a2.iter()).all(|(x, y)| unify_in(x, y, subst))
        }
        _ => false,
    }
}

/// Unifies two atoms (same predicate, parallel arguments).
pub fn unify_atoms(a: &Atom, b: &Atom, subst: &Substitution) -> Option<Substitution> {
    if a.name != b.name || a.args.len() != b.args.len() {
        return None;
    }
    let mut out = subst.clone();
    for (x, y) in a.args.iter().zip(b.args.iter()) {
        if !unify_in(x, y, &mut out) {
            return None;
        }
    }
    Some(out)
}
