//! Lexer and recursive-descent parser for the rule language.
//!
//! Grammar sketch:
//!
//! ```text
//! program    := item*
//! item       := '#' sym '(' exprs? ')' '.'          directive
//!             | atom ( ':-' disjunction )? '.'      fact or rule
//!             | ':-' disjunction '.'                integrity constraint
//! disjunction:= conjunction ( ';' conjunction )*    desugars to one rule each
//! conjunction:= literal ( ',' literal )*
//! literal    := 'not'? ( expr cmp expr | atom )
//! expr       := mul ( ('+'|'-') mul )*
//! mul        := primary ( ('*'|'/') primary )*
//! primary    := number | '-' number | var | sym ( '(' exprs ')' )?
//!             | list | '(' expr ')'
//! ```
//!
//! `%` starts a comment running to end of line. A `.` directly followed by a
//! digit continues a decimal literal; otherwise it terminates the clause.

use crate::error::ParseError;
use crate::term::{Atom, Literal, Rule, Term};

/// A non-clause item: `#name(args).` Scenario files use these for
/// per-file configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Directive {
    pub name: String,
    pub args: Vec<Term>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Clause(Rule),
    Directive(Directive),
}

/// Parses a full source file into clauses and directives.
pub fn parse_program(src: &str) -> Result<Vec<Item>, ParseError> {
    Parser::new(src)?.program()
}

/// Parses a source file that must contain only clauses (no directives).
pub fn parse_rules(src: &str) -> Result<Vec<Rule>, ParseError> {
    let items = parse_program(src)?;
    let mut rules = Vec::with_capacity(items.len());
    for item in items {
        match item {
            Item::Clause(rule) => rules.push(rule),
            Item::Directive(d) => {
                return Err(ParseError::new(
                    d.line,
                    1,
                    format!("directive #{} is not allowed here", d.name),
                ))
            }
        }
    }
    Ok(rules)
}

/// Parses a query: a conjunction of literals, with an optional trailing dot.
pub fn parse_query(src: &str) -> Result<Vec<Literal>, ParseError> {
    let mut p = Parser::new(src)?;
    let lits = p.conjunction()?;
    if p.peek().kind == Tok::Dot {
        p.advance();
    }
    p.expect_eof()?;
    Ok(lits)
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Sym(String),
    Var(String),
    Int(i64),
    Float(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Bar,
    Semi,
    If, // :-
    Not,
    Hash,
    Plus,
    Minus,
    Star,
    Slash,
    Le, // =<
    Lt, // <
    Ge, // >=
    Gt, // >
    Eq, // =
    Ne, // \=
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Var(v) => format!("variable '{v}'"),
            Tok::Int(i) => format!("'{i}'"),
            Tok::Float(f) => format!("'{f}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Dot => "'.'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Semi => "';'".into(),
            Tok::If => "':-'".into(),
            Tok::Not => "'not'".into(),
            Tok::Hash => "'#'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Le => "'=<'".into(),
            Tok::Lt => "'<'".into(),
            Tok::Ge => "'>='".into(),
            Tok::Gt => "'>'".into(),
            Tok::Eq => "'='".into(),
            Tok::Ne => "'\\='".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! push {
        ($kind:expr, $l:expr, $c:expr) => {
            tokens.push(Token { kind: $kind, line: $l, col: $c })
        };
    }

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                push!(Tok::LParen, tl, tc);
                i += 1;
                col += 1;
            }
            ')' => {
                push!(Tok::RParen, tl, tc);
                i += 1;
                col += 1;
            }
            '[' => {
                push!(Tok::LBracket, tl, tc);
                i += 1;
                col += 1;
            }
            ']' => {
                push!(Tok::RBracket, tl, tc);
                i += 1;
                col += 1;
            }
            ',' => {
                push!(Tok::Comma, tl, tc);
                i += 1;
                col += 1;
            }
            '|' => {
                push!(Tok::Bar, tl, tc);
                i += 1;
                col += 1;
            }
            ';' => {
                push!(Tok::Semi, tl, tc);
                i += 1;
                col += 1;
            }
            '#' => {
                push!(Tok::Hash, tl, tc);
                i += 1;
                col += 1;
            }
            '+' => {
                push!(Tok::Plus, tl, tc);
                i += 1;
                col += 1;
            }
            '-' => {
                push!(Tok::Minus, tl, tc);
                i += 1;
                col += 1;
            }
            '*' => {
                push!(Tok::Star, tl, tc);
                i += 1;
                col += 1;
            }
            '/' => {
                push!(Tok::Slash, tl, tc);
                i += 1;
                col += 1;
            }
            '.' => {
                push!(Tok::Dot, tl, tc);
                i += 1;
                col += 1;
            }
            ':' => {
                if i + 1 < chars.len() && chars[i + 1] == '-' {
                    push!(Tok::If, tl, tc);
                    i += 2;
                    col += 2;
                } else {
                    return Err(ParseError::new(tl, tc, "expected '-' after ':'"));
                }
            }
            '=' => {
                if i + 1 < chars.len() && chars[i + 1] == '<' {
                    push!(Tok::Le, tl, tc);
                    i += 2;
                    col += 2;
                } else {
                    push!(Tok::Eq, tl, tc);
                    i += 1;
                    col += 1;
                }
            }
            '>' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    push!(Tok::Ge, tl, tc);
                    i += 2;
                    col += 2;
                } else {
                    push!(Tok::Gt, tl, tc);
                    i += 1;
                    col += 1;
                }
            }
            '<' => {
                push!(Tok::Lt, tl, tc);
                i += 1;
                col += 1;
            }
            '\\' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    push!(Tok::Ne, tl, tc);
                    i += 2;
                    col += 2;
                } else {
                    return Err(ParseError::new(tl, tc, "expected '=' after '\\'"));
                }
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let mut is_float = false;
                // A dot continues the number only when a digit follows it;
                // otherwise it is the clause terminator.
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    is_float = true;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                if is_float {
                    let v: f64 = text
                        .parse()
                        .map_err(|_| ParseError::new(tl, tc, format!("bad number '{text}'")))?;
                    push!(Tok::Float(v), tl, tc);
                } else {
                    let v: i64 = text.parse().map_err(|_| {
                        ParseError::new(tl, tc, format!("integer '{text}' out of range"))
                    })?;
                    push!(Tok::Int(v), tl, tc);
                }
            }
            'a'..='z' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                if text == "not" {
                    push!(Tok::Not, tl, tc);
                } else {
                    push!(Tok::Sym(text), tl, tc);
                }
            }
            'A'..='Z' | '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                push!(Tok::Var(text), tl, tc);
            }
            other => {
                return Err(ParseError::new(tl, tc, format!("unexpected character '{other}'")));
            }
        }
    }
    tokens.push(Token { kind: Tok::Eof, line, col });
    Ok(tokens)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Counter for `_` placeholders; each occurrence gets a distinct name.
    anon: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { tokens: lex(src)?, pos: 0, anon: 0 })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: Tok, what: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            let t = self.peek();
            Err(ParseError::new(
                t.line,
                t.col,
                format!("expected {what}, found {}", t.kind.describe()),
            ))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if self.peek().kind == Tok::Eof {
            Ok(())
        } else {
            let t = self.peek();
            Err(ParseError::new(
                t.line,
                t.col,
                format!("expected end of input, found {}", t.kind.describe()),
            ))
        }
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::new(t.line, t.col, message)
    }

    fn program(&mut self) -> Result<Vec<Item>, ParseError> {
        let mut items = Vec::new();
        while self.peek().kind != Tok::Eof {
            if self.peek().kind == Tok::Hash {
                items.push(Item::Directive(self.directive()?));
            } else {
                for rule in self.clause()? {
                    items.push(Item::Clause(rule));
                }
            }
        }
        Ok(items)
    }

    fn directive(&mut self) -> Result<Directive, ParseError> {
        let hash = self.expect(Tok::Hash, "'#'")?;
        let name = match self.advance() {
            Token { kind: Tok::Sym(s), .. } => s,
            t => {
                return Err(ParseError::new(
                    t.line,
                    t.col,
                    format!("expected directive name, found {}", t.kind.describe()),
                ))
            }
        };
        self.expect(Tok::LParen, "'('")?;
        let mut args = Vec::new();
        if self.peek().kind != Tok::RParen {
            args.push(self.expr()?);
            while self.peek().kind == Tok::Comma {
                self.advance();
                args.push(self.expr()?);
            }
        }
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Dot, "'.'")?;
        Ok(Directive { name, args, line: hash.line })
    }

    /// Parses one clause; `;` in the body yields one rule per disjunct.
    fn clause(&mut self) -> Result<Vec<Rule>, ParseError> {
        let line = self.peek().line;
        if self.peek().kind == Tok::If {
            // Integrity constraint.
            self.advance();
            let disjuncts = self.disjunction()?;
            self.expect(Tok::Dot, "'.'")?;
            return Ok(disjuncts
                .into_iter()
                .map(|body| Rule { head: None, body, line })
                .collect());
        }
        if self.peek().kind == Tok::Not {
            return Err(self.err_here("'not' cannot appear in a clause head"));
        }
        let head = self.head_atom()?;
        match self.peek().kind {
            Tok::Dot => {
                self.advance();
                Ok(vec![Rule { head: Some(head), body: Vec::new(), line }])
            }
            Tok::If => {
                self.advance();
                let disjuncts = self.disjunction()?;
                self.expect(Tok::Dot, "'.'")?;
                Ok(disjuncts
                    .into_iter()
                    .map(|body| Rule { head: Some(head.clone()), body, line })
                    .collect())
            }
            _ => Err(self.err_here(format!(
                "expected '.' or ':-' after clause head, found {}",
                self.peek().kind.describe()
            ))),
        }
    }

    fn head_atom(&mut self) -> Result<Atom, ParseError> {
        let t = self.peek().clone();
        let term = self.expr()?;
        match term {
            Term::Sym(name) => Ok(Atom::new(name, vec![])),
            Term::Compound(name, args) => {
                if is_operator_name(&name) {
                    Err(ParseError::new(t.line, t.col, "a clause head must be a predicate"))
                } else {
                    Ok(Atom::new(name, args))
                }
            }
            _ => Err(ParseError::new(t.line, t.col, "a clause head must be a predicate")),
        }
    }

    fn disjunction(&mut self) -> Result<Vec<Vec<Literal>>, ParseError> {
        let mut out = vec![self.conjunction()?];
        while self.peek().kind == Tok::Semi {
            self.advance();
            out.push(self.conjunction()?);
        }
        Ok(out)
    }

    fn conjunction(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut lits = vec![self.literal()?];
        while self.peek().kind == Tok::Comma {
            self.advance();
            lits.push(self.literal()?);
        }
        Ok(lits)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        if self.peek().kind == Tok::Not {
            self.advance();
            let atom = self.body_atom()?;
            return Ok(Literal::naf(atom));
        }
        let atom = self.body_atom()?;
        Ok(Literal::pos(atom))
    }

    /// An atom position in a body: a predicate call, or an infix comparison
    /// over two expressions (which becomes an atom named after the operator).
    fn body_atom(&mut self) -> Result<Atom, ParseError> {
        let start = self.peek().clone();
        let lhs = self.expr()?;
        let cmp = match self.peek().kind {
            Tok::Le => Some("=<"),
            Tok::Lt => Some("<"),
            Tok::Ge => Some(">="),
            Tok::Gt => Some(">"),
            Tok::Eq => Some("="),
            Tok::Ne => Some("\\="),
            _ => None,
        };
        if let Some(op) = cmp {
            self.advance();
            let rhs = self.expr()?;
            return Ok(Atom::new(op, vec![lhs, rhs]));
        }
        match lhs {
            Term::Sym(name) => Ok(Atom::new(name, vec![])),
            Term::Compound(name, args) if !is_operator_name(&name) => Ok(Atom::new(name, args)),
            _ => Err(ParseError::new(
                start.line,
                start.col,
                "expected a predicate call or comparison",
            )),
        }
    }

    // Expression parsing: + and - bind looser than * and /.

    fn expr(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.mul()?;
        loop {
            let op = match self.peek().kind {
                Tok::Plus => "+",
                Tok::Minus => "-",
                _ => break,
            };
            self.advance();
            let rhs = self.mul()?;
            lhs = Term::Compound(op.to_string(), vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn mul(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.primary()?;
        loop {
            let op = match self.peek().kind {
                Tok::Star => "*",
                Tok::Slash => "/",
                _ => break,
            };
            self.advance();
            let rhs = self.primary()?;
            lhs = Term::Compound(op.to_string(), vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        let t = self.advance();
        match t.kind {
            Tok::Int(i) => Ok(Term::Int(i)),
            Tok::Float(f) => Ok(Term::float(f)),
            Tok::Minus => match self.advance() {
                Token { kind: Tok::Int(i), .. } => Ok(Term::Int(-i)),
                Token { kind: Tok::Float(f), .. } => Ok(Term::float(-f)),
                u => Err(ParseError::new(
                    u.line,
                    u.col,
                    format!("expected a number after '-', found {}", u.kind.describe()),
                )),
            },
            Tok::Var(name) => {
                if name == "_" {
                    self.anon += 1;
                    Ok(Term::Var(format!("_G{}", self.anon)))
                } else {
                    Ok(Term::Var(name))
                }
            }
            Tok::Sym(name) => {
                if self.peek().kind == Tok::LParen {
                    self.advance();
                    let mut args = vec![self.expr()?];
                    while self.peek().kind == Tok::Comma {
                        self.advance();
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Term::Compound(name, args))
                } else {
                    Ok(Term::Sym(name))
                }
            }
            Tok::LBracket => self.list_tail(),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            kind => Err(ParseError::new(
                t.line,
                t.col,
                format!("expected a term, found {}", kind.describe()),
            )),
        }
    }

    /// Parses the remainder of a list after `[`.
    fn list_tail(&mut self) -> Result<Term, ParseError> {
        if self.peek().kind == Tok::RBracket {
            self.advance();
            return Ok(Term::Nil);
        }
        let mut items = vec![self.expr()?];
        while self.peek().kind == Tok::Comma {
            self.advance();
            items.push(self.expr()?);
        }
        let tail = if self.peek().kind == Tok::Bar {
            self.advance();
            self.expr()?
        } else {
            Term::Nil
        };
        self.expect(Tok::RBracket, "']'")?;
        let mut out = tail;
        for item in items.into_iter().rev() {
            out = Term::Cons(Box::new(item), Box::new(out));
        }
        Ok(out)
    }
}

pub(crate) fn is_operator_name(name: &str) -> bool {
    matches!(name, "+" | "-" | "*" | "/" | "=<" | "<" | ">=" | ">" | "=" | "\\=")
}
