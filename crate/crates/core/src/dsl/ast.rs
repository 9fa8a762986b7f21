use crate::error::Span;
use crate::model::RelationPath;
use crate::ops::Operator;

/// Source location attached to AST nodes. It never takes part in equality,
/// so `parse(print(x)) == x` compares structure only.
#[derive(Debug, Clone, Copy, Default)]
pub struct Loc(pub Span);

impl PartialEq for Loc {
    fn eq(&self, _: &Loc) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub target: Option<String>,
    pub expr: Expr,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// A bound name, `d` or `irs`.
    Source(String, Loc),
    /// `{a, b}`: items by id.
    Set(Vec<String>, Loc),
    Call(Call),
    /// `recv.op(...)`: the receiver is the first set input.
    Chain(Box<Expr>, Call),
    /// `expr!`: refine with back-propagation.
    Bang(Box<Expr>),
}

impl Expr {
    pub fn loc(&self) -> Span {
        match self {
            Expr::Source(_, l) | Expr::Set(_, l) => l.0,
            Expr::Call(c) => c.loc.0,
            Expr::Chain(r, c) => r.loc().to(c.loc.0),
            Expr::Bang(e) => e.loc(),
        }
    }

    pub fn source(name: &str) -> Expr {
        Expr::Source(name.to_string(), Loc::default())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Call {
    pub op: Operator,
    pub args: Vec<Arg>,
    /// `[from..to]`, inclusive.
    pub slice: Option<(u64, u64)>,
    pub loc: Loc,
}

impl Call {
    pub fn new(op: Operator, args: Vec<Arg>) -> Call {
        Call { op, args, slice: None, loc: Loc::default() }
    }

    pub fn set_args(&self) -> impl Iterator<Item = &Expr> {
        self.args.iter().filter_map(|a| match a {
            Arg::Set(e) => Some(e),
            _ => None,
        })
    }

    /// Positional non-set arguments, in order.
    pub fn positional(&self) -> impl Iterator<Item = &Term> {
        self.args.iter().filter_map(|a| match a {
            Arg::Term(t) => Some(t),
            _ => None,
        })
    }

    pub fn keyword(&self, name: &str) -> Option<&Term> {
        self.args.iter().find_map(|a| match a {
            Arg::Kw(k, t) if k == name => Some(t),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Set(Expr),
    Term(Term),
    Kw(String, Term),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermOp {
    Add,
    Sub,
    Mul,
}

impl TermOp {
    pub fn symbol(self) -> &'static str {
        match self {
            TermOp::Add => "+",
            TermOp::Sub => "-",
            TermOp::Mul => "*",
        }
    }
}

/// Arguments that are not sets: predicates, scores, names and numbers.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Int(i64),
    Float(f64),
    Str(String),
    ItemVar,
    Ident(String),
    Rel(RelationPath),
    /// `:r[%item]`
    Image(RelationPath),
    Apply(String, Vec<Term>),
    Neg(Box<Term>),
    Bin(TermOp, Box<Term>, Box<Term>),
    /// A reference to a session state, produced by name resolution.
    State(usize),
}

impl Term {
    /// `a-b-c` written without quotes, as an identifier with hyphens.
    pub fn hyphenated(&self) -> Option<String> {
        match self {
            Term::Ident(s) => Some(s.clone()),
            Term::Bin(TermOp::Sub, a, b) => Some(format!("{}-{}", a.hyphenated()?, b.hyphenated()?)),
            _ => None,
        }
    }
}
