use std::fmt;
use std::sync::Arc;

use crate::dsl::{parse_expr, Expr};
use crate::error::Result;
use crate::ops::Operator;

/// An expression with everything but its set inputs erased.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Skeleton {
    /// Any source set.
    S0,
    /// The input of the enclosing branch.
    Irs,
    Op { op: Operator, bang: bool, children: Vec<Arc<Skeleton>> },
}

impl Skeleton {
    pub fn op(op: Operator, children: Vec<Skeleton>) -> Skeleton {
        Skeleton::Op { op, bang: false, children: children.into_iter().map(Arc::new).collect() }
    }

    pub fn banged(self) -> Skeleton {
        match self {
            Skeleton::Op { op, children, .. } => Skeleton::Op { op, bang: true, children },
            leaf => leaf,
        }
    }

    /// Operator nesting depth; leaves are 0.
    pub fn depth(&self) -> usize {
        match self {
            Skeleton::Op { children, .. } => 1 + children.iter().map(|c| c.depth()).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn of(e: &Expr) -> Skeleton {
        match e {
            Expr::Source(n, _) if n == "irs" => Skeleton::Irs,
            Expr::Source(..) | Expr::Set(..) => Skeleton::S0,
            Expr::Call(c) => Skeleton::op(c.op, c.set_args().map(Skeleton::of).collect()),
            Expr::Chain(recv, c) => {
                let mut kids = vec![Skeleton::of(recv)];
                kids.extend(c.set_args().map(Skeleton::of));
                Skeleton::op(c.op, kids)
            }
            Expr::Bang(inner) => Skeleton::of(inner).banged(),
        }
    }

    /// Parses DSL text and erases it.
    pub fn parse(text: &str) -> Result<Skeleton> {
        Ok(Skeleton::of(&parse_expr(text)?))
    }

    /// Problems that make the skeleton meaningless as an expression:
    /// `irs` outside a branch body.
    pub fn lint(&self) -> Vec<String> {
        fn walk(s: &Skeleton, in_body: bool, out: &mut Vec<String>) {
            match s {
                Skeleton::Irs if !in_body => out.push("irs used outside a branch body".into()),
                Skeleton::Op { op, children, .. } => {
                    for (i, c) in children.iter().enumerate() {
                        walk(c, in_body || (*op == Operator::Branch && i >= 1), out);
                    }
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(self, false, &mut out);
        out.dedup();
        out
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Skeleton::S0 => f.write_str("s0"),
            Skeleton::Irs => f.write_str("irs"),
            Skeleton::Op { op, bang, children } => {
                write!(f, "{}(", op.name())?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")?;
                if *bang {
                    f.write_str("!")?;
                }
                Ok(())
            }
        }
    }
}
