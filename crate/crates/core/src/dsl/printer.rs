//! Canonical text for ASTs. `parse(print(x)) == x` for every AST the parser
//! can produce.

use std::fmt::Write;

use super::ast::*;
use crate::model::is_ident_byte;

pub fn print_script(s: &Script) -> String {
    let mut out = String::new();
    for st in &s.stmts {
        out.push_str(&print_stmt(st));
        out.push('\n');
    }
    out
}

pub fn print_stmt(s: &Stmt) -> String {
    match &s.target {
        Some(t) => format!("{t} = {}", print_expr(&s.expr)),
        None => print_expr(&s.expr),
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr(&mut out, e);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term(&mut out, t, 0);
    out
}

fn is_plain_ident(s: &str) -> bool {
    let b = s.as_bytes();
    !b.is_empty() && (b[0].is_ascii_alphabetic() || b[0] == b'_') && b.iter().all(|&c| is_ident_byte(c))
}

fn is_plain_int(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit()) && s.parse::<i64>().is_ok_and(|i| i.to_string() == s)
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Source(n, _) => out.push_str(n),
        Expr::Set(ids, _) => {
            out.push('{');
            for (i, id) in ids.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                if is_plain_ident(id) || is_plain_int(id) {
                    out.push_str(id);
                } else {
                    out.push_str(&quote(id));
                }
            }
            out.push('}');
        }
        Expr::Call(c) => call(out, c),
        Expr::Chain(recv, c) => {
            if matches!(**recv, Expr::Bang(_)) {
                out.push('(');
                expr(out, recv);
                out.push(')');
            } else {
                expr(out, recv);
            }
            out.push('.');
            call(out, c);
        }
        Expr::Bang(inner) => {
            if matches!(**inner, Expr::Bang(_)) {
                out.push('(');
                expr(out, inner);
                out.push(')');
            } else {
                expr(out, inner);
            }
            out.push('!');
        }
    }
}

fn call(out: &mut String, c: &Call) {
    out.push_str(c.op.name());
    out.push('(');
    for (i, a) in c.args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        match a {
            Arg::Set(e) => expr(out, e),
            Arg::Term(t) => term(out, t, 0),
            Arg::Kw(k, t) => {
                out.push_str(k);
                out.push('=');
                term(out, t, 0);
            }
        }
    }
    out.push(')');
    if let Some((lo, hi)) = c.slice {
        let _ = write!(out, "[{lo}..{hi}]");
    }
}

fn prec(op: TermOp) -> u8 {
    match op {
        TermOp::Add | TermOp::Sub => 1,
        TermOp::Mul => 2,
    }
}

/// `min` is the loosest precedence that may appear unparenthesised here.
fn term(out: &mut String, t: &Term, min: u8) {
    match t {
        Term::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Term::Float(f) => {
            let _ = write!(out, "{f:?}");
        }
        Term::Str(s) => out.push_str(&quote(s)),
        Term::ItemVar => out.push_str("%item"),
        Term::Ident(s) => out.push_str(s),
        Term::State(id) => {
            let _ = write!(out, "s{id}");
        }
        Term::Rel(rp) => {
            let _ = write!(out, "{rp}");
        }
        Term::Image(rp) => {
            let _ = write!(out, "{rp}[%item]");
        }
        Term::Apply(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                term(out, a, 0);
            }
            out.push(')');
        }
        Term::Neg(inner) => {
            out.push('-');
            term(out, inner, 3);
        }
        Term::Bin(op, a, b) => {
            let p = prec(*op);
            let paren = p < min;
            if paren {
                out.push('(');
            }
            term(out, a, p);
            let _ = write!(out, " {} ", op.symbol());
            term(out, b, p + 1);
            if paren {
                out.push(')');
            }
        }
    }
}
