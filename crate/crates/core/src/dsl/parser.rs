use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::ParseError;
use crate::error::Span;
use crate::model::{RelStep, RelationPath};
use crate::ops::Operator;

pub fn parse_script(src: &str) -> Result<Script, ParseError> {
    let mut p = Parser::new(src)?;
    let mut stmts = Vec::new();
    loop {
        p.skip_separators();
        if p.at(&Tok::Eof) {
            break;
        }
        stmts.push(p.stmt()?);
        if !matches!(p.peek().tok, Tok::Newline | Tok::Semi | Tok::Eof) {
            return Err(p.unexpected(&["end of line", "`;`"]));
        }
    }
    Ok(Script { stmts })
}

/// A single expression; surrounding blank lines are allowed.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    p.skip_separators();
    let e = p.expr()?;
    p.skip_separators();
    if !p.at(&Tok::Eof) {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    /// Parenthesis nesting; newlines are insignificant inside.
    depth: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, i: 0, depth: 0 })
    }

    fn skip_newlines_if_nested(&mut self) {
        if self.depth > 0 {
            while self.toks[self.i].tok == Tok::Newline {
                self.i += 1;
            }
        }
    }

    fn peek(&mut self) -> &Token {
        self.skip_newlines_if_nested();
        &self.toks[self.i]
    }

    fn peek_at(&mut self, k: usize) -> &Tok {
        self.skip_newlines_if_nested();
        let mut j = self.i;
        let mut seen = 0;
        while j < self.toks.len() - 1 {
            if self.depth > 0 && self.toks[j].tok == Tok::Newline {
                j += 1;
                continue;
            }
            if seen == k {
                break;
            }
            seen += 1;
            j += 1;
        }
        &self.toks[j].tok
    }

    fn at(&mut self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn bump(&mut self) -> Token {
        self.skip_newlines_if_nested();
        let t = self.toks[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn last_span(&self) -> Span {
        self.toks[self.i.saturating_sub(1)].span
    }

    fn unexpected(&mut self, expected: &[&str]) -> ParseError {
        let t = self.peek().clone();
        let message = if expected.is_empty() {
            format!("unexpected {}", t.tok.describe())
        } else {
            format!("expected {}, found {}", expected.join(" or "), t.tok.describe())
        };
        ParseError { span: t.span, message, expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn error_at(span: Span, message: impl Into<String>) -> ParseError {
        ParseError { span, message: message.into(), expected: Vec::new() }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<Token, ParseError> {
        if self.at(&t) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn open(&mut self, t: Tok, what: &str) -> Result<Token, ParseError> {
        let tok = self.expect(t, what)?;
        self.depth += 1;
        Ok(tok)
    }

    fn close(&mut self, t: Tok, what: &str) -> Result<Token, ParseError> {
        self.skip_newlines_if_nested();
        if self.toks[self.i].tok != t {
            return Err(self.unexpected(&[what]));
        }
        self.depth -= 1;
        Ok(self.bump())
    }

    fn skip_separators(&mut self) {
        while matches!(self.toks[self.i].tok, Tok::Newline | Tok::Semi) {
            self.i += 1;
        }
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let start = self.peek().span;
        let target = match (self.peek().tok.clone(), self.peek_at(1).clone()) {
            (Tok::Ident(name), Tok::Eq) => {
                self.bump();
                self.bump();
                Some(name)
            }
            _ => None,
        };
        let expr = self.expr()?;
        Ok(Stmt { target, expr, loc: Loc(start.to(self.last_span())) })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.primary()?;
        loop {
            // A chain may continue on the next line when that line starts with `.`.
            if self.depth == 0 && self.toks[self.i].tok == Tok::Newline {
                let mut j = self.i;
                while self.toks[j].tok == Tok::Newline {
                    j += 1;
                }
                if self.toks[j].tok == Tok::Dot {
                    self.i = j;
                }
            }
            if self.at(&Tok::Dot) {
                self.bump();
                let call = self.call(true)?;
                e = Expr::Chain(Box::new(e), call);
            } else if self.at(&Tok::LBrack) {
                let (lo, hi, span) = self.slice()?;
                let call = Call {
                    op: Operator::Slice,
                    args: vec![Arg::Term(Term::Int(lo as i64)), Arg::Term(Term::Int(hi as i64))],
                    slice: None,
                    loc: Loc(span),
                };
                e = Expr::Chain(Box::new(e), call);
            } else {
                break;
            }
        }
        if self.at(&Tok::Bang) {
            self.bump();
            e = Expr::Bang(Box::new(e));
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                if self.peek_at(1) == &Tok::LParen {
                    return Ok(Expr::Call(self.call(false)?));
                }
                self.bump();
                Ok(Expr::Source(name, Loc(t.span)))
            }
            Tok::LBrace => {
                self.open(Tok::LBrace, "`{`")?;
                let mut ids = Vec::new();
                if !self.at(&Tok::RBrace) {
                    loop {
                        let t = self.bump();
                        match t.tok {
                            Tok::Ident(s) | Tok::Str(s) => ids.push(s),
                            Tok::Int(i) => ids.push(i.to_string()),
                            _ => {
                                self.i -= 1;
                                return Err(self.unexpected(&["item id"]));
                            }
                        }
                        if self.at(&Tok::Comma) {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                let end = self.close(Tok::RBrace, "`}`")?;
                Ok(Expr::Set(ids, Loc(t.span.to(end.span))))
            }
            Tok::LParen => {
                self.open(Tok::LParen, "`(`")?;
                let e = self.expr()?;
                self.close(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.unexpected(&["identifier", "operator call", "`{`"])),
        }
    }

    fn slice(&mut self) -> Result<(u64, u64, Span), ParseError> {
        let start = self.open(Tok::LBrack, "`[`")?.span;
        let lo = self.index()?;
        self.expect(Tok::DotDot, "`..`")?;
        let hi = self.index()?;
        let end = self.close(Tok::RBrack, "`]`")?.span;
        Ok((lo, hi, start.to(end)))
    }

    fn index(&mut self) -> Result<u64, ParseError> {
        match self.peek().tok {
            Tok::Int(i) if i >= 0 => {
                self.bump();
                Ok(i as u64)
            }
            _ => Err(self.unexpected(&["non-negative integer"])),
        }
    }

    /// `op(args)[a..b]`. With `chained`, the receiver already supplied the
    /// first set input.
    fn call(&mut self, chained: bool) -> Result<Call, ParseError> {
        let name_tok = self.bump();
        let Tok::Ident(name) = &name_tok.tok else {
            self.i -= 1;
            return Err(self.unexpected(&["operator name"]));
        };
        let op = Operator::from_name(name)
            .ok_or_else(|| Self::error_at(name_tok.span, format!("unknown operator `{name}`")))?;
        let want_sets = op.set_inputs() - usize::from(chained);
        self.open(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        let mut sets = 0;
        if !self.at(&Tok::RParen) {
            loop {
                let is_kw = matches!(self.peek().tok, Tok::Ident(_)) && self.peek_at(1) == &Tok::Eq;
                if is_kw {
                    let Tok::Ident(k) = self.bump().tok else { unreachable!() };
                    self.bump();
                    args.push(Arg::Kw(k, self.term()?));
                } else if sets < want_sets {
                    args.push(Arg::Set(self.expr()?));
                    sets += 1;
                } else {
                    args.push(Arg::Term(self.term()?));
                }
                if self.at(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        let end = self.close(Tok::RParen, "`)`")?;
        if sets < want_sets {
            return Err(Self::error_at(
                name_tok.span.to(end.span),
                format!("{} needs {} set argument(s), found {sets}", op.name(), want_sets),
            ));
        }
        let mut span = name_tok.span.to(end.span);
        let slice = if self.at(&Tok::LBrack) {
            let (lo, hi, s) = self.slice()?;
            span = span.to(s);
            Some((lo, hi))
        } else {
            None
        };
        Ok(Call { op, args, slice, loc: Loc(span) })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.product()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => TermOp::Add,
                Tok::Minus => TermOp::Sub,
                _ => break,
            };
            self.bump();
            t = Term::Bin(op, Box::new(t), Box::new(self.product()?));
        }
        Ok(t)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unary()?;
        while self.at(&Tok::Star) {
            self.bump();
            t = Term::Bin(TermOp::Mul, Box::new(t), Box::new(self.unary()?));
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if self.at(&Tok::Minus) {
            self.bump();
            return Ok(Term::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(i) => {
                self.bump();
                Ok(Term::Int(i))
            }
            Tok::Float(f) => {
                self.bump();
                Ok(Term::Float(f))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Term::Str(s))
            }
            Tok::ItemVar => {
                self.bump();
                Ok(Term::ItemVar)
            }
            Tok::Rel(_) => self.relpath_term(),
            Tok::Ident(ref name) if name == "inverse" && self.peek_at(1) == &Tok::LParen => self.relpath_term(),
            Tok::Ident(name) => {
                self.bump();
                if !self.at(&Tok::LParen) {
                    return Ok(Term::Ident(name));
                }
                self.open(Tok::LParen, "`(`")?;
                let mut args = Vec::new();
                if !self.at(&Tok::RParen) {
                    loop {
                        args.push(self.term()?);
                        if self.at(&Tok::Comma) {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.close(Tok::RParen, "`)`")?;
                Ok(Term::Apply(name, args))
            }
            Tok::LParen => {
                self.open(Tok::LParen, "`(`")?;
                let inner = self.term()?;
                self.close(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected(&["argument"])),
        }
    }

    fn relpath_term(&mut self) -> Result<Term, ParseError> {
        let rp = self.relpath()?;
        if self.at(&Tok::LBrack) && self.peek_at(1) == &Tok::ItemVar {
            self.open(Tok::LBrack, "`[`")?;
            self.bump();
            self.close(Tok::RBrack, "`]`")?;
            return Ok(Term::Image(rp));
        }
        Ok(Term::Rel(rp))
    }

    fn relpath(&mut self) -> Result<RelationPath, ParseError> {
        let mut steps: Vec<RelStep> = Vec::new();
        loop {
            match self.peek().tok.clone() {
                Tok::Rel(id) => {
                    self.bump();
                    steps.push(RelStep { id, inverse: false });
                }
                Tok::Ident(ref n) if n == "inverse" && self.peek_at(1) == &Tok::LParen => {
                    self.bump();
                    self.open(Tok::LParen, "`(`")?;
                    let inner = self.relpath()?;
                    self.close(Tok::RParen, "`)`")?;
                    steps.extend(inner.inverse().steps().iter().cloned());
                }
                _ if !steps.is_empty() => break,
                _ => return Err(self.unexpected(&["relation"])),
            }
        }
        Ok(RelationPath::new(steps))
    }
}
