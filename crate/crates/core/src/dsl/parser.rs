//! Recursive-descent parser for infix expressions.
//!
//! Precedence, tightest first: `^` (right associative), unary `-`, `* /`,
//! `+ -`. A `-` directly after `^` belongs to the exponent.

use super::lexer::{lex, Tok, Token};
use super::{DslError, ErrorKind, Span};
use crate::expr::{alpha, apply, big_f, func, jet, param, sqrt, t, u, x, Expr, Func, Q};
use crate::jet::MAX_ORDER;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), DslError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> DslError {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            other => format!("{other:?}").to_lowercase(),
        };
        DslError::new(ErrorKind::Syntax, format!("expected {what}, found {found}"), self.span())
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    acc = acc / self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        Ok(base.pow(e))
    }

    fn exponent(&mut self) -> Result<Expr, DslError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.exponent()?);
        }
        self.power()
    }

    fn args(&mut self) -> Result<Vec<Expr>, DslError> {
        self.expect(Tok::LParen, "'('")?;
        let mut out = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.expr()?);
        }
        self.expect(Tok::RParen, "')' or ','")?;
        Ok(out)
    }

    fn one_arg(&mut self, name: &str, span: Span) -> Result<Expr, DslError> {
        let mut a = self.args()?;
        if a.len() != 1 {
            return Err(DslError::new(ErrorKind::Syntax, format!("{name} takes one argument"), span));
        }
        Ok(a.remove(0))
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let span = self.bump().span;
                self.ident(&name, span)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn ident(&mut self, name: &str, span: Span) -> Result<Expr, DslError> {
        let base = name.trim_end_matches('\'');
        let primes = (name.len() - base.len()) as u8;
        let calls = *self.peek() == Tok::LParen;
        if primes > 0 && !matches!(base, "F" | "f" | "g") {
            return Err(DslError::new(ErrorKind::Syntax, format!("primes are only allowed on F, f and g, not {base:?}"), span));
        }
        if *self.peek() == Tok::LBracket {
            return self.applied_with_orders(base, span);
        }
        if let Some(fun) = Func::from_name(base) {
            let a = self.one_arg(base, span)?;
            return Ok(func(fun, a));
        }
        match base {
            "sqrt" => return Ok(sqrt(self.one_arg(base, span)?)),
            "f" | "g" if calls => {
                let a = self.one_arg(base, span)?;
                return Ok(apply(base, vec![primes], vec![a]));
            }
            _ => {}
        }
        if calls {
            return Err(DslError::new(ErrorKind::UnknownFunction, format!("{base:?} is not a known function"), span));
        }
        if base == "F" {
            if primes > 2 {
                return Err(DslError::new(ErrorKind::Syntax, "F carries at most two primes", span));
            }
            return Ok(big_f(primes));
        }
        if primes > 0 {
            return Err(DslError::new(ErrorKind::Syntax, format!("{base} must be applied to an argument"), span));
        }
        Ok(match base {
            "t" => t(),
            "x" => x(),
            "u" => u(),
            "alpha" => alpha(),
            _ => match jet_of(base) {
                Some(Ok(j)) => j,
                Some(Err(msg)) => return Err(DslError::new(ErrorKind::Syntax, msg, span)),
                None => param(base),
            },
        })
    }

    /// `name[k1,k2,...](a1, a2, ...)`: an abstract function with partial orders.
    fn applied_with_orders(&mut self, name: &str, span: Span) -> Result<Expr, DslError> {
        self.bump();
        let mut orders = Vec::new();
        loop {
            let s = self.span();
            match self.bump().tok {
                Tok::Num(v) if v.is_integer() && v >= Q::from_integer(0.into()) && v <= Q::from_integer(8.into()) => {
                    orders.push(v.to_integer().try_into().unwrap_or(0u8));
                }
                _ => return Err(DslError::new(ErrorKind::Syntax, "derivative orders must be small nonnegative integers", s)),
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBracket => {
                    self.bump();
                    break;
                }
                _ => return Err(self.unexpected("',' or ']'")),
            }
        }
        if Func::from_name(name).is_some() || name == "sqrt" {
            return Err(DslError::new(ErrorKind::Syntax, format!("{name} does not take derivative orders"), span));
        }
        let args = self.args()?;
        if args.len() != orders.len() {
            return Err(DslError::new(ErrorKind::Syntax, "one derivative order per argument", span));
        }
        Ok(apply(name, orders, args))
    }
}

/// `u_xxt` style jet names; `None` when `name` is not of that shape.
fn jet_of(name: &str) -> Option<Result<Expr, String>> {
    let rest = name.strip_prefix("u_")?;
    if rest.is_empty() || !rest.chars().all(|c| c == 'x' || c == 't') {
        return None;
    }
    let nx = rest.chars().filter(|&c| c == 'x').count();
    let nt = rest.len() - nx;
    if nx + nt > MAX_ORDER as usize {
        return Some(Err(format!("{name} exceeds the supported derivative order {MAX_ORDER}")));
    }
    Some(Ok(jet(nt as u8, nx as u8)))
}

/// Parses a complete expression from a single line.
pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    parse_expr_at(src, 1, 1)
}

/// As [`parse_expr`], reporting positions relative to `line` and `col`.
pub fn parse_expr_at(src: &str, line: usize, col: usize) -> Result<Expr, DslError> {
    let toks = lex(src, line, col)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{apply1, q};

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap_or_else(|e| panic!("{e}"))
    }

    #[test]
    fn precedence() {
        assert_eq!(p("-x^2").norm(), (-(x().powi(2))).norm());
        assert_eq!(p("2^3^2").norm(), Expr::int(512));
        assert_eq!(p("1 - 2 - 3").norm(), Expr::int(-4));
        assert_eq!(p("12/3/2").norm(), Expr::int(2));
        assert_eq!(p("x^-1").norm(), x().recip().norm());
        assert_eq!(p("0.5*u").norm(), (Expr::Num(q(1, 2)) * u()).norm());
    }

    #[test]
    fn identifiers() {
        assert_eq!(p("u_xx"), jet(0, 2));
        assert_eq!(p("u_tx"), jet(1, 1));
        assert_eq!(p("F''"), big_f(2));
        assert_eq!(p("f'(u)"), apply1("f", 1, u()));
        assert_eq!(p("besselK0(sqrt(2)*x)").norm(), func(Func::BesselK0, sqrt(Expr::int(2)) * x()).norm());
        assert_eq!(p("xi1[1,0](t, x)"), apply("xi1", vec![1, 0], vec![t(), x()]));
        assert_eq!(p("c2"), param("c2"));
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse_expr("exp(x) + foo(x)").unwrap_err();
        assert_eq!(e.kind, ErrorKind::UnknownFunction);
        assert_eq!(e.span.col, 10);
        let e = parse_expr("x + * 2").unwrap_err();
        assert_eq!((e.kind, e.span.col), (ErrorKind::Syntax, 5));
        let e = parse_expr("(x + 1").unwrap_err();
        assert_eq!(e.span.col, 7);
        let e = parse_expr("x'").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        let shown = parse_expr("x + )").unwrap_err().with_source("x + )").to_string();
        assert!(shown.ends_with("x + )\n      ^"), "{shown}");
    }
}
