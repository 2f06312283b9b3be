//! Expression grammar shared by the command line and the config files.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? INT)?
//! atom   := INT | SYMBOL | '(' expr ')'
//! ```
//!
//! Symbols are `q`, `zeta` (cyclotomic fields only, where it equals `q`),
//! `x1..xn`, `d1..dn` and `a1..an` (the Euler operator `1 + x_i d_i`).
//! `*` is noncommutative; `/` needs a scalar divisor. Negative powers are
//! allowed on `a` symbols and on scalar subexpressions only.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::qweyl::{AlgebraSpec, LocalizedElement, PBWElement};
use crate::scalars::{FieldDescriptor, FieldKind, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn parse_err<T>(pos: Pos, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    })
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(s.parse().unwrap()), pos));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Ident(s), pos));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
            col += 1;
        } else {
            return parse_err(pos, format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    kind: Kind,
    pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Int(BigInt),
    Sym(String),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let op = if self.eat('+') {
                '+'
            } else if self.eat('-') {
                '-'
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr {
                kind: Kind::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let op = if self.eat('*') {
                '*'
            } else if self.eat('/') {
                '/'
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr {
                kind: Kind::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Expr {
                kind: Kind::Neg(Box::new(inner)),
                pos,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let epos = self.pos();
        let Some(Tok::Int(k)) = self.peek().cloned() else {
            return parse_err(epos, "expected an integer exponent");
        };
        self.at += 1;
        let Ok(mut e) = i64::try_from(k) else {
            return parse_err(epos, "exponent too large");
        };
        if neg {
            if let Kind::Sym(s) = &base.kind {
                if s.starts_with('x') || s.starts_with('d') {
                    return parse_err(epos, "negative powers are only allowed on a-symbols and scalars");
                }
            }
            e = -e;
        }
        Ok(Expr {
            kind: Kind::Pow(Box::new(base), e),
            pos,
        })
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.at += 1;
                Ok(Expr {
                    kind: Kind::Int(k),
                    pos,
                })
            }
            Some(Tok::Ident(s)) => {
                self.at += 1;
                Ok(Expr {
                    kind: Kind::Sym(s),
                    pos,
                })
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return parse_err(self.pos(), "expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => parse_err(pos, format!("unexpected `{c}`")),
            None => parse_err(pos, "unexpected end of input"),
        }
    }
}

/// Parses `src` into an expression tree.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let end = match src.lines().last() {
        Some(l) => Pos {
            line: src.lines().count().max(1),
            column: l.chars().count() + 1,
        },
        None => Pos { line: 1, column: 1 },
    };
    let mut p = Parser { toks, at: 0, end };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return parse_err(p.pos(), "unexpected trailing input");
    }
    Ok(e)
}

fn scalar_symbol(name: &str, field: &FieldDescriptor, pos: Pos) -> Result<Option<Scalar>> {
    match name {
        "q" if field.has_q() => Ok(Some(field.q()?)),
        "zeta" if field.kind() == FieldKind::Cyclotomic => Ok(Some(field.q()?)),
        "q" | "zeta" => Err(Error::UnknownSymbol(format!(
            "{name} (not in {field}) at line {}, column {}",
            pos.line, pos.column
        ))),
        _ => Ok(None),
    }
}

fn eval_scalar(e: &Expr, field: &FieldDescriptor) -> Result<Scalar> {
    match &e.kind {
        Kind::Int(k) => Ok(field.from_rational(BigRational::from_integer(k.clone()))),
        Kind::Sym(s) => scalar_symbol(s, field, e.pos)?
            .ok_or_else(|| Error::UnknownSymbol(format!("{s} at line {}, column {}", e.pos.line, e.pos.column))),
        Kind::Neg(inner) => Ok(-eval_scalar(inner, field)?),
        Kind::Bin(op, a, b) => {
            let (a, b) = (eval_scalar(a, field)?, eval_scalar(b, field)?);
            match op {
                '+' => a.try_add(&b),
                '-' => a.try_sub(&b),
                '*' => a.try_mul(&b),
                _ => a.try_div(&b),
            }
        }
        Kind::Pow(base, k) => eval_scalar(base, field)?.pow(*k),
    }
}

/// Parses a scalar literal such as `2/3`, `q^2-1` or `(1+zeta)/3`.
pub fn parse_scalar(src: &str, field: &FieldDescriptor) -> Result<Scalar> {
    eval_scalar(&parse(src)?, field)
}

fn generator(name: &str, spec: &Arc<AlgebraSpec>, pos: Pos) -> Result<Option<(char, usize)>> {
    let mut chars = name.chars();
    let Some(head @ ('x' | 'd' | 'a')) = chars.next() else {
        return Ok(None);
    };
    let rest = chars.as_str();
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) || rest.starts_with('0') {
        return Ok(None);
    }
    match rest.parse::<usize>() {
        Ok(i) if i >= 1 && i <= spec.n() => Ok(Some((head, i - 1))),
        _ => Err(Error::UnknownSymbol(format!(
            "{name} (rank is {}) at line {}, column {}",
            spec.n(),
            pos.line,
            pos.column
        ))),
    }
}

fn eval_element(e: &Expr, spec: &Arc<AlgebraSpec>) -> Result<LocalizedElement> {
    let lift = |u: PBWElement| LocalizedElement::from_pbw(u);
    match &e.kind {
        Kind::Int(k) => Ok(lift(PBWElement::scalar(
            spec,
            spec.field().from_rational(BigRational::from_integer(k.clone())),
        ))),
        Kind::Sym(s) => {
            if let Some(c) = scalar_symbol(s, spec.field(), e.pos)? {
                return Ok(lift(PBWElement::scalar(spec, c)));
            }
            match generator(s, spec, e.pos)? {
                Some(('x', i)) => Ok(lift(PBWElement::x(spec, i)?)),
                Some(('d', i)) => Ok(lift(PBWElement::d(spec, i)?)),
                Some((_, i)) => Ok(lift(PBWElement::alpha(spec, i)?)),
                None => Err(Error::UnknownSymbol(format!(
                    "{s} at line {}, column {}",
                    e.pos.line, e.pos.column
                ))),
            }
        }
        Kind::Neg(inner) => Ok(eval_element(inner, spec)?.neg()),
        Kind::Bin(op, a, b) => {
            let (a, b) = (eval_element(a, spec)?, eval_element(b, spec)?);
            match op {
                '+' => a.add(&b),
                '-' => a.sub(&b),
                '*' => a.mul(&b),
                _ => match b.as_scalar() {
                    Some(c) => Ok(a.scale(&c.inv()?)),
                    None => parse_err(e.pos, "the divisor must be a scalar"),
                },
            }
        }
        Kind::Pow(base, k) => {
            if *k >= 0 {
                return eval_element(base, spec)?.pow(*k as u32);
            }
            if let Kind::Sym(s) = &base.kind {
                if let Some(('a', i)) = generator(s, spec, base.pos)? {
                    let mut denom = vec![0; spec.n()];
                    denom[i] = k.unsigned_abs() as u32;
                    return LocalizedElement::alpha_inverse(spec, denom);
                }
            }
            match eval_element(base, spec)?.as_scalar() {
                Some(c) => Ok(lift(PBWElement::scalar(spec, c.pow(*k)?))),
                None => parse_err(e.pos, "negative powers are only allowed on a-symbols and scalars"),
            }
        }
    }
}

/// Parses and evaluates an algebra expression in the given algebra.
pub fn parse_element(src: &str, spec: &Arc<AlgebraSpec>) -> Result<LocalizedElement> {
    eval_element(&parse(src)?, spec)
}
