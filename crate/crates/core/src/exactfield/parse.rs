//! Expression grammar shared by scalars, polynomials and algebra elements.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```

use std::sync::Arc;

use num_bigint::BigInt;

use super::cyclo::{Cyclo, CycloField};
use super::poly::Poly;
use super::scalar::{ParamScalar, ScalarField};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident { name: String, column: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn perr<T>(column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        column,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return perr(col, format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let col = self.col();
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), col);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: i64 = i64::try_from(&n).or_else(|_| perr(col, "exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
                }
                _ => return perr(col, "expected integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Ident { name, column: col })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return perr(self.col(), "expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => perr(col, format!("unexpected `{c}`")),
            None => perr(col, "unexpected end of input"),
        }
    }
}

/// Parses text into an expression tree.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return perr(p.col(), "trailing input");
    }
    Ok(e)
}

/// Evaluates an expression in the scalar field; `z` is the primitive root
/// of unity of the field's conductor.
pub fn eval_scalar(e: &Expr, ctx: &Arc<ScalarField>) -> Result<ParamScalar> {
    Ok(match e {
        Expr::Int(n) => {
            ParamScalar::from_rational(ctx, num_rational::BigRational::from_integer(n.clone()))
        }
        Expr::Ident { name, column } => {
            if name == "z" {
                ParamScalar::root_of_unity(ctx, ctx.conductor(), 1)?
            } else {
                match ctx.symbol_index(name) {
                    Some(i) => ParamScalar::symbol_at(ctx, i),
                    None => return perr(*column, format!("unknown symbol `{name}`")),
                }
            }
        }
        Expr::Neg(a) => eval_scalar(a, ctx)?.neg(),
        Expr::Add(a, b) => eval_scalar(a, ctx)?.checked_add(&eval_scalar(b, ctx)?)?,
        Expr::Sub(a, b) => eval_scalar(a, ctx)?.checked_sub(&eval_scalar(b, ctx)?)?,
        Expr::Mul(a, b) => eval_scalar(a, ctx)?.checked_mul(&eval_scalar(b, ctx)?)?,
        Expr::Div(a, b, col) => {
            let d = eval_scalar(b, ctx)?;
            if d.is_zero() {
                return perr(*col, "division by zero");
            }
            eval_scalar(a, ctx)?.checked_div(&d)?
        }
        Expr::Pow(a, k) => eval_scalar(a, ctx)?.pow(*k)?,
    })
}

pub fn parse_scalar(text: &str, ctx: &Arc<ScalarField>) -> Result<ParamScalar> {
    eval_scalar(&parse_expr(text)?, ctx)
}

/// Evaluates an expression as a polynomial in `x1..x{nvars}` with
/// coefficients in the scalar field.
pub fn eval_poly(e: &Expr, ctx: &Arc<ScalarField>, nvars: usize) -> Result<Poly<ParamScalar>> {
    let zero = ParamScalar::zero(ctx);
    Ok(match e {
        Expr::Ident { name, column } => {
            if let Some(rest) = name
                .strip_prefix('x')
                .filter(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit()))
            {
                let i: usize = rest
                    .parse()
                    .or_else(|_| perr(*column, "bad variable index"))?;
                if i == 0 || i > nvars {
                    return perr(
                        *column,
                        format!("variable `{name}` out of range 1..{nvars}"),
                    );
                }
                Poly::var(i - 1, nvars, &zero)
            } else {
                Poly::constant(eval_scalar(e, ctx)?, nvars)
            }
        }
        Expr::Int(_) => Poly::constant(eval_scalar(e, ctx)?, nvars),
        Expr::Neg(a) => eval_poly(a, ctx, nvars)?.neg(),
        Expr::Add(a, b) => eval_poly(a, ctx, nvars)?.add(&eval_poly(b, ctx, nvars)?),
        Expr::Sub(a, b) => eval_poly(a, ctx, nvars)?.sub(&eval_poly(b, ctx, nvars)?),
        Expr::Mul(a, b) => eval_poly(a, ctx, nvars)?.mul(&eval_poly(b, ctx, nvars)?),
        Expr::Div(a, b, col) => {
            let d = eval_scalar(b, ctx)
                .or_else(|_| perr(*col, "only division by scalars is allowed"))?;
            if d.is_zero() {
                return perr(*col, "division by zero");
            }
            eval_poly(a, ctx, nvars)?.scale(&d.inv()?)
        }
        Expr::Pow(a, k) => {
            if *k < 0 {
                Poly::constant(eval_scalar(e, ctx)?, nvars)
            } else {
                eval_poly(a, ctx, nvars)?.pow(*k as u32)
            }
        }
    })
}

pub fn parse_poly(text: &str, ctx: &Arc<ScalarField>, nvars: usize) -> Result<Poly<ParamScalar>> {
    eval_poly(&parse_expr(text)?, ctx, nvars)
}

/// Writes a polynomial in `x1..xn` in the grammar accepted by [`parse_poly`].
pub fn format_poly(p: &Poly<ParamScalar>) -> String {
    let names: Vec<String> = (1..=p.nvars()).map(|i| format!("x{i}")).collect();
    p.fmt_with(&names, &|c: &ParamScalar| c.to_string())
}

/// Parses `c0 + c1*z + ...` in `Q(zeta_N)`; an optional `z = zeta_N:`
/// header overrides the given field.
pub fn parse_cyclo(text: &str, field: &Arc<CycloField>) -> Result<Cyclo> {
    let (field, body, offset) = match split_header(text)? {
        Some((n, body, off)) => (CycloField::new(n), body, off),
        None => (field.clone(), text, 0),
    };
    let ctx = ScalarField::new(field.conductor(), Vec::new())?;
    let v = parse_scalar(body, &ctx).map_err(|e| shift_column(e, offset))?;
    Ok(v.to_cyclo().expect("no symbols"))
}

fn shift_column(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { column, message } => Error::Parse {
            column: column + offset,
            message,
        },
        other => other,
    }
}

fn split_header(text: &str) -> Result<Option<(u32, &str, usize)>> {
    let Some(idx) = text.find(':') else {
        return Ok(None);
    };
    let head = text[..idx].trim();
    let Some(rest) = head.strip_prefix("z") else {
        return perr(1, "malformed header");
    };
    let rest = rest.trim_start();
    let Some(rest) = rest.strip_prefix('=') else {
        return perr(1, "malformed header");
    };
    let Some(n) = rest.trim().strip_prefix("zeta_") else {
        return perr(1, "malformed header");
    };
    let n: u32 = n.parse().or_else(|_| perr(1, "bad conductor"))?;
    if n == 0 {
        return perr(1, "bad conductor");
    }
    Ok(Some((n, &text[idx + 1..], idx + 1)))
}

/// Writes `z = zeta_N: c0 + c1*z + ...`.
pub fn format_cyclo_with_header(c: &Cyclo) -> String {
    format!("z = zeta_{}: {}", c.conductor(), c.fmt_with("z"))
}
