//! A small expression language for potentials and densities.
//!
//! Expressions are rational functions of `x` built from rational numbers,
//! `x`, the parameter `a`, `+ - * / ^` and parentheses; a number or closing
//! parenthesis directly followed by a factor multiplies it (`2x`, `(1+x)(1-x)`).
//! A trailing `@ a=p/q` binds the parameter. Exponents are non-negative
//! integers.
//!
//! ```
//! use ricci_orbit::expr::parse_potential;
//! let pot = parse_potential("1+a*x+x^2 @ a=3/2", None).unwrap();
//! assert_eq!(pot.to_string(), "log(1 + (3/2)x + x^2)");
//! ```

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::radial::{RadialDensity, RadialLogPotential};
use crate::ratfunc::RatFunc;
use crate::rational::parse_rational;

const MAX_EXPONENT: u32 = 256;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigRational),
    X,
    A,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            ' ' | '\t' | '\n' => {
                i += 1;
                continue;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Num(parse_rational(&s)?));
                continue;
            }
            'x' | 'X' => Token::X,
            'a' => Token::A,
            '+' => Token::Plus,
            '-' | '−' => Token::Minus,
            '*' | '·' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        };
        out.push(tok);
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    a: Option<&'a BigRational>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(op @ (Token::Plus | Token::Minus)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == Token::Plus {
                acc.add(&rhs)
            } else {
                acc.sub(&rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|_| Error::Parse("division by zero".into()))?;
                }
                Some(Token::Num(_) | Token::X | Token::A | Token::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::zero()).sub(&self.unary()?))
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.primary()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = match self.next() {
            Some(Token::Num(n)) if n.is_integer() => n.to_integer(),
            Some(Token::LParen) => match (self.next(), self.next()) {
                (Some(Token::Num(n)), Some(Token::RParen)) if n.is_integer() => n.to_integer(),
                _ => {
                    return Err(Error::Parse(
                        "exponent must be a non-negative integer".into(),
                    ))
                }
            },
            _ => {
                return Err(Error::Parse(
                    "exponent must be a non-negative integer".into(),
                ))
            }
        };
        let e: u32 = e
            .try_into()
            .ok()
            .filter(|e| *e <= MAX_EXPONENT)
            .ok_or_else(|| Error::Parse(format!("exponent out of range (max {MAX_EXPONENT})")))?;
        let (num, den) = base.into_parts();
        RatFunc::new(num.pow(e), den.pow(e))
    }

    fn primary(&mut self) -> Result<RatFunc> {
        match self.next() {
            Some(Token::Num(n)) => Ok(RatFunc::constant(n)),
            Some(Token::X) => Ok(RatFunc::from_poly(Poly::x())),
            Some(Token::A) => self
                .a
                .map(|a| RatFunc::constant(a.clone()))
                .ok_or_else(|| Error::Parse("parameter a has no value; add '@ a=p/q'".into())),
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

/// Splits off a trailing `@ a=value` binding.
fn split_binding(src: &str) -> Result<(&str, Option<BigRational>)> {
    let Some((body, binding)) = src.split_once('@') else {
        return Ok((src, None));
    };
    let (name, value) = binding
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("malformed binding {binding:?}")))?;
    if name.trim() != "a" {
        return Err(Error::Parse(format!("unknown parameter {:?}", name.trim())));
    }
    Ok((body, Some(parse_rational(value)?)))
}

/// Parses a rational function of `x`. A binding in the source takes
/// precedence over `a`.
pub fn parse_expr(src: &str, a: Option<&BigRational>) -> Result<RatFunc> {
    let (body, bound) = split_binding(src)?;
    let mut p = Parser {
        tokens: tokenize(body)?,
        pos: 0,
        a: bound.as_ref().or(a),
    };
    if p.tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let value = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(Error::Parse(format!("trailing input at {t:?}")));
    }
    Ok(value)
}

/// Strips one enclosing `log( … )`.
fn strip_log(src: &str) -> &str {
    let s = src.trim();
    match s.strip_prefix("log(").and_then(|r| r.strip_suffix(')')) {
        // only when the parentheses match each other
        Some(inner) if balanced(inner) => inner,
        _ => s,
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

fn is_fs(src: &str) -> bool {
    src.trim().eq_ignore_ascii_case("fs")
}

/// A potential from JSON (`{"f": [...], "h": [...]}`), the name `FS`, or an
/// expression `Q` (optionally written `log(Q)`) meaning `log Q`.
pub fn parse_potential(src: &str, a: Option<&BigRational>) -> Result<RadialLogPotential> {
    let s = src.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()));
    }
    if is_fs(s) {
        return RadialLogPotential::log_poly(Poly::from_ints(&[1, 1]));
    }
    let body = strip_log(s);
    let q = parse_expr(body, a)?;
    if q.is_zero() {
        return Err(Error::InvalidPotential("log of zero".into()));
    }
    let (f, h) = q.into_parts();
    RadialLogPotential::normalized(f, h)
}

/// A density from JSON (`{"num": [...], "den": [...]}`), the name `FS`
/// (`1/(1+x)²`), or an expression.
pub fn parse_density(src: &str, a: Option<&BigRational>) -> Result<RadialDensity> {
    let s = src.trim();
    if s.starts_with('{') {
        let v: RatFunc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        return RadialDensity::new(v);
    }
    if is_fs(s) {
        return Ok(RadialDensity::fubini_study(1));
    }
    RadialDensity::new(parse_expr(s, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn binomial_power() {
        let pot = parse_potential("(1+x)^4", None).unwrap();
        assert_eq!(pot.f(), &p(&[1, 4, 6, 4, 1]));
        assert_eq!(pot.h(), &p(&[1]));
    }

    #[test]
    fn family_with_binding() {
        let pot = parse_potential("1+a*x+x^2 @ a=3/2", None).unwrap();
        assert_eq!(pot, RadialLogPotential::family(&ratio(3, 2)));
        let pot = parse_potential("1 + a x + x^2", Some(&int(2))).unwrap();
        assert_eq!(pot, RadialLogPotential::family(&int(2)));
        // the inline binding wins
        let pot = parse_potential("1+a*x+x^2 @ a = 1.5", Some(&int(2))).unwrap();
        assert_eq!(pot, RadialLogPotential::family(&ratio(3, 2)));
    }

    #[test]
    fn unbound_parameter() {
        assert!(matches!(
            parse_potential("1+a*x", None),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn quotients_and_log_wrapper() {
        let pot = parse_potential("log(1/(1-x))", None).unwrap();
        assert_eq!((pot.f(), pot.h()), (&p(&[1]), &p(&[1, -1])));
        let pot = parse_potential("(2+2x)/2", None).unwrap();
        assert_eq!(pot.f(), &p(&[1, 1]));
        // not a single wrapper: log(…)·…
        assert!(parse_potential("log(1+x)(1+x)", None).is_err());
    }

    #[test]
    fn fubini_study_names() {
        assert_eq!(parse_potential("FS", None).unwrap().f(), &p(&[1, 1]));
        assert_eq!(
            parse_density("fs", None).unwrap(),
            RadialDensity::fubini_study(1)
        );
    }

    #[test]
    fn densities() {
        let v = parse_density("2/(1+x)^2", None).unwrap();
        assert_eq!(v, RadialDensity::fubini_study(2));
        let v = parse_density(r#"{"num":["4"],"den":[1,2,1]}"#, None).unwrap();
        assert_eq!(v, RadialDensity::fubini_study(4));
        assert_eq!(parse_density("x - x", None), Err(Error::NotAMetric));
    }

    #[test]
    fn json_potential() {
        let pot = parse_potential(r#"{"f":[1,2,1],"h":[1]}"#, None).unwrap();
        assert_eq!(pot, RadialLogPotential::family(&int(2)));
        assert!(parse_potential(r#"{"f":[2,1]}"#, None).is_err());
    }

    #[test]
    fn precedence_and_implicit_products() {
        let e = parse_expr("-x^2 + 2x(1+x) - 3/4", None).unwrap();
        assert_eq!(
            e,
            RatFunc::from_poly(Poly::new(vec![ratio(-3, 4), int(2), int(1)]))
        );
        let e = parse_expr("(1+x)(1-x)", None).unwrap();
        assert_eq!(e, RatFunc::from_poly(p(&[1, 0, -1])));
        assert!(parse_expr("x^-1", None).is_err());
        assert!(parse_expr("1/(x-x)", None).is_err());
        assert!(parse_expr("(1+x", None).is_err());
        assert!(parse_expr("1 2", None).is_ok());
        assert!(parse_expr("", None).is_err());
        assert!(parse_expr("1 + y", None).is_err());
    }
}
