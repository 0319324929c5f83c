//! Recursive-descent reader for polynomial text.
//!
//! Accepts both the human form (`1/2*p1^2 - i*sqrt2*q2`) and the canonical
//! form (`(1/2, 0, 0, 0) * p1^2`). `i` and `sqrt2` are reserved names.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Error;
use crate::exact::{Poly, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, Error> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            out.push(Tok::Num(digits.parse().expect("ascii digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Tok::Ident(chars[start..k].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            k += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Poly, Error> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, Error> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                &acc * &rhs
            } else {
                let d = rhs
                    .as_constant()
                    .ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                acc.scale(&d.inv().ok_or(Error::DivisionByZero)?)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, Error> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, Error> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("exponent must be a nonnegative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, Error> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(Scalar::from_rational(BigRational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(match name.as_str() {
                    "i" => Poly::constant(Scalar::i()),
                    "sqrt2" => Poly::constant(Scalar::sqrt2()),
                    _ => Poly::var(&name),
                })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let first = self.expr()?;
                if self.peek_op() == Some(',') {
                    let mut parts = vec![first];
                    for _ in 0..3 {
                        self.expect(',')?;
                        parts.push(self.expr()?);
                    }
                    self.expect(')')?;
                    let mut rats = Vec::with_capacity(4);
                    for part in parts {
                        let r = part
                            .as_constant()
                            .and_then(|s| s.as_rational().cloned())
                            .ok_or_else(|| Error::Parse("tuple entries must be rational".into()))?;
                        rats.push(r);
                    }
                    let [c0, c1, c2, c3]: [BigRational; 4] =
                        rats.try_into().expect("four entries");
                    Ok(Poly::constant(Scalar::new(c0, c1, c2, c3)))
                } else {
                    self.expect(')')?;
                    Ok(first)
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a polynomial from text.
pub fn parse_poly(s: &str) -> Result<Poly, Error> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let a = parse_poly("-x^2 + 2*3").unwrap();
        let b = &Poly::int(6) - &Poly::var("x").pow(2);
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("x / y").is_err());
        assert!(parse_poly("x^y").is_err());
        assert!(parse_poly("(1, 2, x, 0)").is_err());
        assert!(parse_poly("x $ y").is_err());
        assert!(parse_poly("").is_err());
    }
}
