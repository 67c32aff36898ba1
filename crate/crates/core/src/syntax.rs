//! Text grammar for scalars, polynomials and rational functions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | factor
//! factor   := base ('^' exponent)?
//! base     := integer | 'eps' | 'O' '(' 'eps' ('^' exponent)? ')' | ident | '(' expr ')'
//! exponent := '-'? integer | '(' '-'? integer ('/' integer)? ')'
//! ```
//!
//! `a/b` between integers is ordinary division, so rationals need no special
//! token. Fractional exponents are only allowed on `eps`. The `Display`
//! output of every parsed value parses back to the same value.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{Exponent, FieldElement, Rational};
use crate::poly::{Polynomial, RationalFunction};

/// The narrowest kind the parsed text denotes.
#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Scalar(FieldElement),
    Polynomial(Polynomial),
    Rational(RationalFunction),
}

impl Parsed {
    pub fn into_rational_function(self) -> RationalFunction {
        match self {
            Parsed::Scalar(c) => RationalFunction::constant(c),
            Parsed::Polynomial(p) => p.into(),
            Parsed::Rational(r) => r,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn fail<T>(offset: usize, expected: &[&str]) -> Result<T> {
    Err(Error::Parse { offset, expected: expected.iter().map(|s| s.to_string()).collect() })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            fail(self.pos, &[&format!("'{c}'")])
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return fail(start, &["integer"]);
        }
        self.pos += digits;
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }

    fn small_integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let n = self.integer()?;
        i64::try_from(n).or_else(|_| fail(start, &["integer below 2^63"]))
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if !rest.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return None;
        }
        let len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
        self.pos += len;
        Some(&rest[..len])
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some('/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.div(&rhs).or_else(|_| fail(at, &["nonzero divisor"]))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.factor()
    }

    /// `n` or `(n)` or `(n/d)`, signs allowed.
    fn exponent(&mut self) -> Result<Exponent> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let n = self.small_integer()?;
        let mut d = 1;
        if paren && self.peek() == Some('/') {
            self.pos += 1;
            let at = self.pos;
            d = self.small_integer()?;
            if d == 0 {
                return fail(at, &["positive integer"]);
            }
        }
        if paren {
            self.expect(')')?;
        }
        Ok(Exponent::new(if neg { -n } else { n }, d))
    }

    fn eps_power(&mut self) -> Result<Exponent> {
        if self.eat('^') {
            self.exponent()
        } else {
            Ok(Exponent::one())
        }
    }

    fn factor(&mut self) -> Result<RationalFunction> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                e
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                RationalFunction::constant(FieldElement::from_rational(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => match self.ident().expect("alphabetic") {
                "eps" => {
                    let e = self.eps_power()?;
                    return Ok(RationalFunction::constant(FieldElement::eps_pow(e)));
                }
                "O" if self.peek() == Some('(') => {
                    self.pos += 1;
                    let at = self.pos;
                    if self.ident() != Some("eps") {
                        return fail(at, &["'eps'"]);
                    }
                    let e = self.eps_power()?;
                    self.expect(')')?;
                    return Ok(RationalFunction::constant(FieldElement::big_o(e)));
                }
                name => Polynomial::var(name).into(),
            },
            _ => return fail(start, &["integer", "'eps'", "identifier", "'('", "'-'"]),
        };
        if !self.eat('^') {
            return Ok(base);
        }
        let at = {
            self.skip_ws();
            self.pos
        };
        let e = self.exponent()?;
        if !e.is_integer() {
            return fail(at, &["integer exponent"]);
        }
        let n = e.to_integer();
        let k = u32::try_from(n.unsigned_abs()).or_else(|_| fail(at, &["smaller exponent"]))?;
        if n >= 0 {
            Ok(base.pow(k))
        } else {
            base.recip().map(|r| r.pow(k)).or_else(|_| fail(at, &["nonzero base"]))
        }
    }
}

fn parse_raw(text: &str) -> Result<RationalFunction> {
    let mut p = Parser { src: text, pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return fail(p.pos, &["'+'", "'-'", "'*'", "'/'", "end of input"]);
    }
    Ok(value)
}

/// Parses `text` and classifies it.
pub fn parse_expression(text: &str) -> Result<Parsed> {
    let f = parse_raw(text)?;
    if f.vars().is_empty() {
        let n = f.num().as_constant().unwrap_or_else(FieldElement::zero);
        let d = f.den().as_constant().unwrap_or_else(FieldElement::one);
        let c = if d == FieldElement::one() { n } else { &n * &d.invert()? };
        return Ok(Parsed::Scalar(c));
    }
    Ok(match f.as_polynomial() {
        Some(p) => Parsed::Polynomial(p),
        None => Parsed::Rational(f),
    })
}

pub fn parse_field_element(text: &str) -> Result<FieldElement> {
    match parse_expression(text)? {
        Parsed::Scalar(c) => Ok(c),
        _ => Err(Error::Invalid(format!("`{text}` is not a constant"))),
    }
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    match parse_expression(text)? {
        Parsed::Scalar(c) => Ok(Polynomial::constant(c)),
        Parsed::Polynomial(p) => Ok(p),
        Parsed::Rational(_) => Err(Error::Invalid(format!("`{text}` is not a polynomial"))),
    }
}

/// Parses `text` as an unreduced quotient; constants are not collapsed.
pub fn parse_rational_function(text: &str) -> Result<RationalFunction> {
    parse_raw(text)
}

/// Coordinates as strings, keyed by variable name, in `names` order.
pub fn parse_point(names: &[String], coords: &[String]) -> Result<Vec<FieldElement>> {
    if names.len() != coords.len() {
        return Err(Error::ArityMismatch { expected: names.len(), got: coords.len() });
    }
    coords.iter().map(|c| parse_field_element(c)).collect()
}
