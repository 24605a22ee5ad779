//! Recursive-descent parser for polynomial expressions in `x, z, t, s`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' uint)?
//! atom   := uint ('/' uint)? | var | '(' expr ')'
//! ```

use alloc::collections::BTreeMap;
use alloc::string::String;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{PolyError, Rational};

/// Exponents of `(x, z, t, s)`.
pub type Exp4 = [u32; 4];

/// Polynomial in the four homogeneous coordinates of P1 x P1.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly4 {
    pub terms: BTreeMap<Exp4, Rational>,
}

impl Poly4 {
    fn constant(c: Rational) -> Self {
        let mut p = Poly4::default();
        p.add_term([0; 4], c);
        p
    }

    fn var(idx: usize) -> Self {
        let mut e = [0; 4];
        e[idx] = 1;
        let mut p = Poly4::default();
        p.add_term(e, Rational::one());
        p
    }

    pub fn add_term(&mut self, e: Exp4, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn add(mut self, other: &Self, sign: bool) -> Self {
        for (&e, c) in &other.terms {
            self.add_term(e, if sign { c.clone() } else { -c.clone() });
        }
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly4::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Poly4::constant(Rational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `(deg in t,s ; deg in x,z)` when every term agrees on both.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|e| (e[2] + e[3], e[0] + e[1]));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

const MAX_EXPONENT: u32 = 4096;

pub fn parse_poly4(text: &str) -> Result<Poly4, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            position: self.pos,
            message: String::from(msg),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly4, PolyError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.add(&rhs, c == b'+');
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly4, PolyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly4, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let inner = self.unary()?;
                Ok(Poly4::default().add(&inner, false))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly4, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.uint()?;
            let n: u32 = u32::try_from(&n)
                .ok()
                .filter(|&n| n <= MAX_EXPONENT)
                .ok_or_else(|| self.error("exponent too large"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a non-negative integer"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Poly4, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    return Ok(Poly4::constant(Rational::new(num, den)));
                }
                Ok(Poly4::constant(Rational::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                let idx = match name {
                    b"x" => 0,
                    b"z" => 1,
                    b"t" => 2,
                    b"s" => 3,
                    _ => {
                        return Err(PolyError::UnknownVariable {
                            position: start,
                            name: String::from_utf8_lossy(name).into_owned(),
                        })
                    }
                };
                Ok(Poly4::var(idx))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_products() {
        let p = parse_poly4("(x+t)^2 - x^2 - 2*x*t - t^2").unwrap();
        assert!(p.terms.is_empty());
    }

    #[test]
    fn rational_literal() {
        let p = parse_poly4("1/2*x - 3/6*x").unwrap();
        assert!(p.terms.is_empty());
    }

    #[test]
    fn reports_position() {
        match parse_poly4("x + * t") {
            Err(PolyError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_poly4("x + y") {
            Err(PolyError::UnknownVariable { position, name }) => {
                assert_eq!(position, 4);
                assert_eq!(name, "y");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly4("(x").is_err());
        assert!(parse_poly4("x^").is_err());
        assert!(parse_poly4("1/0").is_err());
    }

    #[test]
    fn bidegree_detection() {
        let p = parse_poly4("t*s*(s^2*x^6 + s*t*x^3*z^3 + t^2*z^6)").unwrap();
        assert_eq!(p.bidegree(), Some((4, 6)));
        assert_eq!(parse_poly4("x + t").unwrap().bidegree(), None);
    }
}
