//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ['/' integer] | variable | '(' expr ')'
//! ```
//!
//! Variables are a letter followed by a 1-based index (`x1`, `X12`). The
//! letter is chosen by the caller and matched case-insensitively. Implicit
//! multiplication (`2x1`) is rejected.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Parse a polynomial in `x1..x{arity}`.
pub fn parse_polynomial(text: &str, arity: usize) -> Result<Polynomial> {
    parse_polynomial_in(text, arity, 'x')
}

/// Parse a polynomial whose variables use `letter` (e.g. `'y'` or `'F'`).
pub fn parse_polynomial_in(text: &str, arity: usize, letter: char) -> Result<Polynomial> {
    parse_at(text, arity, letter, 1, 1)
}

/// Parse with error positions reported relative to `(line, column)`.
pub(crate) fn parse_at(
    text: &str,
    arity: usize,
    letter: char,
    line: usize,
    column: usize,
) -> Result<Polynomial> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        arity,
        letter: letter.to_ascii_lowercase(),
        line,
        column,
    };
    parser.skip_ws();
    if parser.at_end() {
        return Err(parser.error("empty polynomial"));
    }
    let p = parser.expr()?;
    parser.skip_ws();
    if !parser.at_end() {
        let c = parser.chars[parser.pos];
        return Err(parser.error(format!("unexpected character '{c}'")));
    }
    Ok(p)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    arity: usize,
    letter: char,
    line: usize,
    column: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.column + self.pos, message: message.into() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            Some('-') => {
                self.pos += 1;
                -self.term()?
            }
            _ => self.term()?,
        };
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                self.pos = start;
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let exp: u32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn reject_implicit_mul(&mut self) -> Result<()> {
        if let Some(c) = self.chars.get(self.pos) {
            if c.is_alphabetic() || *c == '(' {
                return Err(self.error("implicit multiplication is not allowed; use '*'"));
            }
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.error("unexpected end of input")),
        };
        if c == '(' {
            self.pos += 1;
            let inner = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(inner);
        }
        if c.is_ascii_digit() {
            let num: BigInt = self.digits().parse().expect("digit string");
            let mut value = Rational::from_integer(num);
            // a rational literal `a/b` has no whitespace around the slash
            if self.chars.get(self.pos) == Some(&'/') {
                self.pos += 1;
                let den = self.digits();
                if den.is_empty() {
                    return Err(self.error("expected a denominator after '/'"));
                }
                let den: BigInt = den.parse().expect("digit string");
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                value /= Rational::from_integer(den);
            }
            self.reject_implicit_mul()?;
            return Ok(Polynomial::constant(self.arity, value));
        }
        if c.to_ascii_lowercase() == self.letter {
            let start = self.pos;
            self.pos += 1;
            let digits = self.digits();
            if digits.is_empty() {
                self.pos = start;
                return Err(self.error(format!("expected a variable index after '{c}'")));
            }
            let index: usize = digits.parse().map_err(|_| self.error("variable index too large"))?;
            if index == 0 || index > self.arity {
                self.pos = start;
                return Err(self.error(format!(
                    "variable {c}{index} out of range (valid: {}1..{}{})",
                    self.letter, self.letter, self.arity
                )));
            }
            self.reject_implicit_mul()?;
            return Ok(Polynomial::var(self.arity, index - 1));
        }
        Err(self.error(format!("unexpected character '{c}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 3).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(p("-x1^2"), -(p("x1") * p("x1")));
        assert_eq!(p("2*x1 + 3*x2*x3"), p("x2*x3*3 + x1*2"));
        assert_eq!(p("(x1+x2)^2"), p("x1^2 + 2*x1*x2 + x2^2"));
        assert_eq!(p("x1 - x2 - x3"), p("x1 - (x2 + x3)"));
        assert_eq!(p("1/6*x1*6"), p("x1"));
        assert_eq!(p("X1 + x1"), p("2*x1"));
        assert_eq!(p("x1^0"), p("1"));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["2x1", "x1 x2", "x4", "x0", "x1^", "x1^-1", "(x1", "1/0", "", "x1 +", "y1", "2(x1)"] {
            assert!(
                matches!(parse_polynomial(bad, 3), Err(Error::Parse { .. })),
                "accepted {bad:?}"
            );
        }
    }

    #[test]
    fn implicit_multiplication_position() {
        match parse_polynomial("x1 + 2x2", 2) {
            Err(Error::Parse { line: 1, column, message }) => {
                assert_eq!(column, 7);
                assert!(message.contains("implicit multiplication"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_letters() {
        let q = parse_polynomial_in("4*F2*F3^4 - 2*F3^3", 3, 'F').unwrap();
        assert_eq!(q, p("4*x2*x3^4 - 2*x3^3"));
        assert!(parse_polynomial_in("y1", 1, 'y').is_ok());
    }
}
