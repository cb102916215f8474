use std::fmt;

use num_traits::{One, Signed};

use super::{Monomial, Polynomial};

/// Renders a polynomial in the canonical text grammar with a chosen
/// variable name, e.g. `x` for `x1`, `y` for `y1`, `F` for `F1`.
pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    letter: &'a str,
}

impl Polynomial {
    pub fn display_with<'a>(&'a self, letter: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, letter }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, letter: &str) -> fmt::Result {
    let mut first = true;
    for (v, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "{letter}{}", v + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.poly.terms().iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, m, self.letter)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.display_with("x"), f)
    }
}
