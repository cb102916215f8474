use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Monomial, Rational};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted in descending graded reverse lexicographic order
/// and no stored coefficient is zero, so structural equality is polynomial
/// equality. The zero polynomial has no terms but still carries its arity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    arity: usize,
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial { arity, terms: Vec::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(arity);
        }
        Polynomial { arity, terms: vec![(Monomial::one(arity), c)] }
    }

    pub fn from_integer(arity: usize, c: i64) -> Self {
        Self::constant(arity, Rational::from_integer(c.into()))
    }

    /// The variable `x_{var+1}` (0-based index).
    pub fn var(arity: usize, var: usize) -> Self {
        assert!(var < arity, "variable {var} out of range for arity {arity}");
        Polynomial { arity, terms: vec![(Monomial::var(arity, var), Rational::one())] }
    }

    pub fn monomial(mono: Monomial, c: Rational) -> Self {
        let arity = mono.arity();
        if c.is_zero() {
            return Self::zero(arity);
        }
        Polynomial { arity, terms: vec![(mono, c)] }
    }

    /// Build from arbitrary terms; merges duplicates and drops zeros.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.arity(), arity, "monomial arity mismatch");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(arity, acc)
    }

    fn from_map(arity: usize, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { arity, terms }
    }

    pub(crate) fn from_sorted_terms(arity: usize, terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Terms in descending graded reverse lexicographic order.
    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The value of a constant polynomial (zero included), `None` otherwise.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    /// `true` if every variable with a nonzero exponent lies in `vars`.
    pub fn only_uses(&self, vars: std::ops::Range<usize>) -> bool {
        self.terms.iter().all(|(m, _)| {
            m.exponents().iter().enumerate().all(|(v, &e)| e == 0 || vars.contains(&v))
        })
    }

    fn check_arity(&self, other: &Polynomial) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: other.arity });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        Ok(self.merge(other, |c| c.clone()))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        Ok(self.merge(other, |c| -c))
    }

    // self + f(other), term-wise merge of two sorted lists
    fn merge(&self, other: &Polynomial, f: impl Fn(&Rational) -> Rational) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                    Ordering::Greater => {
                        out.push((ma.clone(), ca.clone()));
                        a.next();
                    }
                    Ordering::Less => {
                        out.push((mb.clone(), f(cb)));
                        b.next();
                    }
                    Ordering::Equal => {
                        let c = ca + f(cb);
                        if !c.is_zero() {
                            out.push((ma.clone(), c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((m, c)), None) => {
                    out.push((m.clone(), c.clone()));
                    a.next();
                }
                (None, Some((m, c))) => {
                    out.push((m.clone(), f(c)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Polynomial { arity: self.arity, terms: out }
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.arity));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Ok(Self::from_map(self.arity, acc))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiply by `c * mono`.
    pub fn mul_term(&self, mono: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        // multiplication by a monomial preserves the order
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial {
        let mut result = Polynomial::one(self.arity);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to `x_{var+1}`.
    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.arity {
            return Err(Error::VariableOutOfRange { index: var, arity: self.arity });
        }
        let terms = self.terms.iter().filter(|(m, _)| m.exponent(var) > 0).map(|(m, c)| {
            let e = m.exponent(var);
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            (Monomial::from_exponents(exps), c * Rational::from_integer(e.into()))
        });
        // dividing by x_var is order-preserving on the surviving terms
        Ok(Polynomial::from_sorted_terms(self.arity, terms.collect()))
    }

    /// Quotient of an exact division; fails if `divisor` does not divide `self`.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_arity(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        if let Some(c) = divisor.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.terms.first() {
            let q_mono = m.div(lm).ok_or(Error::InexactDivision)?;
            let q_coeff = c / lc;
            rem = rem.merge(&divisor.mul_term(&q_mono, &q_coeff), |c| -c);
            quotient.push((q_mono, q_coeff));
        }
        // quotient terms come out in strictly descending order
        Ok(Polynomial::from_sorted_terms(self.arity, quotient))
    }

    /// Replace variable `i` by `images[i]` and expand.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.arity,
            None => return Ok(self.clone()),
        };
        if let Some(bad) = images.iter().find(|p| p.arity != target) {
            return Err(Error::ArityMismatch { left: target, right: bad.arity });
        }
        // powers[v][e] = images[v]^e, filled on demand
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|_| vec![Polynomial::one(target)]).collect();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap() * &images[v];
                    powers[v].push(next);
                }
                term = &term * &powers[v][e as usize];
            }
            for (tm, tc) in term.terms {
                *acc.entry(tm).or_insert_with(Rational::zero) += tc;
            }
        }
        Ok(Self::from_map(target, acc))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: point.len() });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Reinterpret in a ring of `arity` variables, mapping `x_v` to `x_{v+offset}`.
    pub fn embed(&self, arity: usize, offset: usize) -> Polynomial {
        assert!(offset + self.arity <= arity, "embedding does not fit");
        Polynomial::from_terms(arity, self.terms.iter().map(|(m, c)| (m.embed(arity, offset), c.clone())))
    }

    /// Inverse of [`embed`](Self::embed): keep variables `range`, which must
    /// be the only ones present.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Option<Polynomial> {
        if !self.only_uses(range.clone()) {
            return None;
        }
        let arity = range.len();
        Some(Polynomial::from_terms(
            arity,
            self.terms.iter().map(|(m, c)| (m.slice(range.clone()), c.clone())),
        ))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial arity mismatch in add")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial arity mismatch in sub")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial arity mismatch in mul")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for (_, c) in &mut self.terms {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(mut iter: I) -> Polynomial {
        let first = iter.next().expect("sum of an empty polynomial iterator has no arity");
        iter.fold(first, |acc, p| acc + p)
    }
}
