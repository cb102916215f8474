//! Exact sparse multivariate polynomials over the rationals.

mod display;
mod monomial;
mod parse;
mod polynomial;

pub use display::PolyDisplay;
pub use monomial::{grevlex, Monomial};
pub use parse::{parse_polynomial, parse_polynomial_in};
pub(crate) use parse::parse_at;
pub use polynomial::Polynomial;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::error::Error;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(p("x1 + x2", 2) + p("-x2", 2), p("x1", 2));
        assert_eq!(p("x1^2 - 3", 2) + Polynomial::zero(2), p("x1^2 - 3", 2));
        assert_eq!(p("x1^2", 2) + p("x1^2", 2), p("2*x1^2", 2));
        assert!(matches!(p("x1", 1).try_add(&p("x1", 2)), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("x1 + x2", 2) * p("x1 - x2", 2), p("x1^2 - x2^2", 2));
        let q = p("3*x1*x2 - 1/2", 2);
        assert_eq!(&q * &Polynomial::one(2), q);
        assert!(p("x1", 1).try_mul(&p("x1", 2)).is_err());
    }

    /// Naive multinomial expansion of `(sum c_v x_v)^3` for comparison with
    /// repeated multiplication.
    fn cube_by_multinomial(coeffs: &[(usize, Rational)], arity: usize) -> Polynomial {
        let mut terms = Vec::new();
        for (a, ca) in coeffs {
            for (b, cb) in coeffs {
                for (c, cc) in coeffs {
                    let mut e = vec![0u32; arity];
                    e[*a] += 1;
                    e[*b] += 1;
                    e[*c] += 1;
                    terms.push((Monomial::from_exponents(e), ca * cb * cc));
                }
            }
        }
        Polynomial::from_terms(arity, terms)
    }

    #[test]
    fn druzkowski_cube_expansion() {
        // the first linear form of the 13-dimensional fixture
        let coeffs = vec![
            (3, rational(1, 6)),
            (4, rational(1, 6)),
            (5, rational(-1, 3)),
            (6, rational(-1, 6)),
            (7, rational(-1, 6)),
            (8, rational(1, 3)),
            (12, integer(1)),
        ];
        let lin = Polynomial::from_terms(
            13,
            coeffs.iter().map(|(v, c)| (Monomial::var(13, *v), c.clone())),
        );
        let cube = &(&lin * &lin) * &lin;
        assert_eq!(cube, cube_by_multinomial(&coeffs, 13));
        assert_eq!(cube.num_terms(), 84);
        let mut e = vec![0u32; 13];
        e[3] = 3;
        let x4_cubed = Monomial::from_exponents(e);
        let c = cube.terms().iter().find(|(m, _)| *m == x4_cubed).unwrap().1.clone();
        assert_eq!(c, rational(1, 216));
        assert_eq!(lin.pow(3), cube);
    }

    #[test]
    fn partial_derivative_examples() {
        assert_eq!(p("x1^3", 1).partial_derivative(0).unwrap(), p("3*x1^2", 1));
        assert_eq!(p("x2", 2).partial_derivative(0).unwrap(), Polynomial::zero(2));
        // Nagata's second component, expanded: x2 + x1*x3^2 + x2^2*x3
        let f2 = p("x2 + x3*(x3*x1 + x2^2)", 3);
        assert_eq!(f2, p("x2 + x1*x3^2 + x2^2*x3", 3));
        assert_eq!(f2.partial_derivative(2).unwrap(), p("2*x3*x1 + x2^2", 3));
        assert!(matches!(
            f2.partial_derivative(3),
            Err(Error::VariableOutOfRange { index: 3, arity: 3 })
        ));
    }

    #[test]
    fn exact_divide_examples() {
        assert_eq!(p("x1^2 - x2^2", 2).exact_divide(&p("x1 - x2", 2)).unwrap(), p("x1 + x2", 2));
        let q = p("x1^3*x2 - 7", 2);
        assert_eq!(q.exact_divide(&Polynomial::one(2)).unwrap(), q);
        assert_eq!(Polynomial::zero(2).exact_divide(&q).unwrap(), Polynomial::zero(2));
        assert!(matches!(q.exact_divide(&p("x1 + 1", 2)), Err(Error::InexactDivision)));
        assert!(matches!(q.exact_divide(&Polynomial::zero(2)), Err(Error::DivisionByZero)));
        assert_eq!(p("4*x1", 1).exact_divide(&p("2", 1)).unwrap(), p("2*x1", 1));
    }

    #[test]
    fn substitute_examples() {
        let s = p("x1 + x2", 2);
        assert_eq!(s.substitute(&[p("x2", 2), p("x1", 2)]).unwrap(), s);
        let ident: Vec<_> = (0..2).map(|v| Polynomial::var(2, v)).collect();
        let q = p("x1^2*x2 - 5*x2 + 1/3", 2);
        assert_eq!(q.substitute(&ident).unwrap(), q);
        assert!(q.substitute(&[p("x1", 2)]).is_err());
        assert!(q.substitute(&[p("x1", 2), p("x1", 3)]).is_err());

        // -2*y3^5 composed with Nagata's F gives -2*x3^5
        let nagata = [
            p("x1 - 2*x2*(x3*x1 + x2^2) - x3*(x3*x1 + x2^2)^2", 3),
            p("x2 + x3*(x3*x1 + x2^2)", 3),
            p("x3", 3),
        ];
        let g = parse_polynomial_in("-2*y3^5", 3, 'y').unwrap();
        assert_eq!(g.substitute(&nagata).unwrap(), p("-2*x3^5", 3));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p("x1*x2", 2).evaluate(&[integer(2), integer(3)]).unwrap(), integer(6));
        assert_eq!(Polynomial::zero(2).evaluate(&[rational(7, 3), integer(-1)]).unwrap(), integer(0));
        assert!(p("x1", 2).evaluate(&[integer(1)]).is_err());
    }

    #[test]
    fn embed_and_restrict() {
        let q = p("x1*x2^2 - x2", 2);
        let e = q.embed(4, 2);
        assert_eq!(e, p("x3*x4^2 - x4", 4));
        assert_eq!(e.restrict(2..4), Some(q.clone()));
        assert_eq!(e.restrict(0..2), None);
    }

    fn small_poly(arity: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(
            (prop::collection::vec(0u32..=2, arity), -5i64..=5, 1i64..=3),
            0..5,
        )
        .prop_map(move |terms| {
            Polynomial::from_terms(
                arity,
                terms.into_iter().map(|(e, n, d)| (Monomial::from_exponents(e), rational(n, d))),
            )
        })
    }

    fn point(arity: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| rational(n, d)), arity)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in small_poly(3), b in small_poly(3), c in small_poly(3)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn leibniz(a in small_poly(3), b in small_poly(3), v in 0usize..3) {
            let lhs = (&a * &b).partial_derivative(v).unwrap();
            let rhs = &(&a * &b.partial_derivative(v).unwrap()) + &(&b * &a.partial_derivative(v).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitution_composes(
            q in small_poly(2),
            g in prop::collection::vec(small_poly(2), 2),
            h in prop::collection::vec(small_poly(3), 2),
        ) {
            let lhs = q.substitute(&g).unwrap().substitute(&h).unwrap();
            let gh: Vec<_> = g.iter().map(|gi| gi.substitute(&h).unwrap()).collect();
            prop_assert_eq!(lhs, q.substitute(&gh).unwrap());
        }

        #[test]
        fn exact_divide_inverts_mul(a in small_poly(3), b in small_poly(3)) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), a);
        }

        #[test]
        fn evaluation_is_a_homomorphism(
            a in small_poly(2),
            b in small_poly(2),
            g in prop::collection::vec(small_poly(2), 2),
            pt in point(2),
        ) {
            let ev = |q: &Polynomial| q.evaluate(&pt).unwrap();
            prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
            prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
            let inner: Vec<_> = g.iter().map(ev).collect();
            prop_assert_eq!(ev(&a.substitute(&g).unwrap()), a.evaluate(&inner).unwrap());
        }

        #[test]
        fn text_round_trip(a in small_poly(3)) {
            prop_assert_eq!(parse_polynomial(&a.to_string(), 3).unwrap(), a);
        }
    }
}
