use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial over a fixed number of variables.
///
/// The `Ord` impl is graded reverse lexicographic order, which is the
/// canonical storage and printing order for [`Polynomial`](super::Polynomial).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial { exps: vec![0; arity].into_boxed_slice() }
    }

    /// The monomial `x_var` (0-based).
    pub fn var(arity: usize, var: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[var] = 1;
        Monomial { exps: exps.into_boxed_slice() }
    }

    pub fn from_exponents(exps: impl Into<Vec<u32>>) -> Self {
        Monomial { exps: exps.into().into_boxed_slice() }
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), other.arity());
        Monomial {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
        }
    }

    /// `true` if `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other`, or `None` if `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables `range` of `self`, as a monomial of smaller arity.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Monomial {
        Monomial { exps: self.exps[range].into() }
    }

    /// Reinterpret in a ring of `arity` variables, shifting variable `v` to `v + offset`.
    pub fn embed(&self, arity: usize, offset: usize) -> Monomial {
        let mut exps = vec![0; arity];
        exps[offset..offset + self.arity()].copy_from_slice(&self.exps);
        Monomial { exps: exps.into_boxed_slice() }
    }
}

/// Graded reverse lexicographic comparison.
pub fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b.iter()).rev() {
            if x != y {
                // smaller exponent in the last differing variable is larger
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex(&self.exps, &other.exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_basics() {
        let m = |e: &[u32]| Monomial::from_exponents(e.to_vec());
        // degree first
        assert!(m(&[0, 0, 2]) > m(&[1, 0, 0]));
        // x1 > x2 > x3
        assert!(m(&[1, 0, 0]) > m(&[0, 1, 0]));
        assert!(m(&[0, 1, 0]) > m(&[0, 0, 1]));
        // x1*x3 < x2^2 in grevlex
        assert!(m(&[1, 0, 1]) < m(&[0, 2, 0]));
        assert!(m(&[0, 0, 0]) < m(&[0, 0, 1]));
    }

    #[test]
    fn division_and_lcm() {
        let a = Monomial::from_exponents(vec![2, 1, 0]);
        let b = Monomial::from_exponents(vec![1, 1, 0]);
        assert!(b.divides(&a));
        assert_eq!(a.div(&b), Some(Monomial::from_exponents(vec![1, 0, 0])));
        assert_eq!(b.div(&a), None);
        let c = Monomial::from_exponents(vec![0, 3, 1]);
        assert_eq!(a.lcm(&c), Monomial::from_exponents(vec![2, 3, 1]));
        assert!(!a.is_coprime(&c));
        assert!(Monomial::var(3, 0).is_coprime(&Monomial::var(3, 2)));
    }
}
