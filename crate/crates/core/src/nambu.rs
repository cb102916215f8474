//! Nambu derivations of a polynomial map and their derivative tables.
//!
//! For `F` with `det J_F = 1` the derivations are
//! `δ_k = Σ_r (J_F^{-1})[r][k] ∂/∂x_r`, characterised by `δ_k F_j = [k = j]`.
//! The first-order table holds `δ_i x_j = (J_F^{-1})[j][i]`; the second-order
//! table holds `δ_k δ_i x_j`, stored once per unordered pair `{k, i}`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polymatrix::PolyMatrix;
use crate::polyring::{Polynomial, Rational};

/// `F = (F_1, ..., F_n)`, each component a polynomial in `x1..xn`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolynomialMap {
    components: Vec<Polynomial>,
    label: String,
}

impl PolynomialMap {
    pub fn new(components: Vec<Polynomial>, label: impl Into<String>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("a map needs at least one component".into()));
        }
        if let Some(bad) = components.iter().find(|p| p.arity() != n) {
            return Err(Error::ArityMismatch { left: n, right: bad.arity() });
        }
        Ok(PolynomialMap { components, label: label.into() })
    }

    pub fn identity(n: usize) -> Self {
        let components = (0..n).map(|v| Polynomial::var(n, v)).collect();
        PolynomialMap { components, label: format!("identity{n}") }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn jacobian(&self) -> PolyMatrix {
        let n = self.n();
        PolyMatrix::from_fn(n, n, n, |r, c| {
            self.components[r].partial_derivative(c).expect("index within arity")
        })
    }

    /// `F(inner)`, i.e. `substitute(F_i, inner)` for each component.
    pub fn compose(&self, inner: &[Polynomial]) -> Result<Vec<Polynomial>> {
        self.components.iter().map(|f| f.substitute(inner)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct JacobianData {
    pub jacobian: PolyMatrix,
    /// The constant `det J_F`.
    pub det: Rational,
    /// `adj(J_F) / det`, a polynomial matrix.
    pub inverse_jacobian: PolyMatrix,
}

/// Jacobian, its constant determinant, and its polynomial inverse.
pub fn jacobian_data(map: &PolynomialMap) -> Result<JacobianData> {
    let jacobian = map.jacobian();
    let det_poly = jacobian.determinant()?;
    let det = match det_poly.constant_value() {
        Some(c) if c.is_zero() => return Err(Error::SingularJacobian),
        Some(c) => c,
        None => return Err(Error::NotConstantJacobian(det_poly)),
    };
    let inverse_jacobian = jacobian.adjugate()?.scale(&det.recip());
    Ok(JacobianData { jacobian, det, inverse_jacobian })
}

/// Rescale `F_1` by `1/c` so the Jacobian determinant becomes 1.
pub fn normalize_to_unit_jacobian(map: &PolynomialMap) -> Result<PolynomialMap> {
    let c = jacobian_data(map)?.det;
    Ok(rescale_first(map, &c))
}

pub(crate) fn rescale_first(map: &PolynomialMap, c: &Rational) -> PolynomialMap {
    if c.is_one() {
        return map.clone();
    }
    let mut components = map.components.clone();
    components[0] = components[0].scale(&c.recip());
    PolynomialMap { components, label: map.label.clone() }
}

/// Position of the unordered pair `{a, b}` in the packed second-order table.
fn pair_index(a: usize, b: usize) -> usize {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    hi * (hi + 1) / 2 + lo
}

#[derive(Clone, Debug)]
pub struct DerivationTables {
    n: usize,
    inverse_jacobian: PolyMatrix,
    first: PolyMatrix,
    second: Vec<Vec<Polynomial>>,
}

impl DerivationTables {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inverse_jacobian(&self) -> &PolyMatrix {
        &self.inverse_jacobian
    }

    /// `δ_k(g)` (0-based `k`).
    pub fn apply(&self, k: usize, g: &Polynomial) -> Result<Polynomial> {
        nambu_apply(&self.inverse_jacobian, k, g)
    }

    /// `δ_i x_j`.
    pub fn first(&self, i: usize, j: usize) -> &Polynomial {
        self.first.get(i, j)
    }

    /// The matrix `[δ_i x_j]`; its determinant is 1.
    pub fn first_matrix(&self) -> &PolyMatrix {
        &self.first
    }

    /// `δ_k δ_i x_j`, symmetric in `k` and `i`.
    pub fn second(&self, k: usize, i: usize, j: usize) -> &Polynomial {
        &self.second[pair_index(k, i)][j]
    }

    /// The row `(δ_k δ_i x_1, ..., δ_k δ_i x_n)`.
    pub fn second_row(&self, k: usize, i: usize) -> &[Polynomial] {
        &self.second[pair_index(k, i)]
    }

    /// Recompute `δ_i δ_k x_j` in the opposite order for each listed pair
    /// and compare with the stored table.
    pub fn verify_commutativity(&self, pairs: &[(usize, usize)]) -> Result<()> {
        let jobs: Vec<(usize, usize, usize)> =
            pairs.iter().flat_map(|&(k, i)| (0..self.n).map(move |j| (k, i, j))).collect();
        jobs.par_iter().try_for_each(|&(k, i, j)| {
            let (lo, hi) = if k <= i { (k, i) } else { (i, k) };
            let swapped = self.apply(hi, self.first(lo, j))?;
            if &swapped != self.second(lo, hi, j) {
                return Err(Error::NonCommutingDerivations { k: lo, i: hi, j });
            }
            Ok(())
        })
    }
}

/// `δ_k(g) = Σ_r inverse_jacobian[r][k] · ∂g/∂x_r`.
pub fn nambu_apply(inverse_jacobian: &PolyMatrix, k: usize, g: &Polynomial) -> Result<Polynomial> {
    let n = inverse_jacobian.rows();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, size: n });
    }
    if g.arity() != n {
        return Err(Error::ArityMismatch { left: n, right: g.arity() });
    }
    let mut acc = Polynomial::zero(n);
    for r in 0..n {
        let coeff = inverse_jacobian.get(r, k);
        if coeff.is_zero() {
            continue;
        }
        let d = g.partial_derivative(r)?;
        if !d.is_zero() {
            acc = acc + coeff * &d;
        }
    }
    Ok(acc)
}

/// Pairs whose commutativity is re-derived during [`build_tables`]: all of
/// them up to `n = 4`, consecutive pairs above.
fn commutativity_sample(n: usize) -> Vec<(usize, usize)> {
    if n <= 4 {
        (0..n).flat_map(|k| (k + 1..n).map(move |i| (k, i))).collect()
    } else {
        (0..n - 1).map(|k| (k, k + 1)).collect()
    }
}

/// First- and second-order derivative tables for a map with `det J_F = 1`.
pub fn build_tables(map: &PolynomialMap) -> Result<DerivationTables> {
    let data = jacobian_data(map)?;
    if !data.det.is_one() {
        return Err(Error::NonUnitJacobian(data.det));
    }
    tables_from_inverse(data.inverse_jacobian)
}

pub(crate) fn tables_from_inverse(inverse_jacobian: PolyMatrix) -> Result<DerivationTables> {
    let n = inverse_jacobian.rows();
    let first = inverse_jacobian.transpose();
    // canonical order: the smaller-index derivation is applied last
    let jobs: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|hi| (0..=hi).flat_map(move |lo| (0..n).map(move |j| (hi, lo, j))))
        .collect();
    let values = jobs
        .par_iter()
        .map(|&(hi, lo, j)| nambu_apply(&inverse_jacobian, lo, first.get(hi, j)))
        .collect::<Result<Vec<_>>>()?;
    let second: Vec<Vec<Polynomial>> = values.chunks(n).map(<[_]>::to_vec).collect();
    debug_assert_eq!(second.len(), n * (n + 1) / 2);
    let tables = DerivationTables { n, inverse_jacobian, first, second };
    tables.verify_commutativity(&commutativity_sample(n))?;
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{integer, parse_polynomial};

    fn map(parts: &[&str]) -> PolynomialMap {
        let n = parts.len();
        PolynomialMap::new(parts.iter().map(|s| parse_polynomial(s, n).unwrap()).collect(), "t").unwrap()
    }

    fn nagata() -> PolynomialMap {
        map(&["x1 - 2*x2*(x3*x1 + x2^2) - x3*(x3*x1 + x2^2)^2", "x2 + x3*(x3*x1 + x2^2)", "x3"])
    }

    #[test]
    fn pair_index_is_dense() {
        let mut seen: Vec<usize> = (0..5).flat_map(|a| (a..5).map(move |b| pair_index(a, b))).collect();
        seen.sort();
        assert_eq!(seen, (0..15).collect::<Vec<_>>());
        assert_eq!(pair_index(3, 1), pair_index(1, 3));
    }

    #[test]
    fn map_validation() {
        assert!(PolynomialMap::new(vec![], "e").is_err());
        let bad = vec![parse_polynomial("x1", 2).unwrap()];
        assert!(matches!(PolynomialMap::new(bad, "b"), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn jacobian_data_examples() {
        let id = jacobian_data(&PolynomialMap::identity(3)).unwrap();
        assert!(id.jacobian.is_identity());
        assert_eq!(id.det, integer(1));
        assert!(id.inverse_jacobian.is_identity());

        let nag = jacobian_data(&nagata()).unwrap();
        assert_eq!(nag.det, integer(1));
        assert!(nag.jacobian.matmul(&nag.inverse_jacobian).unwrap().is_identity());

        match jacobian_data(&map(&["x1", "x1*x2"])) {
            Err(Error::NotConstantJacobian(d)) => assert_eq!(d, parse_polynomial("x1", 2).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(jacobian_data(&map(&["x1 + x2", "2*x1 + 2*x2"])), Err(Error::SingularJacobian)));
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_to_unit_jacobian(&nagata()).unwrap(), nagata());
        assert_eq!(normalize_to_unit_jacobian(&map(&["2*x1", "x2"])).unwrap(), map(&["x1", "x2"]));
        let m = map(&["3*x1 + x2^2", "x2"]);
        assert_eq!(jacobian_data(&m).unwrap().det, integer(3));
        let unit = normalize_to_unit_jacobian(&m).unwrap();
        assert_eq!(unit, map(&["x1 + 1/3*x2^2", "x2"]));
        assert_eq!(jacobian_data(&unit).unwrap().det, integer(1));
        assert!(normalize_to_unit_jacobian(&map(&["x1", "x1*x2"])).is_err());
    }

    #[test]
    fn nambu_apply_examples() {
        let toy = map(&["x1", "x2 + x1^2"]);
        let t = build_tables(&toy).unwrap();
        let p = |s: &str| parse_polynomial(s, 2).unwrap();
        for k in 0..2 {
            for j in 0..2 {
                let expected = if k == j { Polynomial::one(2) } else { Polynomial::zero(2) };
                assert_eq!(t.apply(k, &toy.components()[j]).unwrap(), expected);
            }
        }
        // δ_1 = ∂_1 - 2 x1 ∂_2
        assert_eq!(t.apply(0, &p("x2")).unwrap(), p("-2*x1"));
        assert_eq!(t.apply(1, &p("x2")).unwrap(), p("1"));
        assert!(t.apply(0, &p("7/2")).unwrap().is_zero());
        assert!(matches!(t.apply(2, &p("x1")), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn table_examples() {
        let id = build_tables(&PolynomialMap::identity(3)).unwrap();
        assert!(id.first_matrix().is_identity());
        for k in 0..3 {
            for i in 0..3 {
                assert!(id.second_row(k, i).iter().all(Polynomial::is_zero));
            }
        }

        let toy = build_tables(&map(&["x1", "x2 + x1^2"])).unwrap();
        assert_eq!(toy.second_row(0, 0), &[Polynomial::zero(2), Polynomial::from_integer(2, -2)]);

        let nag = build_tables(&nagata()).unwrap();
        assert_eq!(nag.first(2, 2), &Polynomial::one(3));
        let data = jacobian_data(&nagata()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(nag.first(i, j), data.inverse_jacobian.get(j, i));
            }
        }
        assert_eq!(nag.first_matrix().determinant().unwrap(), Polynomial::one(3));
    }

    #[test]
    fn tables_require_unit_determinant() {
        assert!(matches!(build_tables(&map(&["2*x1", "x2"])), Err(Error::NonUnitJacobian(c)) if c == integer(2)));
    }

    #[test]
    fn leibniz_rule() {
        let t = build_tables(&nagata()).unwrap();
        let p = parse_polynomial("x1*x2 - x3^2 + 1/5*x1^2*x3", 3).unwrap();
        let q = parse_polynomial("x2^3 - 4*x1", 3).unwrap();
        for k in 0..3 {
            let lhs = t.apply(k, &(&p * &q)).unwrap();
            let rhs = &p * &t.apply(k, &q).unwrap() + &q * &t.apply(k, &p).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
