//! Matrices with polynomial entries.
//!
//! Determinants use cofactor expansion up to size 4. Larger matrices are
//! first eliminated on constant pivots, which keeps every entry polynomial,
//! and whatever block is left goes through fraction-free Bareiss.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polyring::{Polynomial, Rational};

/// Cofactor expansion is used at or below this size.
pub const COFACTOR_CUTOFF: usize = 4;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    arity: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    /// Row-major construction; all entries must share one arity.
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!("empty matrix {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let arity = entries[0].arity();
        if let Some(bad) = entries.iter().find(|p| p.arity() != arity) {
            return Err(Error::ArityMismatch { left: arity, right: bad.arity() });
        }
        Ok(PolyMatrix { rows, cols, arity, entries })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        arity: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let p = f(r, c);
                assert_eq!(p.arity(), arity, "entry ({r},{c}) has the wrong arity");
                entries.push(p);
            }
        }
        PolyMatrix { rows, cols, arity, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize, arity: usize) -> Self {
        Self::from_fn(n, n, arity, |r, c| {
            if r == c {
                Polynomial::one(arity)
            } else {
                Polynomial::zero(arity)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        assert_eq!(p.arity(), self.arity);
        self.entries[r * self.cols + c] = p;
    }

    pub fn row(&self, r: usize) -> &[Polynomial] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    fn to_rows(&self) -> Vec<Vec<Polynomial>> {
        self.entries.chunks(self.cols).map(<[_]>::to_vec).collect()
    }

    pub fn transpose(&self) -> PolyMatrix {
        Self::from_fn(self.cols, self.rows, self.arity, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        PolyMatrix { entries: self.entries.iter().map(|p| p.scale(c)).collect(), ..self.clone() }
    }

    pub fn matmul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: other.arity });
        }
        let entries = (0..self.rows * other.cols)
            .into_par_iter()
            .map(|idx| {
                let (r, c) = (idx / other.cols, idx % other.cols);
                (0..self.cols)
                    .filter(|&t| !self.get(r, t).is_zero() && !other.get(t, c).is_zero())
                    .map(|t| self.get(r, t) * other.get(t, c))
                    .fold(Polynomial::zero(self.arity), |acc, p| acc + p)
            })
            .collect();
        Ok(PolyMatrix { rows: self.rows, cols: other.cols, arity: self.arity, entries })
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    /// Matrix with row `skip_r` and column `skip_c` removed.
    pub fn minor(&self, skip_r: usize, skip_c: usize) -> PolyMatrix {
        assert!(self.rows > 1 && self.cols > 1, "minor of a matrix with a single row or column");
        Self::from_fn(self.rows - 1, self.cols - 1, self.arity, |r, c| {
            let rr = if r >= skip_r { r + 1 } else { r };
            let cc = if c >= skip_c { c + 1 } else { c };
            self.get(rr, cc).clone()
        })
    }

    pub fn determinant(&self) -> Result<Polynomial> {
        let n = self.require_square()?;
        if n <= COFACTOR_CUTOFF {
            return self.determinant_cofactor();
        }
        let (scalar, rest) = eliminate_constant_pivots(self.to_rows());
        if scalar.is_zero() || rest.is_empty() {
            return Ok(Polynomial::constant(self.arity, scalar));
        }
        let rest = PolyMatrix::from_rows(rest)?;
        let det = if rest.rows <= COFACTOR_CUTOFF {
            rest.determinant_cofactor()?
        } else {
            rest.determinant_bareiss()?
        };
        Ok(det.scale(&scalar))
    }

    /// Laplace expansion along rows; exponential, meant for small matrices.
    pub fn determinant_cofactor(&self) -> Result<Polynomial> {
        let n = self.require_square()?;
        let cols: Vec<usize> = (0..n).collect();
        Ok(self.laplace(0, &cols))
    }

    fn laplace(&self, row: usize, cols: &[usize]) -> Polynomial {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = Polynomial::zero(self.arity);
        let mut rest = Vec::with_capacity(cols.len() - 1);
        for (pos, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_zero() {
                continue;
            }
            rest.clear();
            rest.extend(cols.iter().copied().filter(|&x| x != c));
            let sub = &self.laplace(row + 1, &rest) * entry;
            acc = if pos % 2 == 0 { acc + sub } else { acc - sub };
        }
        acc
    }

    /// Fraction-free Bareiss elimination with row pivoting on the
    /// structurally simplest nonzero entry of each column.
    pub fn determinant_bareiss(&self) -> Result<Polynomial> {
        let n = self.require_square()?;
        let mut m = self.to_rows();
        let mut prev = Polynomial::one(self.arity);
        let mut negate = false;
        for k in 0..n - 1 {
            let Some(p) = choose_pivot(&m, k, k..n) else {
                return Ok(Polynomial::zero(self.arity));
            };
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            let (head, tail) = m.split_at_mut(k + 1);
            let pivot_row = &head[k];
            tail.par_iter_mut().try_for_each(|row| -> Result<()> {
                for j in k + 1..n {
                    let num = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                    row[j] = num.exact_divide(&prev)?;
                }
                row[k] = Polynomial::zero(self.arity);
                Ok(())
            })?;
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Transposed matrix of signed cofactors; `m * adj(m) = det(m) * I`.
    pub fn adjugate(&self) -> Result<PolyMatrix> {
        let n = self.require_square()?;
        if n > COFACTOR_CUTOFF {
            if let Some(inv) = self.unipotent_inverse()? {
                return Ok(inv);
            }
            if let Some(adj) = self.adjugate_constant_pivots() {
                return Ok(adj);
            }
            if let Some(adj) = self.adjugate_gauss_jordan()? {
                return Ok(adj);
            }
        }
        self.adjugate_by_minors()
    }

    /// Adjugate from the determinants of all `(n-1)x(n-1)` minors.
    pub fn adjugate_by_minors(&self) -> Result<PolyMatrix> {
        let n = self.require_square()?;
        if n == 1 {
            return Ok(PolyMatrix::identity(1, self.arity));
        }
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).collect();
        let cofactors = cells
            .par_iter()
            .map(|&(r, c)| {
                let d = self.minor(r, c).determinant()?;
                Ok(if (r + c) % 2 == 0 { d } else { -d })
            })
            .collect::<Result<Vec<_>>>()?;
        let cof = PolyMatrix { rows: n, cols: n, arity: self.arity, entries: cofactors };
        Ok(cof.transpose())
    }

    /// If `m - I` is nilpotent, `m^{-1} = Σ_k (I - m)^k`, a finite sum; this
    /// is also `adj(m)` because `det(m) = 1`. `None` if `(m - I)^n != 0`.
    pub fn unipotent_inverse(&self) -> Result<Option<PolyMatrix>> {
        let n = self.require_square()?;
        let eye = PolyMatrix::identity(n, self.arity);
        let step = eye.sub(self);
        let mut power = step.clone();
        let mut sum = eye.add(&step);
        for _ in 1..n {
            power = power.matmul(&step)?;
            if power.is_zero() {
                return Ok(Some(sum));
            }
            sum = sum.add(&power);
        }
        Ok(power.matmul(&step)?.is_zero().then_some(sum))
    }

    fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        PolyMatrix { entries, ..self.clone() }
    }

    fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        PolyMatrix { entries, ..self.clone() }
    }

    /// Gauss-Jordan on `[m | I]` that keeps every entry polynomial. Pivots
    /// are constants in any unused row and column; once none is left, the
    /// remaining block is inverted as a whole, which needs its determinant
    /// to be constant. `None` if it is not.
    pub fn adjugate_constant_pivots(&self) -> Option<PolyMatrix> {
        let n = self.rows;
        if !self.is_square() {
            return None;
        }
        let arity = self.arity;
        let mut aug = self.identity_augmented();
        let mut row_used = vec![false; n];
        let mut col_used = vec![false; n];
        // pivot_of_col[c] = row holding the pivot of column c
        let mut pivot_of_col = vec![0; n];
        let mut det = Rational::one();
        for _ in 0..n {
            let col_nnz: Vec<usize> =
                (0..n).map(|c| aug.iter().filter(|row| !row[c].is_zero()).count()).collect();
            let pivot = (0..n)
                .filter(|&r| !row_used[r])
                .flat_map(|r| (0..n).filter(|&c| !col_used[c]).map(move |c| (r, c)))
                .filter(|&(r, c)| aug[r][c].constant_value().is_some_and(|v| !v.is_zero()))
                .min_by_key(|&(r, c)| {
                    let row_terms: usize = aug[r].iter().map(Polynomial::num_terms).sum();
                    (row_terms * (col_nnz[c] - 1), r, c)
                });
            let Some((pr, pc)) = pivot else {
                let rows: Vec<usize> = (0..n).filter(|&r| !row_used[r]).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| !col_used[c]).collect();
                det *= block_pivot(&mut aug, &rows, &cols)?;
                for (&r, &c) in rows.iter().zip(&cols) {
                    pivot_of_col[c] = r;
                }
                break;
            };
            row_used[pr] = true;
            col_used[pc] = true;
            pivot_of_col[pc] = pr;
            let c = aug[pr][pc].constant_value().expect("constant pivot");
            let inv = c.recip();
            det *= &c;
            let pivot_row: Vec<Polynomial> = aug[pr].iter().map(|e| e.scale(&inv)).collect();
            aug.par_iter_mut().enumerate().filter(|(i, _)| *i != pr).for_each(|(_, row)| {
                if row[pc].is_zero() {
                    return;
                }
                let factor = row[pc].clone();
                for j in 0..2 * n {
                    if !pivot_row[j].is_zero() {
                        row[j] = &row[j] - &(&factor * &pivot_row[j]);
                    }
                }
            });
            aug[pr] = pivot_row;
        }
        // the left block is now the permutation matrix of pivot_of_col
        if permutation_is_odd(&pivot_of_col) {
            det = -det;
        }
        Some(PolyMatrix::from_fn(n, n, arity, |r, c| aug[pivot_of_col[r]][n + c].scale(&det)))
    }

    fn identity_augmented(&self) -> Vec<Vec<Polynomial>> {
        let n = self.rows;
        (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| {
                    if c == r {
                        Polynomial::one(self.arity)
                    } else {
                        Polynomial::zero(self.arity)
                    }
                }));
                row
            })
            .collect()
    }

    /// Fraction-free Gauss-Jordan elimination of `[m | I]`; the right block
    /// ends as `±adj(m)`. Returns `None` when `m` is singular.
    pub fn adjugate_gauss_jordan(&self) -> Result<Option<PolyMatrix>> {
        let n = self.require_square()?;
        let arity = self.arity;
        let mut aug = self.identity_augmented();
        let mut prev = Polynomial::one(arity);
        let mut negate = false;
        for k in 0..n {
            let Some(p) = choose_pivot(&aug, k, k..n) else {
                return Ok(None);
            };
            if p != k {
                aug.swap(p, k);
                negate = !negate;
            }
            let pivot_row = aug[k].clone();
            aug.par_iter_mut().enumerate().filter(|(i, _)| *i != k).try_for_each(
                |(_, row)| -> Result<()> {
                    for j in 0..2 * n {
                        if j == k {
                            continue;
                        }
                        let num = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                        row[j] = num.exact_divide(&prev)?;
                    }
                    row[k] = Polynomial::zero(arity);
                    Ok(())
                },
            )?;
            prev = aug[k][k].clone();
        }
        // left block is d*I with d = ±det(m), right block is d * m^{-1}
        let adj = PolyMatrix::from_fn(n, n, arity, |r, c| {
            let e = aug[r][n + c].clone();
            if negate {
                -e
            } else {
                e
            }
        });
        Ok(Some(adj))
    }

    /// Copy of `self` with row `row` replaced.
    pub fn with_row_replaced(&self, row: usize, replacement: &[Polynomial]) -> Result<PolyMatrix> {
        if row >= self.rows {
            return Err(Error::IndexOutOfRange { index: row, size: self.rows });
        }
        if replacement.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "replacement row has {} entries, matrix has {} columns",
                replacement.len(),
                self.cols
            )));
        }
        if let Some(bad) = replacement.iter().find(|p| p.arity() != self.arity) {
            return Err(Error::ArityMismatch { left: self.arity, right: bad.arity() });
        }
        let mut out = self.clone();
        out.entries[row * self.cols..(row + 1) * self.cols].clone_from_slice(replacement);
        Ok(out)
    }

    /// Determinant of `self` with row `row` replaced; `self` is untouched.
    pub fn row_replaced_determinant(&self, row: usize, replacement: &[Polynomial]) -> Result<Polynomial> {
        self.require_square()?;
        self.with_row_replaced(row, replacement)?.determinant()
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix { entries: self.entries.iter().map(f).collect(), ..self.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let e = self.get(r, c);
                    if r == c {
                        e.constant_value().is_some_and(|v| v.is_one())
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// `true` if every entry is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.constant_value().is_some_and(|v| v.is_zero()))
    }
}

/// Row in `candidates` whose entry in `col` is nonzero with the fewest
/// terms, ties broken by lower total degree then lower row index.
/// Gaussian elimination on constant pivots only, chosen anywhere in the
/// remaining block by a Markowitz fill estimate. Returns `(c, rest)` with
/// `det(m) = c * det(rest)`; `rest` is empty when every step found a pivot.
fn eliminate_constant_pivots(mut m: Vec<Vec<Polynomial>>) -> (Rational, Vec<Vec<Polynomial>>) {
    let mut scalar = Rational::one();
    while !m.is_empty() {
        let s = m.len();
        if (0..s).any(|c| m.iter().all(|row| row[c].is_zero())) {
            return (Rational::zero(), Vec::new());
        }
        let row_nnz: Vec<usize> = m.iter().map(|row| row.iter().filter(|e| !e.is_zero()).count()).collect();
        let col_nnz: Vec<usize> = (0..s).map(|c| m.iter().filter(|row| !row[c].is_zero()).count()).collect();
        let pivot = (0..s)
            .flat_map(|r| (0..s).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c].constant_value().is_some_and(|v| !v.is_zero()))
            .min_by_key(|&(r, c)| ((row_nnz[r] - 1) * (col_nnz[c] - 1), r, c));
        let Some((pr, pc)) = pivot else {
            break;
        };
        if pr != 0 {
            m.swap(pr, 0);
            scalar = -scalar;
        }
        if pc != 0 {
            for row in &mut m {
                row.swap(pc, 0);
            }
            scalar = -scalar;
        }
        let c = m[0][0].constant_value().expect("constant pivot");
        let inv = c.recip();
        scalar *= &c;
        let mut rows = m.into_iter();
        let pivot_row = rows.next().expect("nonempty");
        m = rows
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|mut row| {
                let factor = row[0].scale(&inv);
                if !factor.is_zero() {
                    for j in 1..s {
                        if !pivot_row[j].is_zero() {
                            row[j] = &row[j] - &(&factor * &pivot_row[j]);
                        }
                    }
                }
                row.remove(0);
                row
            })
            .collect();
    }
    (scalar, m)
}

/// Multiply the rows `rows` of `aug` by the inverse of their `cols` block,
/// then clear those columns from every other row. Returns the block's
/// determinant, or `None` if it is not a nonzero constant.
fn block_pivot(aug: &mut [Vec<Polynomial>], rows: &[usize], cols: &[usize]) -> Option<Rational> {
    let arity = aug[0][0].arity();
    let block = PolyMatrix::from_fn(rows.len(), cols.len(), arity, |r, c| aug[rows[r]][cols[c]].clone());
    let d = block.determinant().ok()?.constant_value().filter(|d| !d.is_zero())?;
    let adj = block.adjugate_by_minors().ok()?.scale(&d.recip());
    let width = aug[0].len();
    let solved: Vec<Vec<Polynomial>> = (0..rows.len())
        .into_par_iter()
        .map(|t| {
            (0..width)
                .map(|j| {
                    rows.iter()
                        .enumerate()
                        .filter(|(_, &r)| !aug[r][j].is_zero())
                        .map(|(s, &r)| adj.get(t, s) * &aug[r][j])
                        .fold(Polynomial::zero(arity), |acc, x| acc + x)
                })
                .collect()
        })
        .collect();
    aug.par_iter_mut().enumerate().filter(|(i, _)| !rows.contains(i)).for_each(|(_, row)| {
        let factors: Vec<Polynomial> = cols.iter().map(|&c| row[c].clone()).collect();
        for (t, factor) in factors.iter().enumerate() {
            if factor.is_zero() {
                continue;
            }
            for j in 0..width {
                if !solved[t][j].is_zero() {
                    row[j] = &row[j] - &(factor * &solved[t][j]);
                }
            }
        }
    });
    for (t, row) in solved.into_iter().enumerate() {
        aug[rows[t]] = row;
    }
    Some(d)
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        let mut len = 0usize;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len.saturating_sub(1);
    }
    transpositions % 2 == 1
}

fn choose_pivot(m: &[Vec<Polynomial>], col: usize, candidates: std::ops::Range<usize>) -> Option<usize> {
    candidates
        .filter(|&r| !m[r][col].is_zero())
        .min_by_key(|&r| (m[r][col].num_terms(), m[r][col].total_degree().unwrap_or(0), r))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::polyring::{parse_polynomial, rational, Monomial};

    fn mat(rows: &[&[&str]], arity: usize) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_polynomial(s, arity).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn nagata_jacobian() -> PolyMatrix {
        let f = [
            "x1 - 2*x2*(x3*x1 + x2^2) - x3*(x3*x1 + x2^2)^2",
            "x2 + x3*(x3*x1 + x2^2)",
            "x3",
        ]
        .map(|s| parse_polynomial(s, 3).unwrap());
        PolyMatrix::from_fn(3, 3, 3, |r, c| f[r].partial_derivative(c).unwrap())
    }

    #[test]
    fn matmul_examples() {
        let b = mat(&[&["x1", "x2^2"], &["1", "x1 - x2"]], 2);
        assert_eq!(PolyMatrix::identity(2, 2).matmul(&b).unwrap(), b);
        let a = mat(&[&["1", "2"], &["3", "4"]], 2);
        let c = mat(&[&["5", "6"], &["7", "8"]], 2);
        assert_eq!(a.matmul(&c).unwrap(), mat(&[&["19", "22"], &["43", "50"]], 2));
        let tall = mat(&[&["1"], &["2"], &["3"]], 2);
        assert!(matches!(tall.matmul(&tall), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn jacobian_times_adjugate() {
        let j = nagata_jacobian();
        let adj = j.adjugate().unwrap();
        assert!(j.matmul(&adj).unwrap().is_identity());
        assert!(adj.matmul(&j).unwrap().is_identity());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(nagata_jacobian().determinant().unwrap(), Polynomial::one(3));
        assert_eq!(PolyMatrix::identity(6, 2).determinant().unwrap(), Polynomial::one(2));
        let rect = mat(&[&["1", "2"]], 1);
        assert!(matches!(rect.determinant(), Err(Error::NotSquare { rows: 1, cols: 2 })));
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(PolyMatrix::identity(3, 2).adjugate().unwrap(), PolyMatrix::identity(3, 2));
        let m = mat(&[&["x1", "x2"], &["x3", "x4"]], 4);
        assert_eq!(m.adjugate().unwrap(), mat(&[&["x4", "-x2"], &["-x3", "x1"]], 4));
        assert_eq!(mat(&[&["x1"]], 1).adjugate().unwrap(), PolyMatrix::identity(1, 1));
    }

    #[test]
    fn row_replacement_examples() {
        let m = mat(&[&["x1", "x2", "1"], &["x2", "x3^2", "x1"], &["2", "x1*x2", "x3"]], 3);
        let det = m.determinant().unwrap();
        assert!(m.row_replaced_determinant(0, m.row(2)).unwrap().is_zero());
        assert_eq!(m.row_replaced_determinant(1, m.row(1)).unwrap(), det);
        // base is untouched
        assert_eq!(m.determinant().unwrap(), det);
        assert!(matches!(
            m.row_replaced_determinant(3, m.row(0)),
            Err(Error::IndexOutOfRange { index: 3, size: 3 })
        ));
        assert!(m.row_replaced_determinant(0, &m.row(0)[..2]).is_err());
    }

    #[test]
    fn unipotent_inverse_examples() {
        let j = nagata_jacobian();
        if let Some(inv) = j.unipotent_inverse().unwrap() {
            assert_eq!(inv, j.adjugate_by_minors().unwrap());
        }
        let not_unipotent = mat(&[&["2", "x1"], &["0", "1/2"]], 1);
        assert_eq!(not_unipotent.unipotent_inverse().unwrap(), None);
        // x1 + x2^3 style: strictly upper part only
        let shear = mat(&[&["1", "3*x2^2", "0", "0", "0"], &["0", "1", "x1", "0", "0"], &["0", "0", "1", "0", "0"], &["0", "0", "0", "1", "x3"], &["0", "0", "0", "0", "1"]], 3);
        let inv = shear.unipotent_inverse().unwrap().unwrap();
        assert!(shear.matmul(&inv).unwrap().is_identity());
        assert_eq!(shear.adjugate().unwrap(), inv);
    }

    #[test]
    fn bareiss_handles_zero_pivots_and_singular() {
        let m = mat(
            &[
                &["0", "x1", "0", "0", "1"],
                &["x2", "0", "0", "1", "0"],
                &["0", "0", "x1*x2", "0", "0"],
                &["0", "1", "0", "x1", "0"],
                &["1", "0", "0", "0", "x2"],
            ],
            2,
        );
        assert_eq!(m.determinant_bareiss().unwrap(), m.determinant_cofactor().unwrap());
        let mut s = m.clone();
        for c in 0..5 {
            s.set(4, c, m.get(0, c) + m.get(1, c));
        }
        assert!(s.determinant_bareiss().unwrap().is_zero());
        assert!(s.adjugate_gauss_jordan().unwrap().is_none());
        assert_eq!(s.adjugate().unwrap(), s.adjugate_by_minors().unwrap());
    }

    fn poly(arity: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..=1, arity), -3i64..=3), 0..3).prop_map(
            move |terms| {
                Polynomial::from_terms(
                    arity,
                    terms.into_iter().map(|(e, c)| (Monomial::from_exponents(e), rational(c, 1))),
                )
            },
        )
    }

    fn square(n: usize) -> impl Strategy<Value = PolyMatrix> {
        prop::collection::vec(poly(3), n * n).prop_map(move |e| PolyMatrix::new(n, n, e).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bareiss_matches_cofactor(n in 1usize..=4, seed in prop::collection::vec(poly(3), 16)) {
            let m = PolyMatrix::new(n, n, seed[..n * n].to_vec()).unwrap();
            prop_assert_eq!(m.determinant_bareiss().unwrap(), m.determinant_cofactor().unwrap());
        }

        #[test]
        fn determinant_is_multiplicative(a in square(3), b in square(3)) {
            let ab = a.matmul(&b).unwrap();
            prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
        }

        #[test]
        fn adjugate_identity(m in square(3)) {
            let det = m.determinant().unwrap();
            let adj = m.adjugate().unwrap();
            let scalar = PolyMatrix::identity(3, 3).map(|p| p * &det);
            prop_assert_eq!(m.matmul(&adj).unwrap(), scalar.clone());
            prop_assert_eq!(adj.matmul(&m).unwrap(), scalar);
        }

        #[test]
        fn elimination_determinant_matches_cofactor(m in square(4), scale in square(4)) {
            // unit diagonal gives the constant-pivot path something to do
            let n = 4;
            let m = PolyMatrix::from_fn(n, n, 3, |r, c| {
                if r == c { Polynomial::one(3) } else if (r + c) % 2 == 0 { m.get(r, c).clone() } else { scale.get(r, c).clone() }
            });
            let (c, rest) = eliminate_constant_pivots(m.to_rows());
            let rest_det = if rest.is_empty() {
                Polynomial::one(3)
            } else {
                PolyMatrix::from_rows(rest).unwrap().determinant_cofactor().unwrap()
            };
            prop_assert_eq!(rest_det.scale(&c), m.determinant_cofactor().unwrap());
            if let Some(adj) = m.adjugate_constant_pivots() {
                prop_assert_eq!(adj, m.adjugate_by_minors().unwrap());
            }
        }

        #[test]
        fn mixed_pivots_six_by_six(
            entries in prop::collection::vec(poly(3), 36),
            constants in prop::collection::vec(prop::bool::weighted(0.4), 36),
        ) {
            let m = PolyMatrix::from_fn(6, 6, 3, |r, c| {
                let e = &entries[r * 6 + c];
                match (constants[r * 6 + c], e.terms().last()) {
                    (true, Some((_, k))) => Polynomial::constant(3, k.clone()),
                    _ => e.clone(),
                }
            });
            let det = m.determinant().unwrap();
            prop_assert_eq!(&det, &m.determinant_cofactor().unwrap());
            let adj = m.adjugate().unwrap();
            let eye = PolyMatrix::identity(6, 3).map(|e| e * &det);
            prop_assert_eq!(m.matmul(&adj).unwrap(), eye);
        }

        #[test]
        fn gauss_jordan_adjugate_matches_minors(m in square(4)) {
            if let Some(adj) = m.adjugate_gauss_jordan().unwrap() {
                prop_assert_eq!(adj, m.adjugate_by_minors().unwrap());
            } else {
                prop_assert!(m.determinant().unwrap().is_zero());
            }
        }

        #[test]
        fn row_swap_flips_sign(m in square(3), r1 in 0usize..3, r2 in 0usize..3) {
            prop_assume!(r1 != r2);
            let swapped = m
                .with_row_replaced(r1, m.row(r2)).unwrap()
                .with_row_replaced(r2, m.row(r1)).unwrap();
            prop_assert_eq!(swapped.determinant().unwrap(), -m.determinant().unwrap());
        }

        #[test]
        fn derivative_of_determinant(m in square(3), v in 0usize..3) {
            // d(det m) = sum over rows of det(m with that row derived)
            //          = sum over columns of det(m with that column derived)
            let lhs = m.determinant().unwrap().partial_derivative(v).unwrap();
            let by_rows = (0..3)
                .map(|r| {
                    let row: Vec<_> = m.row(r).iter().map(|p| p.partial_derivative(v).unwrap()).collect();
                    m.row_replaced_determinant(r, &row).unwrap()
                })
                .sum::<Polynomial>();
            let t = m.transpose();
            let by_cols = (0..3)
                .map(|c| {
                    let col: Vec<_> = t.row(c).iter().map(|p| p.partial_derivative(v).unwrap()).collect();
                    t.row_replaced_determinant(c, &col).unwrap()
                })
                .sum::<Polynomial>();
            prop_assert_eq!(&lhs, &by_rows);
            prop_assert_eq!(&lhs, &by_cols);
        }
    }
}
