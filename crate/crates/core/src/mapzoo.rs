//! Map files, the Drużkowski generator, and the built-in fixture maps.
//!
//! A map file holds one component per line, `F<k> = <polynomial>`, with `#`
//! starting a comment. The number of variables is the number of components.
//! A Drużkowski matrix file holds `n` on its first line and then `n` rows of
//! `n` rationals.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::nambu::{jacobian_data, PolynomialMap};
use crate::polyring::{parse_at, Monomial, Polynomial, Rational};

const NAGATA_MAP: &str = include_str!("../fixtures/nagata.map");
const TOY2_MAP: &str = include_str!("../fixtures/toy2.map");
const DRUZKOWSKI13_MATRIX: &str = include_str!("../fixtures/druzkowski13.matrix");

/// Parse a map file. The label is left empty; see [`parse_map_labeled`].
pub fn parse_map(text: &str) -> Result<PolynomialMap> {
    parse_map_labeled(text, "")
}

pub fn parse_map_labeled(text: &str, label: &str) -> Result<PolynomialMap> {
    // (component, line, column of the polynomial, polynomial text)
    let mut assignments: Vec<(usize, usize, usize, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |column: usize, message: &str| Error::Parse {
            line: line_no,
            column,
            message: message.to_string(),
        };
        let lead = line.len() - line.trim_start().len();
        let rest = &line[lead..];
        if !rest.starts_with(['F', 'f']) {
            return Err(parse_err(col(line, lead), "expected a component name like F1"));
        }
        let digits = rest[1..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(parse_err(col(line, lead + 1), "expected a component index after F"));
        }
        let k: usize = rest[1..1 + digits]
            .parse()
            .map_err(|_| parse_err(col(line, lead + 1), "component index too large"))?;
        if k == 0 {
            return Err(parse_err(col(line, lead + 1), "component indices start at 1"));
        }
        let after = lead + 1 + digits;
        let eq_off = line[after..].len() - line[after..].trim_start().len();
        if !line[after + eq_off..].starts_with('=') {
            return Err(parse_err(col(line, after + eq_off), "expected '='"));
        }
        let body = after + eq_off + 1;
        if assignments.iter().any(|a| a.0 == k) {
            return Err(Error::DuplicateComponent(k));
        }
        assignments.push((k, line_no, col(line, body), &line[body..]));
    }
    let n = assignments.len();
    if n == 0 {
        return Err(Error::Parse { line: 1, column: 1, message: "no components".into() });
    }
    for k in 1..=n {
        if !assignments.iter().any(|a| a.0 == k) {
            return Err(Error::MissingComponent(k));
        }
    }
    assignments.sort_by_key(|a| a.0);
    let components = assignments
        .iter()
        .map(|&(_, line, column, body)| parse_at(body, n, 'x', line, column))
        .collect::<Result<Vec<_>>>()?;
    PolynomialMap::new(components, label)
}

/// 1-based character column of byte offset `byte` in `line`.
fn col(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

/// Canonical map file text; [`parse_map`] reads it back to an equal map.
pub fn format_map(map: &PolynomialMap) -> String {
    let mut out = String::new();
    for (k, f) in map.components().iter().enumerate() {
        out.push_str(&format!("F{} = {}\n", k + 1, f));
    }
    out
}

/// Coefficient matrix `A` of `F_i = x_i + (Σ_j a_ij x_j)^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DruzkowskiSpec {
    pub matrix: Vec<Vec<Rational>>,
}

impl DruzkowskiSpec {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: row.len() });
        }
        Ok(DruzkowskiSpec { matrix })
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn rank(&self) -> usize {
        rational_rank(&self.matrix)
    }

    pub fn squares_to_zero(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).map(|t| &self.matrix[i][t] * &self.matrix[t][j]).sum::<Rational>().is_zero()
            })
        })
    }
}

/// Parse a matrix file: `n`, then `n` lines of `n` rationals. Blank lines
/// and `#` comments are ignored.
pub fn parse_druzkowski_matrix(text: &str) -> Result<DruzkowskiSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, first) = lines.next().ok_or_else(|| Error::InvalidMatrix("empty file".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::InvalidMatrix(format!("expected the dimension, found '{first}'")))?;
    let mut matrix = Vec::with_capacity(n);
    for (line_no, line) in lines {
        if matrix.len() == n {
            return Err(Error::InvalidMatrix(format!("line {line_no}: more than {n} rows")));
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Rational>()
                    .map_err(|_| Error::InvalidMatrix(format!("line {line_no}: bad rational '{tok}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "line {line_no}: expected {n} entries, found {}",
                row.len()
            )));
        }
        matrix.push(row);
    }
    if matrix.len() != n {
        return Err(Error::InvalidMatrix(format!("expected {n} rows, found {}", matrix.len())));
    }
    DruzkowskiSpec::new(matrix)
}

/// Matrix file text accepted by [`parse_druzkowski_matrix`].
pub fn format_druzkowski_matrix(spec: &DruzkowskiSpec) -> String {
    let mut out = format!("{}\n", spec.n());
    for row in &spec.matrix {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug)]
pub struct DruzkowskiMap {
    pub map: PolynomialMap,
    pub rank: usize,
    pub squares_to_zero: bool,
}

impl DruzkowskiMap {
    /// Whether `det J_F` is a constant. Computes the full determinant.
    pub fn has_constant_jacobian(&self) -> Result<bool> {
        Ok(self.map.jacobian().determinant()?.is_constant())
    }
}

/// `F_i = x_i + (Σ_j a_ij x_j)^3`, expanded.
pub fn druzkowski_from_matrix(spec: &DruzkowskiSpec) -> DruzkowskiMap {
    let n = spec.n();
    let components = spec
        .matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let form = Polynomial::from_terms(
                n,
                row.iter().enumerate().map(|(j, a)| (Monomial::var(n, j), a.clone())),
            );
            Polynomial::var(n, i) + form.pow(3)
        })
        .collect();
    DruzkowskiMap {
        map: PolynomialMap::new(components, format!("druzkowski{n}")).expect("arity n"),
        rank: spec.rank(),
        squares_to_zero: spec.squares_to_zero(),
    }
}

fn rational_rank(matrix: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            let (top, bottom) = m.split_at_mut(r);
            for (x, p) in bottom[0][c..].iter_mut().zip(&top[rank][c..]) {
                *x -= &f * p;
            }
        }
        rank += 1;
    }
    rank
}

/// `F = M x` for a square rational matrix `M`.
pub fn linear(matrix: &[Vec<Rational>]) -> Result<PolynomialMap> {
    let n = matrix.len();
    if let Some(row) = matrix.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: row.len() });
    }
    let components = matrix
        .iter()
        .map(|row| {
            Polynomial::from_terms(n, row.iter().enumerate().map(|(j, a)| (Monomial::var(n, j), a.clone())))
        })
        .collect();
    PolynomialMap::new(components, format!("linear{n}"))
}

pub fn nagata() -> PolynomialMap {
    parse_map_labeled(NAGATA_MAP, "nagata").expect("shipped fixture parses")
}

/// `(x1, x2 + x1^2)`.
pub fn toy2() -> PolynomialMap {
    parse_map_labeled(TOY2_MAP, "toy2").expect("shipped fixture parses")
}

pub fn druzkowski13_spec() -> DruzkowskiSpec {
    parse_druzkowski_matrix(DRUZKOWSKI13_MATRIX).expect("shipped fixture parses")
}

pub fn druzkowski13() -> DruzkowskiMap {
    let mut d = druzkowski_from_matrix(&druzkowski13_spec());
    d.map = d.map.with_label("druzkowski13");
    d
}

/// All named fixtures: `identity1`..`identity4`, `linear3`, `toy2`,
/// `nagata`, `druzkowski13`.
pub fn fixtures() -> BTreeMap<String, PolynomialMap> {
    let mut out = BTreeMap::new();
    for n in 1..=4 {
        out.insert(format!("identity{n}"), PolynomialMap::identity(n));
    }
    let int = |v: i64| Rational::from_integer(v.into());
    // unimodular, so the Nambu tables exist without rescaling
    let shear = vec![
        vec![int(1), int(2), int(0)],
        vec![int(0), int(1), int(-3)],
        vec![int(1), int(2), int(1)],
    ];
    out.insert("linear3".into(), linear(&shear).expect("square"));
    out.insert("toy2".into(), toy2());
    out.insert("nagata".into(), nagata());
    out.insert("druzkowski13".into(), druzkowski13().map);
    out
}

pub fn fixture(name: &str) -> Option<PolynomialMap> {
    fixtures().remove(name)
}

/// `det J_F` of a map, for diagnostics; `None` if it is not constant.
pub fn constant_jacobian_det(map: &PolynomialMap) -> Result<Option<Rational>> {
    match jacobian_data(map) {
        Ok(d) => Ok(Some(d.det)),
        Err(Error::NotConstantJacobian(_)) => Ok(None),
        Err(Error::SingularJacobian) => Ok(Some(Rational::zero())),
        Err(e) => Err(e),
    }
}
