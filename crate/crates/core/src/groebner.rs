//! Buchberger's algorithm, normal forms, and subalgebra membership.
//!
//! Membership `g ∈ Q[F_1, ..., F_n]` is decided in `Q[x_1..x_n, y_1..y_n]`:
//! reduce `g` modulo a Gröbner basis of `⟨y_i - F_i⟩` under an order that
//! eliminates the `x` block. `g` is a member iff the normal form is free of
//! `x`, and then the normal form read in `y` is the expression of `g` in the
//! `F_i`.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::ops::Neg;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedMul, CheckedSub, One, ToPrimitive, Zero};
use rustc_hash::FxHashMap as HashMap;

use crate::error::{Error, Result};
use crate::nambu::PolynomialMap;
use crate::polyring::{grevlex, Monomial, Polynomial, Rational};

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
    /// Variables `0..split` are eliminated: compare that block by grevlex
    /// first, then the remaining block by grevlex.
    BlockElimination { split: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::GrevLex => grevlex(a.exponents(), b.exponents()),
            MonomialOrder::BlockElimination { split } => {
                let (a, b) = (a.exponents(), b.exponents());
                grevlex(&a[..split], &b[..split]).then_with(|| grevlex(&a[split..], &b[split..]))
            }
        }
    }
}

/// Shared reduction-step and wall-clock budget. Safe to charge from several
/// threads at once.
#[derive(Debug)]
pub struct Budget {
    max_steps: u64,
    used: AtomicU64,
    deadline: Option<Instant>,
}

impl Budget {
    pub fn new(max_steps: u64) -> Self {
        Budget { max_steps, used: AtomicU64::new(0), deadline: None }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.deadline = Some(Instant::now() + timeout);
        self
    }

    pub fn steps_used(&self) -> u64 {
        self.used.load(AtomicOrdering::Relaxed)
    }

    pub fn charge(&self, steps: u64) -> Result<()> {
        let before = self.used.fetch_add(steps, AtomicOrdering::Relaxed);
        let after = before.saturating_add(steps);
        if after > self.max_steps {
            return Err(Error::BudgetExceeded { steps: after });
        }
        // clock reads are comparatively slow; sample them
        if before / 256 != after / 256 {
            self.check_deadline()?;
        }
        Ok(())
    }

    fn refund(&self, steps: u64) {
        self.used.fetch_sub(steps, AtomicOrdering::Relaxed);
    }

    pub fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::TimeLimitExceeded),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_STEP_BUDGET)
    }
}

/// Monomial tagged with a sort key whose lexicographic order is the
/// monomial order, so heap comparisons are plain slice comparisons.
#[derive(PartialEq, Eq)]
struct Keyed {
    key: Box<[u32]>,
    m: Monomial,
}

impl Keyed {
    fn new(m: Monomial, order: MonomialOrder) -> Self {
        let e = m.exponents();
        let split = match order {
            MonomialOrder::GrevLex => e.len(),
            MonomialOrder::BlockElimination { split } => split,
        };
        let mut key = Vec::with_capacity(e.len() + 2);
        for block in [&e[..split], &e[split..]] {
            key.push(block.iter().sum());
            key.extend(block.iter().rev().map(|&x| u32::MAX - x));
        }
        Keyed { key: key.into_boxed_slice(), m }
    }
}

impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with terms sorted descending under a specific order.
#[derive(Clone, Debug)]
struct OrderedPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl OrderedPoly {
    fn from_poly(p: &Polynomial, order: MonomialOrder) -> Self {
        let mut terms = p.terms().to_vec();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        OrderedPoly { terms }
    }

    fn to_poly(&self, arity: usize) -> Polynomial {
        Polynomial::from_terms(arity, self.terms.iter().cloned())
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &Rational {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self) {
        if let Some((_, lc)) = self.terms.first() {
            if !lc.is_one() {
                let inv = lc.recip();
                for (_, c) in &mut self.terms {
                    *c *= &inv;
                }
            }
        }
    }
}

/// Complete reduction of `p` by the monic `basis`; the result has no term
/// divisible by any leading monomial of `basis`.
fn reduce(
    p: impl IntoIterator<Item = (Monomial, Rational)>,
    basis: &[OrderedPoly],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<OrderedPoly> {
    debug_assert!(basis.iter().all(|h| h.lc().is_one()));
    let mut work: HashMap<Monomial, Rational> = HashMap::default();
    for (m, c) in p {
        *work.entry(m).or_insert_with(Rational::zero) += c;
    }
    work.retain(|_, c| !c.is_zero());
    let lms: Vec<&Monomial> = basis.iter().map(OrderedPoly::lm).collect();
    let tails: Vec<&[(Monomial, Rational)]> = basis.iter().map(|h| &h.terms[1..]).collect();
    let terms = match reduce_packed(&work, &lms, &tails, order, budget)? {
        Some(terms) => terms,
        None => reduce_over(work, &lms, &tails, order, budget)?,
    };
    Ok(OrderedPoly { terms })
}

/// Exponent vector of at most [`PACKED`] variables, each below 256, stored
/// inline. Used by the fast path of [`reduce`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Packed([u8; PACKED]);

const PACKED: usize = 32;

type Small = Ratio<i128>;

type PackedKey = [u8; PACKED + 4];

impl Packed {
    fn pack(m: &Monomial) -> Option<Self> {
        let e = m.exponents();
        if e.len() > PACKED {
            return None;
        }
        let mut out = [0u8; PACKED];
        for (o, &x) in out.iter_mut().zip(e) {
            *o = u8::try_from(x).ok()?;
        }
        Some(Packed(out))
    }

    fn unpack(&self, arity: usize) -> Monomial {
        Monomial::from_exponents(self.0[..arity].iter().map(|&x| u32::from(x)).collect::<Vec<_>>())
    }

    fn divides(&self, other: &Packed) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Packed) -> Option<Packed> {
        let mut out = [0u8; PACKED];
        let mut overflow = false;
        for ((o, a), b) in out.iter_mut().zip(self.0.iter()).zip(other.0.iter()) {
            let (sum, carry) = a.overflowing_add(*b);
            *o = sum;
            overflow |= carry;
        }
        (!overflow).then_some(Packed(out))
    }

    /// `self / other`; `other` must divide `self`.
    fn div(&self, other: &Packed) -> Packed {
        let mut out = [0u8; PACKED];
        for ((o, a), b) in out.iter_mut().zip(self.0.iter()).zip(other.0.iter()) {
            *o = a - b;
        }
        Packed(out)
    }

    /// Byte key whose lexicographic order is `order` (see [`Keyed`]); each
    /// block contributes its degree as two big-endian bytes.
    fn key(&self, arity: usize, order: MonomialOrder) -> PackedKey {
        let split = match order {
            MonomialOrder::GrevLex => arity,
            MonomialOrder::BlockElimination { split } => split,
        };
        let mut key = [0u8; PACKED + 4];
        let mut at = 0;
        for block in [&self.0[..split], &self.0[split..arity]] {
            let degree: u16 = block.iter().map(|&x| u16::from(x)).sum();
            key[at..at + 2].copy_from_slice(&degree.to_be_bytes());
            at += 2;
            for &x in block.iter().rev() {
                key[at] = 255 - x;
                at += 1;
            }
        }
        key
    }
}

/// Coefficient ring of [`packed_loop`]; `None` signals overflow.
trait PackedCoef: Clone + Zero + Neg<Output = Self> {
    fn times(&self, other: &Self) -> Option<Self>;
    fn minus(&self, other: &Self) -> Option<Self>;
}

impl PackedCoef for i128 {
    fn times(&self, other: &Self) -> Option<Self> {
        // a 64x64 product cannot overflow and skips the checked 128-bit path
        match (i64::try_from(*self), i64::try_from(*other)) {
            (Ok(a), Ok(b)) => Some(i128::from(a) * i128::from(b)),
            _ => i128::checked_mul(*self, *other),
        }
    }

    fn minus(&self, other: &Self) -> Option<Self> {
        i128::checked_sub(*self, *other)
    }
}

impl PackedCoef for Small {
    fn times(&self, other: &Self) -> Option<Self> {
        self.checked_mul(other)
    }

    fn minus(&self, other: &Self) -> Option<Self> {
        self.checked_sub(other)
    }
}

/// Fast paths of [`reduce`] on packed monomials. Returns `None` when the
/// input does not pack or a value leaves the packed range; the caller then
/// runs the general loop, which takes the same steps in the same order.
///
/// Two coefficient representations are tried. If every tail term has
/// exactly one fewer eliminated-block degree than its leading monomial (as
/// in `x_v - G_v(y)`), a coefficient `c` at eliminated degree `w` is stored
/// as the integer `c * S * D^(K - w)`, where `S` and `D` are the common
/// denominators of the input and of the tails and `K` is the top degree.
/// Otherwise, or on overflow, coefficients are `i128` fractions.
fn reduce_packed(
    work: &HashMap<Monomial, Rational>,
    lms: &[&Monomial],
    tails: &[&[(Monomial, Rational)]],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<Option<Vec<(Monomial, Rational)>>> {
    let Some(arity) = lms.first().map(|m| m.arity()) else {
        return Ok(None);
    };
    let split = match order {
        MonomialOrder::GrevLex => arity,
        MonomialOrder::BlockElimination { split } => split,
    };
    let weight = |m: &Packed| m.0[..split].iter().map(|&x| u32::from(x)).sum::<u32>();
    let pack = |terms: &[(&Monomial, &Rational)]| terms.iter().map(|(m, _)| Packed::pack(m)).collect::<Option<Vec<_>>>();
    let start: Vec<(&Monomial, &Rational)> = work.iter().collect();
    let tails: Vec<Vec<(&Monomial, &Rational)>> = tails.iter().map(|t| t.iter().map(|(m, c)| (m, c)).collect()).collect();
    let (Some(start_m), Some(lms), Some(tails_m)) = (
        pack(&start),
        lms.iter().map(|m| Packed::pack(m)).collect::<Option<Vec<_>>>(),
        tails.iter().map(|t| pack(t)).collect::<Option<Vec<_>>>(),
    ) else {
        return Ok(None);
    };

    let graded = lms.iter().zip(&tails_m).all(|(lm, t)| t.iter().all(|m| weight(m) + 1 == weight(lm)));
    if graded {
        let lcm_den = |cs: &mut dyn Iterator<Item = &Rational>| cs.fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let s = lcm_den(&mut start.iter().map(|(_, c)| *c));
        let d = lcm_den(&mut tails.iter().flatten().map(|(_, c)| *c));
        let top = start_m.iter().map(weight).max().unwrap_or(0);
        let scale = |w: u32| &s * num_traits::pow(d.clone(), (top - w) as usize);
        let to_int = |c: &Rational, f: &BigInt| (c * Rational::from_integer(f.clone())).to_integer().to_i128();
        let start_i: Option<Vec<(Packed, i128)>> =
            start_m.iter().zip(&start).map(|(m, (_, c))| Some((*m, to_int(c, &scale(weight(m)))?))).collect();
        let tails_i: Option<Vec<Vec<(Packed, i128)>>> = tails_m
            .iter()
            .zip(&tails)
            .map(|(ms, t)| ms.iter().zip(t).map(|(m, (_, c))| Some((*m, to_int(c, &d)?))).collect())
            .collect();
        if let (Some(start_i), Some(tails_i)) = (start_i, tails_i) {
            if let Some(r) = packed_loop(start_i, &lms, &tails_i, arity, order, budget)? {
                let terms = r
                    .into_iter()
                    .map(|(m, n)| (m.unpack(arity), Rational::new(n.into(), scale(weight(&m)))))
                    .collect();
                return Ok(Some(terms));
            }
        }
    }

    let small = |c: &Rational| Some(Small::new_raw(c.numer().to_i128()?, c.denom().to_i128()?));
    let start_s: Option<Vec<(Packed, Small)>> =
        start_m.iter().zip(&start).map(|(m, (_, c))| Some((*m, small(c)?))).collect();
    let tails_s: Option<Vec<Vec<(Packed, Small)>>> = tails_m
        .iter()
        .zip(&tails)
        .map(|(ms, t)| ms.iter().zip(t).map(|(m, (_, c))| Some((*m, small(c)?))).collect())
        .collect();
    let (Some(start_s), Some(tails_s)) = (start_s, tails_s) else {
        return Ok(None);
    };
    let Some(r) = packed_loop(start_s, &lms, &tails_s, arity, order, budget)? else {
        return Ok(None);
    };
    let terms = r
        .into_iter()
        .map(|(m, c)| {
            let (num, den) = c.into_raw();
            (m.unpack(arity), Rational::new_raw(num.into(), den.into()))
        })
        .collect();
    Ok(Some(terms))
}

/// The reduction loop of [`reduce_over`] on packed monomials. On overflow
/// the steps it charged are refunded and `None` is returned.
fn packed_loop<C: PackedCoef>(
    start: Vec<(Packed, C)>,
    lms: &[Packed],
    tails: &[Vec<(Packed, C)>],
    arity: usize,
    order: MonomialOrder,
    budget: &Budget,
) -> Result<Option<Vec<(Packed, C)>>> {
    let mut charged = 0u64;
    let bail = |charged: u64| {
        budget.refund(charged);
        Ok(None)
    };
    let mut heap: BinaryHeap<(PackedKey, Packed)> =
        start.iter().map(|(m, _)| (m.key(arity, order), *m)).collect();
    let mut work: HashMap<Packed, C> = start.into_iter().collect();
    let mut remainder = Vec::new();
    while let Some((_, m)) = heap.pop() {
        let Some(c) = work.remove(&m) else {
            continue;
        };
        let Some(h) = lms.iter().position(|lm| lm.divides(&m)) else {
            remainder.push((m, c));
            continue;
        };
        budget.charge(1)?;
        charged += 1;
        let factor = m.div(&lms[h]);
        for (hm, hc) in &tails[h] {
            let (Some(target), Some(delta)) = (hm.mul(&factor), c.times(hc)) else {
                return bail(charged);
            };
            match work.entry(target) {
                Entry::Occupied(mut e) => {
                    let Some(v) = e.get().minus(&delta) else {
                        return bail(charged);
                    };
                    if v.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = v;
                    }
                }
                Entry::Vacant(e) => {
                    heap.push((target.key(arity, order), target));
                    e.insert(-delta);
                }
            }
        }
    }
    Ok(Some(remainder))
}

/// General reduction loop. Pending terms live in a hash map; a max-heap
/// over the same monomials yields the next leading term, and cancelled terms
/// leave stale heap entries that are skipped on pop.
fn reduce_over(
    mut work: HashMap<Monomial, Rational>,
    lms: &[&Monomial],
    tails: &[&[(Monomial, Rational)]],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<Vec<(Monomial, Rational)>> {
    let mut heap: BinaryHeap<Keyed> = work.keys().map(|m| Keyed::new(m.clone(), order)).collect();
    let mut remainder = Vec::new();
    while let Some(Keyed { m, .. }) = heap.pop() {
        let Some(c) = work.remove(&m) else {
            continue;
        };
        let Some(h) = lms.iter().position(|lm| lm.divides(&m)) else {
            remainder.push((m, c));
            continue;
        };
        budget.charge(1)?;
        let factor = m.div(lms[h]).expect("divisibility checked");
        for (hm, hc) in tails[h] {
            let delta = &c * hc;
            match work.entry(hm.mul(&factor)) {
                Entry::Occupied(mut e) => {
                    *e.get_mut() -= &delta;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
                Entry::Vacant(e) => {
                    heap.push(Keyed::new(e.key().clone(), order));
                    e.insert(-delta);
                }
            }
        }
    }
    Ok(remainder)
}

fn s_polynomial(f: &OrderedPoly, g: &OrderedPoly) -> Vec<(Monomial, Rational)> {
    let lcm = f.lm().lcm(g.lm());
    let mf = lcm.div(f.lm()).expect("lcm is a multiple");
    let mg = lcm.div(g.lm()).expect("lcm is a multiple");
    let cf = f.lc().recip();
    let cg = g.lc().recip();
    // leading terms cancel; skip them
    let mut terms: Vec<_> = f.terms[1..].iter().map(|(m, c)| (m.mul(&mf), c * &cf)).collect();
    terms.extend(g.terms[1..].iter().map(|(m, c)| (m.mul(&mg), -(c * &cg))));
    terms
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    arity: usize,
    order: MonomialOrder,
    reduced: bool,
    generators: Vec<Polynomial>,
    sorted: Vec<OrderedPoly>,
}

impl GroebnerBasis {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Generators in ascending order of leading monomial.
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Leading monomials under the basis order.
    pub fn leading_monomials(&self) -> Vec<&Monomial> {
        self.sorted.iter().map(OrderedPoly::lm).collect()
    }

    /// Buchberger's criterion: every S-polynomial of a pair of generators
    /// reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let budget = Budget::unlimited();
        for (a, f) in self.sorted.iter().enumerate() {
            for g in &self.sorted[a + 1..] {
                let r = reduce(s_polynomial(f, g), &self.sorted, self.order, &budget)
                    .expect("unlimited budget");
                if !r.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Multivariate division remainder of `g` by the basis.
pub fn normal_form(g: &Polynomial, basis: &GroebnerBasis) -> Polynomial {
    normal_form_within(g, basis, &Budget::unlimited()).expect("unlimited budget")
}

/// [`normal_form`] charging every reduction step to `budget`.
pub fn normal_form_within(g: &Polynomial, basis: &GroebnerBasis, budget: &Budget) -> Result<Polynomial> {
    if g.arity() != basis.arity {
        return Err(Error::ArityMismatch { left: basis.arity, right: g.arity() });
    }
    let r = reduce(g.terms().iter().cloned(), &basis.sorted, basis.order, budget)?;
    Ok(r.to_poly(basis.arity))
}

/// Reduced Gröbner basis of the ideal generated by `generators`.
pub fn buchberger(generators: &[Polynomial], order: MonomialOrder, budget: &Budget) -> Result<GroebnerBasis> {
    let arity = generators
        .first()
        .map(Polynomial::arity)
        .ok_or_else(|| Error::ShapeMismatch("Buchberger needs at least one generator".into()))?;
    if let Some(bad) = generators.iter().find(|p| p.arity() != arity) {
        return Err(Error::ArityMismatch { left: arity, right: bad.arity() });
    }
    if let MonomialOrder::BlockElimination { split } = order {
        if split > arity {
            return Err(Error::VariableOutOfRange { index: split, arity });
        }
    }

    let mut basis: Vec<OrderedPoly> = Vec::new();
    for g in generators.iter().filter(|g| !g.is_zero()) {
        let mut p = OrderedPoly::from_poly(g, order);
        p.make_monic();
        basis.push(p);
    }

    // pending pairs keyed by (lcm degree, newer index, older index)
    let mut queue: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let push_pair = |queue: &mut BTreeSet<_>, pending: &mut HashSet<_>, basis: &[OrderedPoly], i: usize, j: usize| {
        let deg = basis[i].lm().lcm(basis[j].lm()).degree();
        queue.insert((deg, j, i));
        pending.insert((i, j));
    };
    for j in 0..basis.len() {
        for i in 0..j {
            push_pair(&mut queue, &mut pending, &basis, i, j);
        }
    }

    while let Some((_, j, i)) = queue.pop_first() {
        pending.remove(&(i, j));
        budget.check_deadline()?;
        let (fi, fj) = (&basis[i], &basis[j]);
        if fi.lm().is_coprime(fj.lm()) {
            continue;
        }
        let lcm = fi.lm().lcm(fj.lm());
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let mut r = reduce(s_polynomial(fi, fj), &basis, order, budget)?;
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        basis.push(r);
        let new = basis.len() - 1;
        for t in 0..new {
            push_pair(&mut queue, &mut pending, &basis, t, new);
        }
    }

    finish(basis, arity, order, budget)
}

/// Minimalize and interreduce into the unique reduced basis.
fn finish(basis: Vec<OrderedPoly>, arity: usize, order: MonomialOrder, budget: &Budget) -> Result<GroebnerBasis> {
    let mut minimal: Vec<OrderedPoly> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(other, h)| {
            other != idx && h.lm().divides(g.lm()) && (h.lm() != g.lm() || other < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for idx in 0..minimal.len() {
        let others: Vec<OrderedPoly> =
            minimal.iter().enumerate().filter(|(o, _)| *o != idx).map(|(_, g)| g.clone()).collect();
        let mut tail = reduce(minimal[idx].terms[1..].iter().cloned(), &others, order, budget)?;
        let mut g = OrderedPoly { terms: vec![minimal[idx].terms[0].clone()] };
        g.terms.append(&mut tail.terms);
        g.make_monic();
        reduced.push(g);
    }
    reduced.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let generators = reduced.iter().map(|g| g.to_poly(arity)).collect();
    Ok(GroebnerBasis { arity, order, reduced: true, generators, sorted: reduced })
}

/// Outcome of a subalgebra membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipResult {
    pub is_member: bool,
    /// Normal form in `x1..xn, y1..yn` (arity `2n`).
    pub normal_form: Polynomial,
    /// The normal form as a polynomial in `y1..yn`; present iff `is_member`.
    pub f_expression: Option<Polynomial>,
}

/// Reduced basis of `⟨y_i - F_i⟩` in `Q[x, y]` under `x ≫ y` elimination.
pub fn elimination_basis(map: &PolynomialMap, budget: &Budget) -> Result<GroebnerBasis> {
    let n = map.n();
    let generators: Vec<Polynomial> = map
        .components()
        .iter()
        .enumerate()
        .map(|(i, f)| &Polynomial::var(2 * n, n + i) - &f.embed(2 * n, 0))
        .collect();
    buchberger(&generators, MonomialOrder::BlockElimination { split: n }, budget)
}

fn check_elimination_basis(map: &PolynomialMap, basis: &GroebnerBasis) -> Result<()> {
    let n = map.n();
    if basis.arity != 2 * n || basis.order != (MonomialOrder::BlockElimination { split: n }) {
        return Err(Error::ShapeMismatch(format!(
            "basis is not an elimination basis for a map with {n} components"
        )));
    }
    Ok(())
}

/// Decide `g ∈ Q[F_1, ..., F_n]`. Pass a cached [`elimination_basis`] to
/// avoid recomputing it for every query.
pub fn subalgebra_membership(
    g: &Polynomial,
    map: &PolynomialMap,
    cached_basis: Option<&GroebnerBasis>,
    budget: &Budget,
) -> Result<MembershipResult> {
    let n = map.n();
    if g.arity() != n {
        return Err(Error::ArityMismatch { left: n, right: g.arity() });
    }
    let owned;
    let basis = match cached_basis {
        Some(b) => {
            check_elimination_basis(map, b)?;
            b
        }
        None => {
            owned = elimination_basis(map, budget)?;
            &owned
        }
    };
    let nf = normal_form_within(&g.embed(2 * n, 0), basis, budget)?;
    let f_expression = nf.restrict(n..2 * n);
    Ok(MembershipResult { is_member: f_expression.is_some(), normal_form: nf, f_expression })
}

/// Polynomial inverse `G` of `F` in `y1..yn`, if every `x_i` lies in `Q[F]`.
pub fn invert_map(
    map: &PolynomialMap,
    cached_basis: Option<&GroebnerBasis>,
    budget: &Budget,
) -> Result<Option<Vec<Polynomial>>> {
    let n = map.n();
    let owned;
    let basis = match cached_basis {
        Some(b) => b,
        None => {
            owned = elimination_basis(map, budget)?;
            &owned
        }
    };
    let mut inverse = Vec::with_capacity(n);
    for i in 0..n {
        match subalgebra_membership(&Polynomial::var(n, i), map, Some(basis), budget)?.f_expression {
            Some(gi) => inverse.push(gi),
            None => return Ok(None),
        }
    }
    Ok(Some(inverse))
}
