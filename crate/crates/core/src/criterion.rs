//! The wronskian automorphism criterion.
//!
//! For a map with unit Jacobian determinant, let `M = [δ_i x_j]` and let
//! `a^k_{ij}` be the determinant of `M` with row `j` replaced by
//! `(δ_k δ_i x_1, ..., δ_k δ_i x_n)`. These are the inner entries of the
//! connection matrices `A_k = δ_k W · W^{-1}`. The map is an automorphism iff
//! every `a^k_{ij}` lies in `Q[F]`.
//!
//! Only `n^2 (n+1) / 2 - n` entries are evaluated. The rest follow from
//! `a^k_{ij} = a^i_{kj}` and `Σ_i a^k_{ii} = 0`.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groebner::{self, Budget, GroebnerBasis, MembershipResult, DEFAULT_STEP_BUDGET};
use crate::nambu::{self, DerivationTables, PolynomialMap};
use crate::polymatrix::{PolyMatrix, COFACTOR_CUTOFF};
use crate::polyring::{Polynomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Computed,
    /// Copied from the mirror entry `a^i_{kj}`.
    BySymmetry,
    /// `a^k_{kk} = -Σ_{i≠k} a^k_{ii}`.
    ByTrace,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Computed => "computed",
            Provenance::BySymmetry => "by-symmetry",
            Provenance::ByTrace => "by-trace",
        }
    }
}

/// Index of `a^k_{ij}`, 0-based; displayed 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WronskianIndex {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub provenance: Provenance,
}

impl WronskianIndex {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.k, self.i, self.j)
    }
}

impl fmt::Display for WronskianIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{}_{}{}", self.k + 1, self.i + 1, self.j + 1)
    }
}

/// `n^2 (n+1) / 2 - n`.
pub fn reduced_count(n: usize) -> usize {
    n * n * (n + 1) / 2 - n
}

fn provenance_of(k: usize, i: usize, j: usize) -> Provenance {
    if k > i {
        Provenance::BySymmetry
    } else if k == i && i == j {
        Provenance::ByTrace
    } else {
        Provenance::Computed
    }
}

/// Every `(k, i, j)` in lexicographic order, tagged with how it is obtained.
pub fn reconstruction_plan(n: usize) -> Vec<WronskianIndex> {
    let mut plan = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                plan.push(WronskianIndex { k, i, j, provenance: provenance_of(k, i, j) });
            }
        }
    }
    plan
}

/// The entries evaluated as determinants: `k <= i`, excluding `k = i = j`.
pub fn reduced_index_set(n: usize) -> Vec<WronskianIndex> {
    reconstruction_plan(n).into_iter().filter(|w| w.provenance == Provenance::Computed).collect()
}

/// `a^k_{ij}` as the row-replaced determinant of `[δ_i x_j]`.
pub fn wronskian_entry(tables: &DerivationTables, k: usize, i: usize, j: usize) -> Result<Polynomial> {
    check_indices(tables.n(), k, i, j)?;
    tables.first_matrix().row_replaced_determinant(j, tables.second_row(k, i))
}

/// `a^k_{ij} = Σ_r δ_k δ_i x_r · ∂F_j/∂x_r`, from `[δ_i x_j]^{-1} = J_F^T`.
/// Independent of any determinant evaluation.
pub fn product_form_entry(
    tables: &DerivationTables,
    map: &PolynomialMap,
    k: usize,
    i: usize,
    j: usize,
) -> Result<Polynomial> {
    let n = tables.n();
    check_indices(n, k, i, j)?;
    if map.n() != n {
        return Err(Error::ArityMismatch { left: n, right: map.n() });
    }
    let fj = &map.components()[j];
    let mut acc = Polynomial::zero(n);
    for r in 0..n {
        let w = tables.second(k, i, r);
        if !w.is_zero() {
            acc = acc + w * &fj.partial_derivative(r)?;
        }
    }
    Ok(acc)
}

/// `a^k_{kk}` from the other diagonal entries `a^k_{ii}`, `i ≠ k`.
pub fn trace_reconstruct<'a>(others: impl IntoIterator<Item = &'a Polynomial>, arity: usize) -> Polynomial {
    -others.into_iter().fold(Polynomial::zero(arity), |acc, p| acc + p)
}

/// The full `(n+1) x (n+1)` matrix `A_k = δ_k W · W^{-1}` by explicit matrix
/// products, where `W = [δ_i x_j]` with `δ_0 = id` and `x_0 = 1`.
pub fn connection_matrix(tables: &DerivationTables, k: usize) -> Result<PolyMatrix> {
    let n = tables.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, size: n });
    }
    let w = PolyMatrix::from_fn(n + 1, n + 1, n, |r, c| match (r, c) {
        (0, 0) => Polynomial::one(n),
        (0, c) => Polynomial::var(n, c - 1),
        (_, 0) => Polynomial::zero(n),
        (r, c) => tables.first(r - 1, c - 1).clone(),
    });
    let dw = PolyMatrix::from_fn(n + 1, n + 1, n, |r, c| match (r, c) {
        (_, 0) => Polynomial::zero(n),
        (0, c) => tables.first(k, c - 1).clone(),
        (r, c) => tables.second(k, r - 1, c - 1).clone(),
    });
    // det W = 1, so W^{-1} = adj(W)
    dw.matmul(&w.adjugate()?)
}

fn check_indices(n: usize, k: usize, i: usize, j: usize) -> Result<()> {
    for idx in [k, i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, size: n });
        }
    }
    Ok(())
}

/// How computed entries are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EntryMethod {
    /// One determinant per entry.
    Direct,
    /// Laplace expansion along the replaced row, with the cofactors of
    /// `[δ_i x_j]` computed once.
    CachedCofactors,
    /// `Direct` up to the cofactor cutoff, `CachedCofactors` above it.
    #[default]
    Auto,
}

struct Evaluator<'a> {
    tables: &'a DerivationTables,
    /// adj([δ_i x_j]); `adj[r][j]` is the cofactor of position `(j, r)`.
    adjugate: Option<PolyMatrix>,
}

impl<'a> Evaluator<'a> {
    fn new(tables: &'a DerivationTables, method: EntryMethod) -> Result<Self> {
        let cached = match method {
            EntryMethod::Direct => false,
            EntryMethod::CachedCofactors => true,
            EntryMethod::Auto => tables.n() > COFACTOR_CUTOFF,
        };
        let adjugate = if cached { Some(tables.first_matrix().adjugate()?) } else { None };
        Ok(Evaluator { tables, adjugate })
    }

    fn entry(&self, k: usize, i: usize, j: usize) -> Result<Polynomial> {
        let Some(adj) = &self.adjugate else {
            return wronskian_entry(self.tables, k, i, j);
        };
        let n = self.tables.n();
        let row = self.tables.second_row(k, i);
        let mut acc = Polynomial::zero(n);
        for (r, w) in row.iter().enumerate() {
            let cof = adj.get(r, j);
            if !w.is_zero() && !cof.is_zero() {
                acc = acc + w * cof;
            }
        }
        Ok(acc)
    }
}

/// All `n^3` inner entries of `A_1..A_n`.
#[derive(Clone, Debug)]
pub struct WronskianTable {
    n: usize,
    values: Vec<Polynomial>,
    provenance: Vec<Provenance>,
}

impl WronskianTable {
    pub fn n(&self) -> usize {
        self.n
    }

    fn pos(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.n + i) * self.n + j
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &Polynomial {
        &self.values[self.pos(k, i, j)]
    }

    pub fn provenance(&self, k: usize, i: usize, j: usize) -> Provenance {
        self.provenance[self.pos(k, i, j)]
    }

    /// All entries in `(k, i, j)` order.
    pub fn indices(&self) -> impl Iterator<Item = WronskianIndex> + '_ {
        let n = self.n;
        (0..n * n * n).map(move |p| WronskianIndex {
            k: p / (n * n),
            i: (p / n) % n,
            j: p % n,
            provenance: self.provenance[p],
        })
    }

    pub fn count(&self, provenance: Provenance) -> usize {
        self.provenance.iter().filter(|&&p| p == provenance).count()
    }

    /// Triples `(k, i, j)` with `a^k_{ij} ≠ a^i_{kj}`.
    pub fn symmetry_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n;
        let mut bad = Vec::new();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if k != i && self.get(k, i, j) != self.get(i, k, j) {
                        bad.push((k, i, j));
                    }
                }
            }
        }
        bad
    }

    /// Values of `k` with `Σ_i a^k_{ii} ≠ 0`.
    pub fn trace_violations(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&k| {
                let sum = (0..self.n).fold(Polynomial::zero(self.n), |acc, i| acc + self.get(k, i, i));
                !sum.is_zero()
            })
            .collect()
    }
}

/// Evaluate the wronskian table. With `full` every entry is a determinant;
/// otherwise only [`reduced_index_set`] is, and the rest are reconstructed.
pub fn compute_wronskians(
    tables: &DerivationTables,
    full: bool,
    method: EntryMethod,
    budget: &Budget,
) -> Result<WronskianTable> {
    let n = tables.n();
    let plan = reconstruction_plan(n);
    let evaluator = Evaluator::new(tables, method)?;
    let direct: Vec<&WronskianIndex> =
        plan.iter().filter(|w| full || w.provenance == Provenance::Computed).collect();
    let computed = direct
        .par_iter()
        .map(|w| {
            budget.check_deadline()?;
            evaluator.entry(w.k, w.i, w.j)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut values: Vec<Option<Polynomial>> = vec![None; n * n * n];
    let mut provenance = vec![Provenance::Computed; n * n * n];
    for (w, v) in direct.iter().zip(computed) {
        values[(w.k * n + w.i) * n + w.j] = Some(v);
    }
    if !full {
        for w in plan.iter().filter(|w| w.provenance == Provenance::BySymmetry) {
            let pos = (w.k * n + w.i) * n + w.j;
            values[pos] = values[(w.i * n + w.k) * n + w.j].clone();
            provenance[pos] = Provenance::BySymmetry;
        }
        for k in 0..n {
            let pos = (k * n + k) * n + k;
            let others: Vec<&Polynomial> = (0..n)
                .filter(|&i| i != k)
                .map(|i| values[(k * n + i) * n + i].as_ref().expect("off-diagonal entries are filled"))
                .collect();
            values[pos] = Some(trace_reconstruct(others, n));
            provenance[pos] = Provenance::ByTrace;
        }
    }
    let values = values.into_iter().map(|v| v.expect("every entry is filled")).collect();
    Ok(WronskianTable { n, values, provenance })
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Stop membership testing at the first failing entry.
    pub early_exit: bool,
    /// Worker threads; `None` uses every available core.
    pub parallelism: Option<usize>,
    /// Evaluate all `n^3` entries directly and test each one.
    pub no_reduction: bool,
    pub budget_steps: u64,
    pub timeout: Option<Duration>,
    /// Skip the Gröbner phase entirely (wronskian values only).
    pub skip_membership: bool,
    /// Extract the inverse map on a positive verdict.
    pub compute_inverse: bool,
    pub entry_method: EntryMethod,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            early_exit: true,
            parallelism: None,
            no_reduction: false,
            budget_steps: DEFAULT_STEP_BUDGET,
            timeout: None,
            skip_membership: false,
            compute_inverse: true,
            entry_method: EntryMethod::Auto,
        }
    }
}

impl CheckOptions {
    pub fn budget(&self) -> Budget {
        let b = Budget::new(self.budget_steps);
        match self.timeout {
            Some(t) => b.with_timeout(t),
            None => b,
        }
    }

    /// Run `f` on a pool of the configured width.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match self.parallelism {
            Some(width) => rayon::ThreadPoolBuilder::new()
                .num_threads(width.max(1))
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Automorphism,
    NotAutomorphism,
    InconclusiveBudget,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Automorphism => "automorphism",
            Verdict::NotAutomorphism => "not-automorphism",
            Verdict::InconclusiveBudget => "inconclusive-budget",
        }
    }
}

#[derive(Clone, Debug)]
pub struct WronskianEntry {
    pub index: WronskianIndex,
    /// Value in `x`, for the unit-determinant normalization of the map.
    pub value: Polynomial,
    /// `None` when membership was not decided (early exit, budget, or a
    /// reconstructed entry whose sources were not all members).
    pub membership: Option<MembershipResult>,
}

#[derive(Clone, Debug, Default)]
pub struct PhaseTimings {
    pub jacobian: Duration,
    pub tables: Duration,
    pub wronskians: Duration,
    pub groebner: Duration,
    pub membership: Duration,
    pub inverse: Duration,
}

impl PhaseTimings {
    pub fn phases(&self) -> [(&'static str, Duration); 6] {
        [
            ("jacobian", self.jacobian),
            ("tables", self.tables),
            ("wronskians", self.wronskians),
            ("groebner", self.groebner),
            ("membership", self.membership),
            ("inverse", self.inverse),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub map_label: String,
    pub n: usize,
    pub jacobian_det: Rational,
    /// `None` when membership was skipped.
    pub verdict: Option<Verdict>,
    /// All `n^3` entries in `(k, i, j)` order.
    pub entries: Vec<WronskianEntry>,
    pub computed_count: usize,
    pub by_symmetry_count: usize,
    pub by_trace_count: usize,
    pub first_failure: Option<WronskianIndex>,
    /// Polynomial inverse in `y1..yn`.
    pub inverse: Option<Vec<Polynomial>>,
    pub timings: PhaseTimings,
    pub steps_used: u64,
}

impl CriterionReport {
    pub fn derived_count(&self) -> usize {
        self.by_symmetry_count + self.by_trace_count
    }

    pub fn entry(&self, k: usize, i: usize, j: usize) -> &WronskianEntry {
        &self.entries[(k * self.n + i) * self.n + j]
    }
}

/// Run the criterion on `map`.
///
/// Precondition failures (non-constant or zero Jacobian determinant) are
/// returned as errors. Exhausting the budget or the time limit yields a
/// report with [`Verdict::InconclusiveBudget`].
pub fn check_automorphism(map: &PolynomialMap, options: &CheckOptions) -> Result<CriterionReport> {
    options.install(|| run_check(map, options))
}

fn run_check(map: &PolynomialMap, options: &CheckOptions) -> Result<CriterionReport> {
    let n = map.n();
    let budget = options.budget();
    let mut timings = PhaseTimings::default();

    let t = Instant::now();
    let data = nambu::jacobian_data(map)?;
    let det = data.det.clone();
    let unit_map = nambu::rescale_first(map, &det);
    let inverse_jacobian = if det.is_one() {
        data.inverse_jacobian
    } else {
        nambu::jacobian_data(&unit_map)?.inverse_jacobian
    };
    timings.jacobian = t.elapsed();

    let t = Instant::now();
    let tables = nambu::tables_from_inverse(inverse_jacobian)?;
    timings.tables = t.elapsed();

    let t = Instant::now();
    let table = match compute_wronskians(&tables, options.no_reduction, options.entry_method, &budget) {
        Ok(table) => table,
        Err(e) if e.is_budget() => {
            return Ok(inconclusive(map, det, timings, &budget));
        }
        Err(e) => return Err(e),
    };
    timings.wronskians = t.elapsed();

    let mut report = CriterionReport {
        map_label: map.label().to_string(),
        n,
        jacobian_det: det.clone(),
        verdict: None,
        entries: table
            .indices()
            .map(|index| WronskianEntry { index, value: table.get(index.k, index.i, index.j).clone(), membership: None })
            .collect(),
        computed_count: table.count(Provenance::Computed),
        by_symmetry_count: table.count(Provenance::BySymmetry),
        by_trace_count: table.count(Provenance::ByTrace),
        first_failure: None,
        inverse: None,
        timings,
        steps_used: 0,
    };
    if options.skip_membership {
        return Ok(report);
    }

    let t = Instant::now();
    let basis = match groebner::elimination_basis(&unit_map, &budget) {
        Ok(b) => b,
        Err(e) if e.is_budget() => {
            report.timings.groebner = t.elapsed();
            report.verdict = Some(Verdict::InconclusiveBudget);
            report.steps_used = budget.steps_used();
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.timings.groebner = t.elapsed();

    let t = Instant::now();
    let to_original = CoordinateChange::new(n, &det);
    let outcome = test_memberships(&report.entries, &unit_map, &basis, options.early_exit, &budget)?;
    report.timings.membership = t.elapsed();

    for (pos, result) in outcome.results {
        report.entries[pos].membership = Some(to_original.membership(result));
    }
    fill_derived_memberships(&mut report);
    report.first_failure = outcome.first_failure.map(|pos| report.entries[pos].index);
    report.verdict = Some(if outcome.first_failure.is_some() {
        Verdict::NotAutomorphism
    } else if outcome.budget_hit {
        Verdict::InconclusiveBudget
    } else {
        Verdict::Automorphism
    });

    if report.verdict == Some(Verdict::Automorphism) && options.compute_inverse {
        let t = Instant::now();
        match groebner::invert_map(&unit_map, Some(&basis), &budget) {
            Ok(inv) => report.inverse = inv.map(|g| g.iter().map(|p| to_original.apply(p)).collect()),
            Err(e) if e.is_budget() => {}
            Err(e) => return Err(e),
        }
        report.timings.inverse = t.elapsed();
    }
    report.steps_used = budget.steps_used();
    Ok(report)
}

fn inconclusive(map: &PolynomialMap, det: Rational, timings: PhaseTimings, budget: &Budget) -> CriterionReport {
    CriterionReport {
        map_label: map.label().to_string(),
        n: map.n(),
        jacobian_det: det,
        verdict: Some(Verdict::InconclusiveBudget),
        entries: Vec::new(),
        computed_count: 0,
        by_symmetry_count: 0,
        by_trace_count: 0,
        first_failure: None,
        inverse: None,
        timings,
        steps_used: budget.steps_used(),
    }
}

/// Rewrites `y`-expressions for the normalized map `(F_1/c, F_2, ...)` in
/// terms of the original `F` by `y_1 -> y_1 / c`.
struct CoordinateChange {
    n: usize,
    images: Option<Vec<Polynomial>>,
}

impl CoordinateChange {
    fn new(n: usize, det: &Rational) -> Self {
        let images = (!det.is_one()).then(|| {
            (0..n)
                .map(|v| {
                    let y = Polynomial::var(n, v);
                    if v == 0 {
                        y.scale(&det.recip())
                    } else {
                        y
                    }
                })
                .collect()
        });
        CoordinateChange { n, images }
    }

    fn apply(&self, p: &Polynomial) -> Polynomial {
        match &self.images {
            Some(images) => p.substitute(images).expect("images match arity"),
            None => p.clone(),
        }
    }

    fn membership(&self, mut m: MembershipResult) -> MembershipResult {
        if let Some(images) = &self.images {
            let n = self.n;
            let mut full: Vec<Polynomial> = (0..n).map(|v| Polynomial::var(2 * n, v)).collect();
            full.extend(images.iter().map(|p| p.embed(2 * n, n)));
            m.normal_form = m.normal_form.substitute(&full).expect("images match arity");
            m.f_expression = m.f_expression.map(|e| self.apply(&e));
        }
        m
    }
}

struct MembershipOutcome {
    results: Vec<(usize, MembershipResult)>,
    /// Position in the entry list of the first non-member.
    first_failure: Option<usize>,
    budget_hit: bool,
}

fn test_memberships(
    entries: &[WronskianEntry],
    map: &PolynomialMap,
    basis: &GroebnerBasis,
    early_exit: bool,
    budget: &Budget,
) -> Result<MembershipOutcome> {
    let positions: Vec<usize> = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.index.provenance == Provenance::Computed)
        .map(|(p, _)| p)
        .collect();
    // positions above the smallest failing position found so far are skipped
    let cutoff = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<Result<MembershipResult>>> = positions
        .par_iter()
        .map(|&pos| {
            if early_exit && pos > cutoff.load(Ordering::Relaxed) {
                return None;
            }
            let r = groebner::subalgebra_membership(&entries[pos].value, map, Some(basis), budget);
            if let Ok(m) = &r {
                if !m.is_member {
                    cutoff.fetch_min(pos, Ordering::Relaxed);
                }
            }
            Some(r)
        })
        .collect();

    let mut outcome = MembershipOutcome { results: Vec::new(), first_failure: None, budget_hit: false };
    for (&pos, r) in positions.iter().zip(results) {
        match r {
            None => {}
            Some(Ok(m)) => {
                if !m.is_member && outcome.first_failure.is_none() {
                    outcome.first_failure = Some(pos);
                }
                outcome.results.push((pos, m));
            }
            Some(Err(e)) if e.is_budget() => outcome.budget_hit = true,
            Some(Err(e)) => return Err(e),
        }
    }
    if early_exit {
        if let Some(fail) = outcome.first_failure {
            outcome.results.retain(|(pos, _)| *pos <= fail);
        }
    }
    Ok(outcome)
}

/// Memberships of reconstructed entries: a mirror inherits its source's,
/// a trace entry is the negated sum of members.
fn fill_derived_memberships(report: &mut CriterionReport) {
    let n = report.n;
    let pos = |k: usize, i: usize, j: usize| (k * n + i) * n + j;
    let member_expr = |e: &WronskianEntry| -> Option<Polynomial> {
        e.membership.as_ref().and_then(|m| m.f_expression.clone())
    };
    for p in 0..report.entries.len() {
        let index = report.entries[p].index;
        let (k, i, j) = index.triple();
        let derived = match index.provenance {
            Provenance::Computed => continue,
            Provenance::BySymmetry => report.entries[pos(i, k, j)].membership.clone(),
            Provenance::ByTrace => {
                let exprs: Option<Vec<Polynomial>> =
                    (0..n).filter(|&d| d != k).map(|d| member_expr(&report.entries[pos(k, d, d)])).collect();
                exprs.map(|exprs| {
                    let f = trace_reconstruct(&exprs, n);
                    MembershipResult { is_member: true, normal_form: f.embed(2 * n, n), f_expression: Some(f) }
                })
            }
        };
        report.entries[p].membership = derived;
    }
}
