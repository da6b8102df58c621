//! Exhaustive ground truth at desk scale.
//!
//! Everything here is exact or refuses: compositions are enumerated one by
//! one under a budget, realization counts are big integers (or, above
//! `EXACT_LIMIT`, log-domain sums normalized by m^n), and lattice points
//! under integer constraints are counted by dynamic programming.

use std::thread;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::bounds::theta0_entropy;
use crate::constraints::{theta_infinity, Category, ConstraintSystem, Membership, ToleranceSpec};
use crate::counting::{binomial, lambda_lower_bound, ln_a_constant, LogScalar};
use crate::discretize::round_to_counts;
use crate::error::{Error, Result};
use crate::maxent::MaxEntSolution;
use crate::special::LN_SQRT_2PI;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Above this n the per-vector counts are only accumulated in logs.
pub const EXACT_LIMIT: u64 = 2000;

/// Criterion comparisons closer than this to the threshold are flagged.
pub const BOUNDARY_WINDOW: f64 = 1e-12;

const DP_MEMORY_LIMIT: u64 = 2 << 30;

fn big_string<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn opt_big_string<S: Serializer>(x: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// C(n + m − 1, m − 1), the size of F_n.
pub fn composition_count(m: usize, n: u64) -> BigUint {
    binomial(n + m as u64 - 1, m as u64 - 1)
}

fn check_budget(m: usize, n: u64, budget: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let total = composition_count(m, n);
    match total.to_u64() {
        Some(t) if t <= budget => Ok(t),
        _ => Err(Error::Budget { needed: total.to_f64().unwrap_or(f64::INFINITY), budget }),
    }
}

/// Count vectors of n into m parts, in lexicographic order.
#[derive(Clone, Debug)]
pub struct Compositions {
    nu: Vec<u64>,
    done: bool,
    started: bool,
}

impl Compositions {
    fn new(m: usize, n: u64) -> Self {
        let mut nu = vec![0; m];
        nu[m - 1] = n;
        Compositions { nu, done: false, started: false }
    }

    /// Advances in place; the smallest vector is (0, …, 0, n), the largest
    /// (n, 0, …, 0).
    fn advance(&mut self) -> bool {
        let m = self.nu.len();
        if m == 1 {
            return false;
        }
        // rightmost i ≤ m − 2 with a positive suffix sum after it
        let mut suffix = 0;
        let mut i = m - 1;
        while i > 0 {
            suffix += self.nu[i];
            i -= 1;
            if suffix > 0 {
                self.nu[i] += 1;
                for v in &mut self.nu[i + 1..] {
                    *v = 0;
                }
                self.nu[m - 1] = suffix - 1;
                return true;
            }
        }
        false
    }

    pub fn current(&self) -> &[u64] {
        &self.nu
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(self.nu.clone())
    }
}

/// Every f ∈ F_n exactly once, as count vectors in lexicographic order.
pub fn enumerate_fn(m: usize, n: u64, budget: u64) -> Result<Compositions> {
    check_budget(m, n, budget)?;
    Ok(Compositions::new(m, n))
}

/// Calls `visit` on every composition of n into m parts, without
/// allocating per vector.
pub fn for_each_composition<F: FnMut(&[u64])>(m: usize, n: u64, budget: u64, mut visit: F) -> Result<u64> {
    let total = check_budget(m, n, budget)?;
    let mut it = Compositions::new(m, n);
    loop {
        visit(it.current());
        if !it.advance() {
            break;
        }
    }
    Ok(total)
}

fn for_each_with_first<F: FnMut(&[u64])>(m: usize, n: u64, first: u64, mut visit: F) {
    let mut buf = vec![0; m];
    buf[0] = first;
    if m == 1 {
        if first == n {
            visit(&buf);
        }
        return;
    }
    let mut it = Compositions::new(m - 1, n - first);
    loop {
        buf[1..].copy_from_slice(it.current());
        visit(&buf);
        if !it.advance() {
            break;
        }
    }
}

/// Which vectors count as "good".
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "criterion")]
pub enum Criterion {
    /// H(f) ≥ (1 − η)H*
    Entropy { eta: f64 },
    /// ‖f − φ*‖1 ≤ ϑ
    Norm { theta: f64 },
}

impl Criterion {
    fn validate(self) -> Result<()> {
        match self {
            Criterion::Entropy { eta } if !(eta >= 0.0 && eta.is_finite()) => {
                Err(Error::Precondition(format!("η = {eta} must be nonnegative")))
            }
            Criterion::Norm { theta } if !(theta >= 0.0 && theta.is_finite()) => {
                Err(Error::Precondition(format!("ϑ = {theta} must be nonnegative")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorDetail {
    pub nu: Vec<u64>,
    pub entropy: f64,
    pub l1: f64,
    pub linf: f64,
    #[serde(serialize_with = "opt_big_string")]
    pub count: Option<BigUint>,
    pub in_c: bool,
    pub in_a: bool,
    pub boundary: bool,
}

/// Exact partition of the constraint-satisfying vectors of F_n into the
/// good set A and the rest B.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnumerationReport {
    pub n: u64,
    pub m: usize,
    pub criterion: Criterion,
    #[serde(serialize_with = "big_string")]
    pub total_vectors: BigUint,
    /// |F_n ∩ C(δ)|
    pub in_c: u64,
    pub a_vectors: u64,
    pub b_vectors: u64,
    /// exact realization counts (n ≤ `EXACT_LIMIT`)
    #[serde(serialize_with = "opt_big_string")]
    pub realizations_in_c: Option<BigUint>,
    #[serde(serialize_with = "opt_big_string")]
    pub a_count: Option<BigUint>,
    #[serde(serialize_with = "opt_big_string")]
    pub b_count: Option<BigUint>,
    /// the same counts in logs (always present)
    pub a_log: LogScalar,
    pub b_log: LogScalar,
    /// #A / (#A + #B)
    pub ratio: f64,
    /// vectors within the boundary window of the threshold (counted in A)
    pub boundary: u64,
    pub detail: Option<Vec<VectorDetail>>,
}

struct Classifier<'a> {
    membership: Membership,
    criterion: Criterion,
    phi: &'a [f64],
    h_star: f64,
    n: u64,
    ln_fact: Vec<f64>,
    big_fact: Option<Vec<BigUint>>,
    nlnn: Vec<f64>,
    /// n ln m, the log of the sum of all realization counts
    pivot: f64,
}

#[derive(Default)]
struct Partial {
    in_c: u64,
    a_vectors: u64,
    b_vectors: u64,
    a_exact: BigUint,
    b_exact: BigUint,
    /// Σ exp(ln #f − n ln m)
    a_scaled: f64,
    b_scaled: f64,
    boundary: u64,
    detail: Vec<VectorDetail>,
}

impl Partial {
    fn merge(&mut self, o: Partial) {
        self.in_c += o.in_c;
        self.a_vectors += o.a_vectors;
        self.b_vectors += o.b_vectors;
        self.a_exact += o.a_exact;
        self.b_exact += o.b_exact;
        self.a_scaled += o.a_scaled;
        self.b_scaled += o.b_scaled;
        self.boundary += o.boundary;
        self.detail.extend(o.detail);
    }
}

impl<'a> Classifier<'a> {
    fn new(
        cs: &ConstraintSystem,
        delta: &ToleranceSpec,
        sol: &'a MaxEntSolution,
        n: u64,
        criterion: Criterion,
    ) -> Result<Self> {
        let nn = n as usize;
        let mut ln_fact = vec![0.0; nn + 1];
        for k in 1..=nn {
            ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
        }
        let big_fact = (n <= EXACT_LIMIT).then(|| {
            let mut v = vec![BigUint::one(); nn + 1];
            for k in 1..=nn {
                v[k] = &v[k - 1] * BigUint::from(k);
            }
            v
        });
        let nlnn = (0..=nn).map(|k| if k == 0 { 0.0 } else { k as f64 * (k as f64).ln() }).collect();
        Ok(Classifier {
            membership: Membership::new(cs, delta)?,
            criterion,
            phi: &sol.phi_star,
            h_star: sol.h_star,
            n,
            ln_fact,
            big_fact,
            nlnn,
            pivot: n as f64 * (cs.m() as f64).ln(),
        })
    }

    fn entropy(&self, nu: &[u64]) -> f64 {
        let nf = self.n as f64;
        let s: f64 = nu.iter().map(|&v| self.nlnn[v as usize]).sum();
        (nf.ln() - s / nf).max(0.0)
    }

    fn l1(&self, nu: &[u64]) -> f64 {
        let nf = self.n as f64;
        nu.iter().zip(self.phi).map(|(&v, p)| (v as f64 / nf - p).abs()).sum()
    }

    fn l1_exact(&self, nu: &[u64]) -> BigRational {
        let n = BigRational::from_integer(self.n.into());
        nu.iter()
            .zip(self.phi)
            .map(|(&v, &p)| {
                let f = BigRational::from_integer(v.into()) / &n;
                let p = BigRational::from_float(p).unwrap_or_else(BigRational::zero);
                (f - p).abs()
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// (in A, on the boundary)
    fn classify(&self, nu: &[u64]) -> (bool, bool) {
        match self.criterion {
            Criterion::Entropy { eta } => {
                let thr = (1.0 - eta) * self.h_star;
                let h = self.entropy(nu);
                let boundary = (h - thr).abs() <= BOUNDARY_WINDOW;
                (h >= thr || boundary, boundary)
            }
            Criterion::Norm { theta } => {
                let d = self.l1(nu);
                if (d - theta).abs() > 1e-9 {
                    return (d <= theta, false);
                }
                // close to the threshold: decide on exact rationals
                let exact = self.l1_exact(nu);
                let t = BigRational::from_float(theta).unwrap_or_else(BigRational::zero);
                let w = BigRational::from_float(BOUNDARY_WINDOW).unwrap();
                let boundary = (&exact - &t).abs() <= w;
                (exact <= t || boundary, boundary)
            }
        }
    }

    fn visit(&self, nu: &[u64], acc: &mut Partial, detail: bool) {
        let in_c = self.membership.contains_counts(nu, self.n);
        let ln_count = self.ln_fact[self.n as usize] - nu.iter().map(|&v| self.ln_fact[v as usize]).sum::<f64>();
        let exact = if in_c || detail {
            self.big_fact.as_ref().map(|f| {
                let den = nu.iter().fold(BigUint::one(), |a, &v| a * &f[v as usize]);
                &f[self.n as usize] / den
            })
        } else {
            None
        };
        let (in_a, boundary) = if in_c { self.classify(nu) } else { (false, false) };
        if in_c {
            acc.in_c += 1;
            let scaled = (ln_count - self.pivot).exp();
            if in_a {
                acc.a_vectors += 1;
                acc.a_scaled += scaled;
                if let Some(e) = &exact {
                    acc.a_exact += e;
                }
            } else {
                acc.b_vectors += 1;
                acc.b_scaled += scaled;
                if let Some(e) = &exact {
                    acc.b_exact += e;
                }
            }
            if boundary {
                acc.boundary += 1;
            }
        }
        if detail {
            let nf = self.n as f64;
            let linf = nu.iter().zip(self.phi).map(|(&v, p)| (v as f64 / nf - p).abs()).fold(0.0, f64::max);
            acc.detail.push(VectorDetail {
                nu: nu.to_vec(),
                entropy: self.entropy(nu),
                l1: self.l1(nu),
                linf,
                count: exact,
                in_c,
                in_a,
                boundary,
            });
        }
    }
}

fn worker_count() -> usize {
    thread::available_parallelism().map(|p| p.get()).unwrap_or(1).min(16)
}

/// Enumerates F_n, filters by C(δ), and splits the realizations between
/// the criterion's good set A and its complement B. The work is split by
/// the first coordinate; the result does not depend on the thread count.
pub fn concentration_report(
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    sol: &MaxEntSolution,
    n: u64,
    criterion: Criterion,
    budget: u64,
    with_detail: bool,
) -> Result<EnumerationReport> {
    criterion.validate()?;
    let m = cs.m();
    if sol.m() != m {
        return Err(Error::Dimension { expected: m, got: sol.m() });
    }
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    check_budget(m, n, budget)?;
    let classifier = Classifier::new(cs, delta, sol, n, criterion)?;
    let workers = worker_count();
    let mut parts: Vec<(u64, Partial)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let c = &classifier;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut first = w as u64;
                    while first <= n {
                        let mut acc = Partial::default();
                        for_each_with_first(m, n, first, |nu| c.visit(nu, &mut acc, with_detail));
                        out.push((first, acc));
                        first += workers as u64;
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("enumeration worker panicked")).collect()
    });
    parts.sort_by_key(|(k, _)| *k);
    let mut total = Partial::default();
    for (_, p) in parts {
        total.merge(p);
    }

    let exact = n <= EXACT_LIMIT;
    let pivot = classifier.pivot;
    let to_log = |scaled: f64, e: &BigUint| {
        if exact {
            LogScalar::from_big(e)
        } else if scaled > 0.0 {
            LogScalar::from_ln(scaled.ln() + pivot)
        } else {
            LogScalar::ZERO
        }
    };
    let a_log = to_log(total.a_scaled, &total.a_exact);
    let b_log = to_log(total.b_scaled, &total.b_exact);
    let ratio = if exact {
        let all = &total.a_exact + &total.b_exact;
        if all.is_zero() {
            f64::NAN
        } else {
            BigRational::new(total.a_exact.clone().into(), all.into()).to_f64().unwrap_or(f64::NAN)
        }
    } else {
        let s = total.a_scaled + total.b_scaled;
        if s > 0.0 {
            total.a_scaled / s
        } else {
            f64::NAN
        }
    };
    Ok(EnumerationReport {
        n,
        m,
        criterion,
        total_vectors: composition_count(m, n),
        in_c: total.in_c,
        a_vectors: total.a_vectors,
        b_vectors: total.b_vectors,
        realizations_in_c: exact.then(|| &total.a_exact + &total.b_exact),
        a_count: exact.then(|| total.a_exact.clone()),
        b_count: exact.then(|| total.b_exact.clone()),
        a_log,
        b_log,
        ratio,
        boundary: total.boundary,
        detail: with_detail.then_some(total.detail),
    })
}

/// Exact counts against the lemma bounds at one n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub n: u64,
    pub criterion: Criterion,
    pub alpha: f64,
    /// θ0 or θ′0 at the given α
    pub theta0: f64,
    #[serde(serialize_with = "big_string")]
    pub lambda: BigUint,
    /// exact |A| (vectors) against Λ
    pub a_vectors: u64,
    pub b_exact: LogScalar,
    pub b_upper: LogScalar,
    pub a_exact: LogScalar,
    pub a_lower: LogScalar,
    pub upper_holds: bool,
    pub lower_holds: bool,
    pub size_holds: bool,
}

impl LemmaCheck {
    pub fn all_hold(&self) -> bool {
        self.upper_holds && self.lower_holds && self.size_holds
    }
}

/// Compares the exact #B and #A with the upper bound on #B and the lower
/// bound on #A, in logs with a 1e−9 relative slack.
pub fn verify_lemma_bounds(
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    sol: &MaxEntSolution,
    n: u64,
    criterion: Criterion,
    alpha: f64,
    budget: u64,
) -> Result<LemmaCheck> {
    if n < 100 {
        return Err(Error::Precondition(format!(
            "the upper-bound constants assume n ≥ 100, got n = {n}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Precondition(format!("α = {alpha} is outside (0, 1)")));
    }
    let report = concentration_report(cs, delta, sol, n, criterion, budget, false)?;
    let m = cs.m();
    let mu = sol.mu_star;
    let nf = n as f64;
    let h = sol.h_star;
    let theta_inf = theta_infinity(cs, delta)?;
    let (b_rate, a_rate, theta0) = match criterion {
        Criterion::Entropy { eta } => {
            if alpha * eta * h > m as f64 / 21.0 {
                return Err(Error::Precondition(format!(
                    "αηH* = {:.4e} exceeds m/21; the entropy radius is not valid there",
                    alpha * eta * h
                )));
            }
            let (t0, _) = theta0_entropy(alpha, eta, h, m, theta_inf, sol.phi_min);
            ((1.0 - eta) * h, (1.0 - alpha * eta) * h, t0)
        }
        Criterion::Norm { theta } => {
            let y = alpha * theta;
            let t0 = theta_inf.min(y).min(sol.phi_min);
            (h - theta * theta / 2.0, h - y * (m as f64 / y).ln(), t0)
        }
    };
    let ln_upper = 4.004f64.ln() + LN_SQRT_2PI + m as f64 * 0.6f64.ln() + (m as f64 - 1.0) / 2.0 * nf.ln() + nf * b_rate;
    let lambda = lambda_lower_bound(n, theta0, m, mu)?;
    let a_lower = if lambda.is_zero() {
        LogScalar::ZERO
    } else {
        LogScalar::from_big(&lambda)
            * LogScalar::from_ln(ln_a_constant(mu) - (mu as f64 - 1.0) / 2.0 * nf.ln() + nf * a_rate)
    };
    let b_upper = LogScalar::from_ln(ln_upper);
    let slack = |x: f64| 1e-9 * x.abs().max(1.0);
    let upper_holds = report.b_log.is_zero() || report.b_log.ln() < b_upper.ln() + slack(b_upper.ln());
    let lower_holds = a_lower.is_zero() || report.a_log.ln() >= a_lower.ln() - slack(a_lower.ln());
    let size_holds = lambda <= BigUint::from(report.a_vectors);
    Ok(LemmaCheck {
        n,
        criterion,
        alpha,
        theta0,
        lambda,
        a_vectors: report.a_vectors,
        b_exact: report.b_log,
        b_upper,
        a_exact: report.a_log,
        a_lower,
        upper_holds,
        lower_holds,
        size_holds,
    })
}

/// #f* against the complement set B at one n: the f*-only statements say
/// #f* > #B/ε once n passes their threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceCheck {
    pub n: u64,
    pub fstar: Vec<u64>,
    pub fstar_in_c: bool,
    pub fstar_count: LogScalar,
    pub b_count: LogScalar,
    /// ln(#f* / #B); +∞ when B is empty
    pub ln_ratio: f64,
}

impl DominanceCheck {
    pub fn holds(&self, epsilon: f64) -> bool {
        self.fstar_in_c && self.ln_ratio > -epsilon.ln()
    }
}

pub fn fstar_dominance(
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    sol: &MaxEntSolution,
    n: u64,
    criterion: Criterion,
    budget: u64,
) -> Result<DominanceCheck> {
    let report = concentration_report(cs, delta, sol, n, criterion, budget, false)?;
    let fstar = round_to_counts(sol, n)?;
    let membership = Membership::new(cs, delta)?;
    let fstar_in_c = membership.contains_counts(&fstar.nu, n);
    let fstar_count = LogScalar::from_big(&crate::counting::multinomial_count(&fstar));
    let ln_ratio = if report.b_log.is_zero() { f64::INFINITY } else { fstar_count.ln() - report.b_log.ln() };
    Ok(DominanceCheck { n, fstar: fstar.nu, fstar_in_c, fstar_count, b_count: report.b_log, ln_ratio })
}

/// Equality or inequality of one integer row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOp {
    Eq,
    Le,
}

/// Σ a_i ν_i (= or ≤) b·n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntRow {
    pub a: Vec<i64>,
    pub b: i64,
    pub op: RowOp,
}

/// Exact constraints on count vectors, with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerSystem {
    pub m: usize,
    pub rows: Vec<IntRow>,
}

fn decimal_scale(values: &[f64]) -> Option<i64> {
    let mut scale = 1i64;
    for _ in 0..=9 {
        let ok = values.iter().all(|&v| {
            let x = v * scale as f64;
            (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0) && x.abs() < 9e15
        });
        if ok {
            return Some(scale);
        }
        scale *= 10;
    }
    None
}

impl IntegerSystem {
    pub fn new(m: usize, rows: Vec<IntRow>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.a.len() != m) {
            return Err(Error::Dimension { expected: m, got: r.a.len() });
        }
        Ok(IntegerSystem { m, rows })
    }

    /// The system satisfied exactly (all tolerances zero). Every row must
    /// have a decimal expansion of at most nine places.
    pub fn from_constraints(cs: &ConstraintSystem) -> Result<Self> {
        let mut rows = Vec::new();
        for c in Category::ALL {
            let (a, b) = cs.block(c);
            for (row, rhs) in a.iter().zip(b) {
                let mut vals = row.clone();
                vals.push(rhs);
                let scale = decimal_scale(&vals).ok_or_else(|| {
                    Error::InvalidSystem("a constraint row has no short decimal form".into())
                })?;
                rows.push(IntRow {
                    a: row.iter().map(|v| (v * scale as f64).round() as i64).collect(),
                    b: (rhs * scale as f64).round() as i64,
                    op: if c.is_equality() { RowOp::Eq } else { RowOp::Le },
                });
            }
        }
        IntegerSystem::new(cs.m(), rows)
    }

    pub fn contains(&self, nu: &[u64], n: u64) -> bool {
        self.rows.iter().all(|r| {
            let lhs: i128 = r.a.iter().zip(nu).map(|(&a, &v)| a as i128 * v as i128).sum();
            let rhs = r.b as i128 * n as i128;
            match r.op {
                RowOp::Eq => lhs == rhs,
                RowOp::Le => lhs <= rhs,
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Closed,
    Dp,
    Enumeration,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeCount {
    #[serde(serialize_with = "big_string")]
    pub count: BigUint,
    pub method: CountMethod,
}

/// Number of ν ∈ ℕ^m with Σν = n satisfying every row exactly. Uses a
/// dense DP over the running row totals when it fits in memory, otherwise
/// enumerates under `budget`.
pub fn count_lattice_points(sys: &IntegerSystem, n: u64, budget: u64) -> Result<LatticeCount> {
    if sys.m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    if sys.rows.is_empty() {
        return Ok(LatticeCount { count: composition_count(sys.m, n), method: CountMethod::Closed });
    }
    match lattice_dp(sys, n) {
        Ok(Some(c)) => return Ok(LatticeCount { count: BigUint::from(c), method: CountMethod::Dp }),
        Ok(None) => return Ok(LatticeCount { count: BigUint::zero(), method: CountMethod::Dp }),
        Err(_) => {}
    }
    count_by_enumeration(sys, n, budget)
}

/// The enumeration path on its own, for cross-checking the DP.
pub fn count_by_enumeration(sys: &IntegerSystem, n: u64, budget: u64) -> Result<LatticeCount> {
    let mut count = 0u64;
    for_each_composition(sys.m, n, budget, |nu| {
        if sys.contains(nu, n) {
            count += 1;
        }
    })?;
    Ok(LatticeCount { count: BigUint::from(count), method: CountMethod::Enumeration })
}

/// `Ok(None)`: provably empty. `Err`: too large or overflowed.
fn lattice_dp(sys: &IntegerSystem, n: u64) -> std::result::Result<Option<u64>, ()> {
    let m = sys.m;
    let ni = n as i128;
    // shift each row to nonnegative weights; equalities may also be flipped,
    // whichever orientation has the smaller target
    let mut weights: Vec<Vec<u64>> = vec![Vec::new(); m];
    let mut targets = Vec::new();
    let mut exact = Vec::new();
    for r in &sys.rows {
        let lo = *r.a.iter().min().unwrap() as i128;
        let hi = *r.a.iter().max().unwrap() as i128;
        let rhs = r.b as i128 * ni;
        let up_target = rhs - lo * ni;
        let down_target = hi * ni - rhs;
        let flip = r.op == RowOp::Eq && down_target < up_target;
        let target = if flip { down_target } else { up_target };
        if target < 0 {
            return Ok(None);
        }
        for (i, &a) in r.a.iter().enumerate() {
            let w = if flip { hi - a as i128 } else { a as i128 - lo };
            weights[i].push(w as u64);
        }
        targets.push(u64::try_from(target).map_err(|_| ())?);
        exact.push(r.op == RowOp::Eq);
    }
    let k = targets.len();
    let mut strides = vec![1u64; k];
    let mut inner = 1u64;
    for r in (0..k).rev() {
        strides[r] = inner;
        inner = inner.checked_mul(targets[r] + 1).ok_or(())?;
    }
    let cells = inner.checked_mul(n + 1).ok_or(())?;
    if cells.checked_mul(8).ok_or(())? > DP_MEMORY_LIMIT {
        return Err(());
    }
    let inner = inner as usize;
    let mut dp = vec![0u64; cells as usize];
    dp[0] = 1;
    let mut digits = vec![0u64; k];
    for w in &weights {
        let offset: u64 = w.iter().zip(&strides).map(|(a, s)| a * s).sum();
        let offset = offset as usize;
        // which total cells can absorb one more copy of this item
        let mut valid = vec![false; inner];
        digits.iter_mut().for_each(|d| *d = 0);
        for v in valid.iter_mut() {
            *v = digits.iter().zip(w).all(|(d, a)| d >= a);
            for r in (0..k).rev() {
                digits[r] += 1;
                if digits[r] <= targets[r] || r == 0 {
                    break;
                }
                digits[r] = 0;
            }
        }
        for u in 1..=n as usize {
            let (prev, cur) = dp.split_at_mut(u * inner);
            let prev = &prev[(u - 1) * inner..];
            let cur = &mut cur[..inner];
            for j in offset..inner {
                if valid[j] {
                    let add = prev[j - offset];
                    if add != 0 {
                        cur[j] = cur[j].checked_add(add).ok_or(())?;
                    }
                }
            }
        }
    }
    let last = &dp[n as usize * inner..];
    let mut total = 0u64;
    digits.iter_mut().for_each(|d| *d = 0);
    for &v in last {
        if digits.iter().zip(&targets).zip(&exact).all(|((d, t), e)| !e || d == t) {
            total = total.checked_add(v).ok_or(())?;
        }
        for r in (0..k).rev() {
            digits[r] += 1;
            if digits[r] <= targets[r] || r == 0 {
                break;
            }
            digits[r] = 0;
        }
    }
    Ok(Some(total))
}

/// The die system with exact mean 4.5: 2(1ν1 + 2ν2 + ⋯ + 6ν6) = 9n.
pub fn die_mean_system() -> IntegerSystem {
    IntegerSystem {
        m: 6,
        rows: vec![IntRow { a: (1..=6).map(|i| 2 * i).collect(), b: 9, op: RowOp::Eq }],
    }
}

/// The quasi-polynomial approximation to the die count, in exact rationals.
pub fn die_polynomial_exact(n: u64) -> BigRational {
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let x = BigRational::from_integer(n.into());
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let x4 = &x3 * &x;
    r(19, 11520) * x4 + r(1, 32) * x3 + r(113, 576) * x2 + r(2101723, 4196000) * x + r(225740219, 755280000)
}

pub fn die_polynomial(n: u64) -> f64 {
    die_polynomial_exact(n).to_f64().unwrap_or(f64::INFINITY)
}

/// Exact count vs. polynomial at one n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialComparison {
    pub n: u64,
    #[serde(serialize_with = "big_string")]
    pub exact: BigUint,
    pub polynomial: f64,
    /// polynomial − exact
    pub difference: f64,
}

pub fn compare_die_polynomial(n: u64) -> Result<PolynomialComparison> {
    let exact = count_lattice_points(&die_mean_system(), n, DEFAULT_BUDGET)?.count;
    let diff = die_polynomial_exact(n) - BigRational::from_integer(exact.clone().into());
    Ok(PolynomialComparison {
        n,
        polynomial: die_polynomial(n),
        difference: diff.to_f64().unwrap_or(f64::NAN),
        exact,
    })
}
