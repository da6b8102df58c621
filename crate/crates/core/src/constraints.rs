//! Linear constraints in four categories: nonzero-RHS equalities and
//! inequalities, and zero-RHS equalities and inequalities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of the four constraint families a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// A= x = b=, b= ≠ 0
    Eq,
    /// A≤ x ≤ b≤, b≤ ≠ 0
    Ineq,
    /// A=0 x = 0
    Eq0,
    /// A≤0 x ≤ 0
    Ineq0,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::Eq, Category::Ineq, Category::Eq0, Category::Ineq0];

    pub fn is_equality(self) -> bool {
        matches!(self, Category::Eq | Category::Eq0)
    }
}

/// A constraint system over m cells. Immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    m: usize,
    eq_a: Vec<Vec<f64>>,
    eq_b: Vec<f64>,
    ineq_a: Vec<Vec<f64>>,
    ineq_b: Vec<f64>,
    eq0_a: Vec<Vec<f64>>,
    ineq0_a: Vec<Vec<f64>>,
}

impl ConstraintSystem {
    /// No constraints besides the simplex.
    pub fn unconstrained(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSystem("m must be positive".into()));
        }
        Ok(ConstraintSystem {
            m,
            eq_a: vec![],
            eq_b: vec![],
            ineq_a: vec![],
            ineq_b: vec![],
            eq0_a: vec![],
            ineq0_a: vec![],
        })
    }

    pub fn new(
        m: usize,
        eq: (Vec<Vec<f64>>, Vec<f64>),
        ineq: (Vec<Vec<f64>>, Vec<f64>),
        eq0: Vec<Vec<f64>>,
        ineq0: Vec<Vec<f64>>,
    ) -> Result<Self> {
        Self::unconstrained(m)?
            .with_equalities(eq.0, eq.1)?
            .with_inequalities(ineq.0, ineq.1)?
            .with_zero_equalities(eq0)?
            .with_zero_inequalities(ineq0)
    }

    pub fn with_equalities(mut self, a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        self.check_block("equalities", &a, Some(&b))?;
        self.eq_a.extend(a);
        self.eq_b.extend(b);
        Ok(self)
    }

    pub fn with_inequalities(mut self, a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        self.check_block("inequalities", &a, Some(&b))?;
        self.ineq_a.extend(a);
        self.ineq_b.extend(b);
        Ok(self)
    }

    pub fn with_zero_equalities(mut self, a: Vec<Vec<f64>>) -> Result<Self> {
        self.check_block("zero_equalities", &a, None)?;
        self.eq0_a.extend(a);
        Ok(self)
    }

    pub fn with_zero_inequalities(mut self, a: Vec<Vec<f64>>) -> Result<Self> {
        self.check_block("zero_inequalities", &a, None)?;
        self.ineq0_a.extend(a);
        Ok(self)
    }

    fn check_block(&self, name: &str, a: &[Vec<f64>], b: Option<&Vec<f64>>) -> Result<()> {
        for (r, row) in a.iter().enumerate() {
            if row.len() != self.m {
                return Err(Error::InvalidSystem(format!(
                    "{name} row {r} has {} columns, expected m = {}",
                    row.len(),
                    self.m
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSystem(format!("{name} row {r} has a non-finite entry")));
            }
        }
        if let Some(b) = b {
            if b.len() != a.len() {
                return Err(Error::InvalidSystem(format!(
                    "{name}: {} rows but {} right-hand sides",
                    a.len(),
                    b.len()
                )));
            }
            for (r, v) in b.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidSystem(format!("{name} rhs {r} is not finite")));
                }
                if *v == 0.0 {
                    return Err(Error::InvalidSystem(format!(
                        "{name} rhs {r} is zero; zero right-hand sides belong in the zero_* categories"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Rows and right-hand sides of one category (zero categories get zeros).
    pub fn block(&self, c: Category) -> (&[Vec<f64>], Vec<f64>) {
        match c {
            Category::Eq => (&self.eq_a, self.eq_b.clone()),
            Category::Ineq => (&self.ineq_a, self.ineq_b.clone()),
            Category::Eq0 => (&self.eq0_a, vec![0.0; self.eq0_a.len()]),
            Category::Ineq0 => (&self.ineq0_a, vec![0.0; self.ineq0_a.len()]),
        }
    }

    pub fn rows(&self, c: Category) -> &[Vec<f64>] {
        self.block(c).0
    }

    pub fn is_empty(&self, c: Category) -> bool {
        self.rows(c).is_empty()
    }

    pub fn has_constraints(&self) -> bool {
        Category::ALL.iter().any(|&c| !self.is_empty(c))
    }

    /// All equality rows (both categories) with their right-hand sides.
    pub fn equality_rows(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut a = self.eq_a.clone();
        let mut b = self.eq_b.clone();
        a.extend(self.eq0_a.iter().cloned());
        b.extend(std::iter::repeat_n(0.0, self.eq0_a.len()));
        (a, b)
    }

    /// All inequality rows (both categories) with their right-hand sides.
    pub fn inequality_rows(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut a = self.ineq_a.clone();
        let mut b = self.ineq_b.clone();
        a.extend(self.ineq0_a.iter().cloned());
        b.extend(std::iter::repeat_n(0.0, self.ineq0_a.len()));
        (a, b)
    }

    /// Whether `other` contains every row of `self` (same m).
    pub fn is_subsystem_of(&self, other: &ConstraintSystem) -> bool {
        fn contains(big: &[Vec<f64>], bb: &[f64], small: &[Vec<f64>], sb: &[f64]) -> bool {
            small.iter().zip(sb).all(|(r, b)| big.iter().zip(bb).any(|(r2, b2)| r == r2 && b == b2))
        }
        self.m == other.m
            && Category::ALL.iter().all(|&c| {
                let (a, b) = self.block(c);
                let (a2, b2) = other.block(c);
                contains(a2, &b2, a, &b)
            })
    }
}

/// ⦀A⦀∞: the largest row ℓ1 norm.
pub fn row_inf_norm(a: &[Vec<f64>]) -> Result<f64> {
    if a.is_empty() || a.iter().all(|r| r.is_empty()) {
        return Err(Error::UndefinedNorm("matrix has no entries"));
    }
    Ok(a.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max))
}

/// A per-category tolerance: a positive number or unbounded (∞).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tolerance {
    Value(f64),
    Unbounded,
}

impl Tolerance {
    pub fn as_f64(self) -> f64 {
        match self {
            Tolerance::Value(v) => v,
            Tolerance::Unbounded => f64::INFINITY,
        }
    }
}

/// δ = (δ=, δ≤, δ=0, δ≤0). `None` means the tolerance was never given,
/// which is an error only if the matching category has rows.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ToleranceSpec {
    pub eq: Option<Tolerance>,
    pub ineq: Option<Tolerance>,
    pub eq0: Option<Tolerance>,
    pub ineq0: Option<Tolerance>,
}

impl ToleranceSpec {
    pub fn unbounded() -> Self {
        ToleranceSpec {
            eq: Some(Tolerance::Unbounded),
            ineq: Some(Tolerance::Unbounded),
            eq0: Some(Tolerance::Unbounded),
            ineq0: Some(Tolerance::Unbounded),
        }
    }

    /// Build from plain numbers, with ∞ meaning unbounded.
    pub fn from_values(eq: f64, ineq: f64, eq0: f64, ineq0: f64) -> Result<Self> {
        let t = |v: f64| -> Result<Option<Tolerance>> {
            if v == f64::INFINITY {
                Ok(Some(Tolerance::Unbounded))
            } else if v > 0.0 && v.is_finite() {
                Ok(Some(Tolerance::Value(v)))
            } else {
                Err(Error::Config(format!("tolerances must be positive, got {v}")))
            }
        };
        Ok(ToleranceSpec { eq: t(eq)?, ineq: t(ineq)?, eq0: t(eq0)?, ineq0: t(ineq0)? })
    }

    pub fn get(&self, c: Category) -> Option<Tolerance> {
        match c {
            Category::Eq => self.eq,
            Category::Ineq => self.ineq,
            Category::Eq0 => self.eq0,
            Category::Ineq0 => self.ineq0,
        }
    }

    /// Checks that every nonempty category has a valid tolerance, returning
    /// them as floats (∞ for unbounded).
    pub fn resolve(&self, cs: &ConstraintSystem) -> Result<[f64; 4]> {
        let mut out = [f64::INFINITY; 4];
        for (k, &c) in Category::ALL.iter().enumerate() {
            if cs.is_empty(c) {
                continue;
            }
            match self.get(c) {
                None => {
                    return Err(Error::Config(format!("missing tolerance for nonempty category {c:?}")))
                }
                Some(Tolerance::Value(v)) if !(v > 0.0) || !v.is_finite() => {
                    return Err(Error::Config(format!("tolerance for {c:?} must be positive, got {v}")))
                }
                Some(t) => out[k] = t.as_f64(),
            }
        }
        Ok(out)
    }
}

/// Allowed absolute deviation for each category: δ=|b=|min, δ≤|b≤|min, δ=0, δ≤0.
fn absolute_slack(cs: &ConstraintSystem, tol: &[f64; 4]) -> [f64; 4] {
    let bmin = |b: &[f64]| b.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let (_, beq) = cs.block(Category::Eq);
    let (_, bin) = cs.block(Category::Ineq);
    [tol[0] * bmin(&beq), tol[1] * bmin(&bin), tol[2], tol[3]]
}

/// θ∞: within this ∞-norm distance of a point satisfying the constraints
/// exactly, every vector satisfies them to accuracy δ.
pub fn theta_infinity(cs: &ConstraintSystem, delta: &ToleranceSpec) -> Result<f64> {
    let tol = delta.resolve(cs)?;
    let slack = absolute_slack(cs, &tol);
    let mut theta = f64::INFINITY;
    for (k, &c) in Category::ALL.iter().enumerate() {
        if cs.is_empty(c) {
            continue;
        }
        let norm = row_inf_norm(cs.rows(c))?;
        let t = if norm == 0.0 { f64::INFINITY } else { slack[k] / norm };
        theta = theta.min(t);
    }
    Ok(theta)
}

/// One row's residual against its allowance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowResidual {
    pub category: Category,
    pub row: usize,
    /// A·f − b (signed)
    pub residual: f64,
    /// allowed |residual| for equalities, allowed positive residual for inequalities
    pub limit: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SatisfactionReport {
    pub satisfied: bool,
    pub rows: Vec<RowResidual>,
}

impl SatisfactionReport {
    /// Largest amount by which any row exceeds its allowance (0 if none).
    pub fn worst_excess(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| {
                let over = if r.category.is_equality() { r.residual.abs() } else { r.residual };
                (over - r.limit).max(0.0)
            })
            .fold(0.0, f64::max)
    }
}

fn check_simplex(f: &[f64]) -> Result<()> {
    if let Some(v) = f.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::NotSimplex(format!("entry {v} is negative or not finite")));
    }
    let s: f64 = f.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(Error::NotSimplex(format!("entries sum to {s}")));
    }
    Ok(())
}

/// Whether f satisfies every category to accuracy δ, with a row-by-row
/// report. f must lie on the simplex (sum within 1e−12).
pub fn satisfies(cs: &ConstraintSystem, delta: &ToleranceSpec, f: &[f64]) -> Result<SatisfactionReport> {
    if f.len() != cs.m() {
        return Err(Error::Dimension { expected: cs.m(), got: f.len() });
    }
    check_simplex(f)?;
    evaluate(cs, delta, |row| row.iter().zip(f).map(|(a, x)| a * x).sum())
}

/// [`satisfies`] for an exact frequency vector ν/n: row products are formed
/// on the integer counts and divided by n once.
pub fn satisfies_counts(
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    nu: &[u64],
    n: u64,
) -> Result<SatisfactionReport> {
    if nu.len() != cs.m() {
        return Err(Error::Dimension { expected: cs.m(), got: nu.len() });
    }
    if nu.iter().sum::<u64>() != n {
        return Err(Error::NotSimplex(format!("counts do not sum to n = {n}")));
    }
    let nf = n as f64;
    evaluate(cs, delta, |row| row.iter().zip(nu).map(|(a, &v)| a * v as f64).sum::<f64>() / nf)
}

fn evaluate<F: Fn(&[f64]) -> f64>(
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    dot: F,
) -> Result<SatisfactionReport> {
    let tol = delta.resolve(cs)?;
    let slack = absolute_slack(cs, &tol);
    let mut rows = Vec::new();
    let mut satisfied = true;
    for (k, &c) in Category::ALL.iter().enumerate() {
        let (a, b) = cs.block(c);
        for (r, (row, rhs)) in a.iter().zip(&b).enumerate() {
            let residual = dot(row) - rhs;
            let limit = slack[k];
            let ok = if c.is_equality() { residual.abs() <= limit } else { residual <= limit };
            satisfied &= ok;
            rows.push(RowResidual { category: c, row: r, residual, limit, ok });
        }
    }
    Ok(SatisfactionReport { satisfied, rows })
}

/// C(δ) with the tolerances resolved once, for membership tests in tight
/// loops. Uses the same arithmetic as [`satisfies_counts`].
#[derive(Clone, Debug)]
pub struct Membership {
    rows: Vec<(Vec<f64>, f64, f64, bool)>,
}

impl Membership {
    pub fn new(cs: &ConstraintSystem, delta: &ToleranceSpec) -> Result<Self> {
        let tol = delta.resolve(cs)?;
        let slack = absolute_slack(cs, &tol);
        let mut rows = Vec::new();
        for (k, &c) in Category::ALL.iter().enumerate() {
            let (a, b) = cs.block(c);
            for (row, rhs) in a.iter().zip(b) {
                rows.push((row.clone(), rhs, slack[k], c.is_equality()));
            }
        }
        Ok(Membership { rows })
    }

    pub fn contains_counts(&self, nu: &[u64], n: u64) -> bool {
        let nf = n as f64;
        self.rows.iter().all(|(row, rhs, limit, eq)| {
            let residual = row.iter().zip(nu).map(|(a, &v)| a * v as f64).sum::<f64>() / nf - rhs;
            if *eq {
                residual.abs() <= *limit
            } else {
                residual <= *limit
            }
        })
    }
}
