//! Explicit concentration thresholds N.
//!
//! Every bound has the same shape. Two curves in a parameter α are set
//! equal: N(α), built from the constants C1, C2 whose common denominator
//! is the exponential rate ((1−α)ηH* for the entropy kinds, ψ(α,ϑ) for the
//! norm kinds), and RHS(α) = scale / θ0(α), where θ0 is a three-way minimum
//! of θ∞, an α-dependent radius and φ*min. The crossing α̂ is found by
//! bisection and N = RHS(α̂).

mod jaynes;

pub use jaynes::{jaynes_comparison, JaynesComparison};

use serde::Serialize;

use crate::constraints::{theta_infinity, ConstraintSystem, ToleranceSpec};
use crate::error::{Error, Result};
use crate::maxent::MaxEntSolution;
use crate::special::bisect;

/// The six thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// entropy-value concentration of the whole set
    Theorem1,
    /// ℓ1 concentration of the whole set
    Theorem2,
    /// f* alone outweighs the low-entropy set
    LemmaCor1,
    /// f* alone outweighs the far-in-ℓ1 set
    LemmaCor2,
    /// the same threshold read for probability distributions
    CorollaryPd,
    /// the uniform distribution with no constraints
    CorollaryUnif,
}

impl BoundKind {
    pub fn is_norm_kind(self) -> bool {
        !matches!(self, BoundKind::Theorem1 | BoundKind::LemmaCor1)
    }

    pub fn label(self) -> &'static str {
        match self {
            BoundKind::Theorem1 => "theorem1",
            BoundKind::Theorem2 => "theorem2",
            BoundKind::LemmaCor1 => "lemma_cor1",
            BoundKind::LemmaCor2 => "lemma_cor2",
            BoundKind::CorollaryPd => "corollary_pd",
            BoundKind::CorollaryUnif => "corollary_unif",
        }
    }
}

/// Which term of min(θ∞, α-radius, φ*min) sets θ0 at α̂, i.e. which term of
/// the final max determines N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ActiveBranch {
    /// the α-dependent tolerance term
    Tolerance,
    /// the constraint-accuracy radius θ∞
    ThetaInfinity,
    /// the smallest nonzero φ* entry
    PhiMin,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityCheck {
    pub condition: String,
    pub passed: bool,
    pub detail: String,
}

/// A computed threshold with everything needed to audit it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// real-valued N = RHS(α̂)
    #[serde(rename = "N")]
    pub n: f64,
    /// the certified integer threshold: ceil(N), at least 100
    #[serde(rename = "N_ceil")]
    pub n_ceil: u64,
    pub alpha_hat: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub theta_inf: f64,
    pub phi_min: f64,
    /// θ0(α̂) for the entropy kinds, θ′0(α̂) for the norm kinds
    pub theta0: f64,
    pub alpha0: Option<f64>,
    pub active_branch: ActiveBranch,
    pub validity: Vec<ValidityCheck>,
    pub notes: Vec<String>,
    pub m: usize,
    pub mu_star: usize,
    pub epsilon: f64,
    pub eta: Option<f64>,
    pub theta: Option<f64>,
    /// α̂ηH* (entropy kinds)
    pub delta_h: Option<f64>,
    /// α̂ϑ (norm kinds): the guaranteed ℓ1 radius of f*
    pub radius: Option<f64>,
    /// N(α̂) from the C1/C2 curve
    pub n_alpha: f64,
    /// RHS(α̂) = scale/θ0(α̂)
    pub rhs: f64,
    pub scale: f64,
}

impl BoundReport {
    /// |N(α̂) − RHS(α̂)| / N(α̂)
    pub fn defining_residual(&self) -> f64 {
        (self.n_alpha - self.rhs).abs() / self.n_alpha
    }

    /// The terms whose maximum, times `scale`, is N.
    pub fn max_terms(&self) -> [(ActiveBranch, f64); 3] {
        let tol_term = match (self.delta_h, self.radius) {
            (Some(x), _) => 3.0 * (self.m as f64 / x).ln() / (2.0 * x),
            (None, Some(r)) => 1.0 / r,
            _ => f64::NAN,
        };
        [
            (ActiveBranch::Tolerance, tol_term),
            (ActiveBranch::ThetaInfinity, 1.0 / self.theta_inf),
            (ActiveBranch::PhiMin, 1.0 / self.phi_min),
        ]
    }

    /// One-sentence reading of the certificate.
    pub fn summary(&self) -> String {
        let n = self.n_ceil;
        let eps = self.epsilon;
        match self.kind {
            BoundKind::Theorem1 => format!(
                "For every n ≥ {n}, out of all assignments satisfying the constraints to accuracy δ, at most a fraction {eps:e} have entropy below (1 − {}) H*.",
                self.eta.unwrap_or(f64::NAN)
            ),
            BoundKind::Theorem2 => format!(
                "For every n ≥ {n}, out of all assignments satisfying the constraints to accuracy δ, at most a fraction {eps:e} have frequencies farther than {} from φ* in ℓ1 norm.",
                self.theta.unwrap_or(f64::NAN)
            ),
            BoundKind::LemmaCor1 => format!(
                "For every n ≥ {n}, f* lies within entropy {:.4e} of H* and alone has more than 1/{eps:e} times as many realizations as all constraint-satisfying vectors with entropy below (1 − {}) H*.",
                self.delta_h.unwrap_or(f64::NAN),
                self.eta.unwrap_or(f64::NAN)
            ),
            BoundKind::LemmaCor2 | BoundKind::CorollaryPd => format!(
                "For every n ≥ {n}, f* lies within {:.4e} of φ* in ℓ1 norm and alone has more than 1/{eps:e} times as many realizations as all constraint-satisfying vectors farther than {} from φ*.",
                self.radius.unwrap_or(f64::NAN),
                self.theta.unwrap_or(f64::NAN)
            ),
            BoundKind::CorollaryUnif => format!(
                "For every n ≥ {n}, the rounded uniform distribution lies within {:.4e} of uniform in ℓ1 norm and has more than 1/{eps:e} times as many realizations as all distributions farther than {} from uniform.",
                self.radius.unwrap_or(f64::NAN),
                self.theta.unwrap_or(f64::NAN)
            ),
        }
    }
}

/// (m − 1)/⟦2, μ* = m⟧: halved when φ* has full support.
fn whole_set_scale(m: usize, mu: usize) -> f64 {
    let s = (m - 1) as f64;
    if mu == m {
        s / 2.0
    } else {
        s
    }
}

/// Numerators of C1 and C2; both constants share the exponential rate as
/// denominator.
pub fn constant_numerators(m: usize, mu: usize, epsilon: f64) -> (f64, f64) {
    let (m, mu) = (m as f64, mu as f64);
    let num1 = 0.5 * (m + mu) - 1.0;
    let num2 = m * 0.6f64.ln()
        + (crate::special::LN_SQRT_2PI + 1.0 / 12.0 - 0.5 * mu.ln()) * mu
        + ((1.0 / epsilon + 1.0) / 0.249).ln();
    (num1, num2)
}

/// N(α) from the constants: 1.5·C1·ln(C1 + C2) + C2 when C2 > 0, otherwise
/// 1.5·C1·ln C1 + C2.
pub fn n_from_constants(c1: f64, c2: f64) -> f64 {
    if c2 > 0.0 {
        1.5 * c1 * (c1 + c2).ln() + c2
    } else {
        1.5 * c1 * c1.ln() + c2
    }
}

/// θ0(α) = min(θ∞, (2/3)·x/ln(m/x), φ*min) with x = αηH*.
pub fn theta0_entropy(
    alpha: f64,
    eta: f64,
    h_star: f64,
    m: usize,
    theta_inf: f64,
    phi_min: f64,
) -> (f64, ActiveBranch) {
    let x = alpha * eta * h_star;
    let tol = 2.0 / 3.0 * x / (m as f64 / x).ln();
    three_way_min(tol, theta_inf, phi_min)
}

/// θ′0(α) = min(θ∞, αϑ, φ*min).
pub fn theta0_norm(alpha: f64, theta: f64, theta_inf: f64, phi_min: f64) -> (f64, ActiveBranch) {
    three_way_min(alpha * theta, theta_inf, phi_min)
}

fn three_way_min(tol: f64, theta_inf: f64, phi_min: f64) -> (f64, ActiveBranch) {
    let mut best = (tol, ActiveBranch::Tolerance);
    if theta_inf < best.0 {
        best = (theta_inf, ActiveBranch::ThetaInfinity);
    }
    if phi_min < best.0 {
        best = (phi_min, ActiveBranch::PhiMin);
    }
    best
}

/// ψ(α, ϑ) = ½ϑ² − αϑ·ln(m/(αϑ)), the gap between the ℓ1 entropy bounds.
pub fn psi(alpha: f64, theta: f64, m: usize) -> f64 {
    let y = alpha * theta;
    0.5 * theta * theta - y * (m as f64 / y).ln()
}

/// ln m < ln ½ + 3 ln ϑ + 1/ϑ, i.e. m < ½ϑ³e^{1/ϑ}, evaluated in logs.
pub fn norm_condition_holds(theta: f64, m: usize) -> bool {
    theta > 0.0 && theta < 0.5 && (m as f64).ln() < 0.5f64.ln() + 3.0 * theta.ln() + 1.0 / theta
}

/// The unique root α0 of ψ(·, ϑ) in (ϑ²/2, 1).
pub fn alpha0(theta: f64, m: usize) -> Result<f64> {
    if !(theta > 0.0 && theta < 0.5) {
        return Err(Error::Precondition(format!("ϑ = {theta} is outside (0, 1/2)")));
    }
    if !norm_condition_holds(theta, m) {
        return Err(Error::Precondition(format!(
            "m = {m} is not below ½ϑ³e^(1/ϑ) for ϑ = {theta}"
        )));
    }
    let lo = theta * theta / 2.0;
    if psi(lo, theta, m) <= 0.0 || psi(1.0, theta, m) >= 0.0 {
        return Err(Error::Root(format!("ψ does not change sign on (ϑ²/2, 1) for ϑ = {theta}")));
    }
    bisect(|a| psi(a, theta, m), lo, 1.0)
}

/// Rate description for one bound computation.
#[derive(Clone, Copy, Debug)]
enum Rate {
    Entropy { eta: f64, h_star: f64 },
    Norm { theta: f64 },
}

/// Everything the α-equation needs.
#[derive(Clone, Copy, Debug)]
struct Setting {
    kind: BoundKind,
    rate: Rate,
    m: usize,
    mu: usize,
    epsilon: f64,
    theta_inf: f64,
    phi_min: f64,
    scale: f64,
}

#[derive(Clone, Copy, Debug)]
struct Point {
    c1: f64,
    c2: f64,
    n_alpha: f64,
    theta0: f64,
    branch: ActiveBranch,
    rhs: f64,
}

impl Setting {
    fn point(&self, alpha: f64) -> Point {
        let (num1, num2) = constant_numerators(self.m, self.mu, self.epsilon);
        let (den, (theta0, branch)) = match self.rate {
            Rate::Entropy { eta, h_star } => (
                (1.0 - alpha) * eta * h_star,
                theta0_entropy(alpha, eta, h_star, self.m, self.theta_inf, self.phi_min),
            ),
            Rate::Norm { theta } => (
                psi(alpha, theta, self.m),
                theta0_norm(alpha, theta, self.theta_inf, self.phi_min),
            ),
        };
        let (c1, c2) = (num1 / den, num2 / den);
        Point {
            c1,
            c2,
            n_alpha: n_from_constants(c1, c2),
            theta0,
            branch,
            rhs: self.scale / theta0,
        }
    }

    fn gap(&self, alpha: f64) -> f64 {
        let p = self.point(alpha);
        p.n_alpha - p.rhs
    }

    /// The open interval on which α is searched, and α0 for the norm kinds.
    fn bracket(&self) -> Result<(f64, f64, Option<f64>)> {
        let (hi, a0) = match self.rate {
            Rate::Entropy { .. } => (1.0 - 1e-12, None),
            Rate::Norm { theta } => {
                let a0 = alpha0(theta, self.m)?;
                (a0 - (1e-12f64).min(a0 * 1e-9), Some(a0))
            }
        };
        let mut lo = (1e-12f64).min(hi * 1e-6);
        // N(α) − RHS(α) must be negative at the left end; RHS blows up as
        // α → 0 so shrinking lo always gets there unless the problem is
        // degenerate.
        while self.gap(lo).is_nan() || self.gap(lo) >= 0.0 {
            lo *= 1e-3;
            if lo < 1e-300 {
                return Err(Error::Root(
                    "N(α) − RHS(α) is not negative near α = 0".into(),
                ));
            }
        }
        let g_hi = self.gap(hi);
        if !(g_hi > 0.0) {
            return Err(Error::Root(format!(
                "N(α) − RHS(α) = {g_hi} is not positive at the right end of the bracket"
            )));
        }
        Ok((lo, hi, a0))
    }

    fn solve(&self) -> Result<BoundReport> {
        let (lo, hi, a0) = self.bracket()?;
        let alpha_hat = bisect(|a| self.gap(a), lo, hi)?;
        let p = self.point(alpha_hat);
        let mut validity = Vec::new();
        let mut notes = Vec::new();

        if p.c2 > 0.0 {
            validity.push(check(
                "C1 + C2 ≥ 21",
                p.c1 + p.c2 >= 21.0,
                format!("C1 + C2 = {:.6e}", p.c1 + p.c2),
            ));
        }
        let (eta, theta, delta_h, radius) = match self.rate {
            Rate::Entropy { eta, h_star } => {
                let x = alpha_hat * eta * h_star;
                validity.push(check(
                    "α̂ηH* ≤ m/21",
                    x <= self.m as f64 / 21.0,
                    format!("α̂ηH* = {x:.6e}"),
                ));
                (Some(eta), None, Some(x), None)
            }
            Rate::Norm { theta } => {
                let s = psi(alpha_hat, theta, self.m);
                validity.push(check(
                    "ψ(α̂, ϑ) > 0",
                    s > 0.0,
                    format!("ψ = {s:.6e}"),
                ));
                (None, Some(theta), None, Some(alpha_hat * theta))
            }
        };
        if self.mu > 1 && p.theta0 > (self.mu - 1) as f64 * self.phi_min {
            validity.push(check(
                "θ0 ≤ (μ* − 1)·φ*min",
                false,
                format!("θ0 = {:.6e}", p.theta0),
            ));
        }

        let n = snap(p.rhs);
        let mut n_ceil = n.ceil();
        if !(n_ceil.is_finite() && n_ceil < u64::MAX as f64) {
            return Err(Error::Root(format!("threshold N = {n} is not representable")));
        }
        if n_ceil < 100.0 {
            notes.push(format!(
                "the computed threshold {n_ceil} is below 100; the counting estimates need n ≥ 100, so 100 is reported"
            ));
            n_ceil = 100.0;
        }
        let report = BoundReport {
            kind: self.kind,
            n,
            n_ceil: n_ceil as u64,
            alpha_hat,
            c1: p.c1,
            c2: p.c2,
            theta_inf: self.theta_inf,
            phi_min: self.phi_min,
            theta0: p.theta0,
            alpha0: a0,
            active_branch: p.branch,
            validity,
            notes,
            m: self.m,
            mu_star: self.mu,
            epsilon: self.epsilon,
            eta,
            theta,
            delta_h,
            radius,
            n_alpha: p.n_alpha,
            rhs: p.rhs,
            scale: self.scale,
        };
        if let Some(bad) = report.validity.iter().find(|c| !c.passed) {
            return Err(Error::Validity {
                condition: bad.condition.clone(),
                detail: bad.detail.clone(),
            });
        }
        Ok(report)
    }
}

fn check(condition: &str, passed: bool, detail: String) -> ValidityCheck {
    ValidityCheck { condition: condition.to_string(), passed, detail }
}

/// Values within 1e-12 (relative) of an integer are that integer; this keeps
/// float noise such as 12/1e-4 = 120000.00000000001 from ceiling to 120001.
fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("ε = {epsilon} is outside (0, 1)")))
    }
}

fn check_eta(eta: f64, h_star: f64, m: usize) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Precondition(format!("η = {eta} is outside (0, 1)")));
    }
    if !(h_star > 0.0) {
        return Err(Error::Precondition("H* must be positive for an entropy bound".into()));
    }
    if eta > m as f64 / (21.0 * h_star) {
        return Err(Error::Validity {
            condition: "η ≤ m/(21H*)".into(),
            detail: format!("η = {eta}, m/(21H*) = {:.6e}", m as f64 / (21.0 * h_star)),
        });
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 0.5 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("ϑ = {theta} is outside (0, 1/2)")))
    }
}

fn setting_from_solution(
    kind: BoundKind,
    rate: Rate,
    sol: &MaxEntSolution,
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    epsilon: f64,
) -> Result<Setting> {
    check_epsilon(epsilon)?;
    if sol.m() != cs.m() {
        return Err(Error::Dimension { expected: cs.m(), got: sol.m() });
    }
    let m = cs.m();
    if m < 2 {
        return Err(Error::Precondition("the bounds need m ≥ 2".into()));
    }
    let mu = sol.mu_star;
    let scale = match kind {
        BoundKind::Theorem1 | BoundKind::Theorem2 => whole_set_scale(m, mu),
        BoundKind::LemmaCor1 => 1.0,
        BoundKind::LemmaCor2 | BoundKind::CorollaryPd => 0.75 * mu as f64,
        BoundKind::CorollaryUnif => 0.75 * m as f64,
    };
    Ok(Setting {
        kind,
        rate,
        m,
        mu,
        epsilon,
        theta_inf: theta_infinity(cs, delta)?,
        phi_min: sol.phi_min,
        scale,
    })
}

/// Entropy concentration of the whole constraint-satisfying set.
pub fn compute_n_theorem1(
    sol: &MaxEntSolution,
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    epsilon: f64,
    eta: f64,
) -> Result<BoundReport> {
    check_eta(eta, sol.h_star, cs.m())?;
    let rate = Rate::Entropy { eta, h_star: sol.h_star };
    setting_from_solution(BoundKind::Theorem1, rate, sol, cs, delta, epsilon)?.solve()
}

/// ℓ1 concentration of the whole constraint-satisfying set.
pub fn compute_n_theorem2(
    sol: &MaxEntSolution,
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    epsilon: f64,
    theta: f64,
) -> Result<BoundReport> {
    check_theta(theta)?;
    setting_from_solution(BoundKind::Theorem2, Rate::Norm { theta }, sol, cs, delta, epsilon)?
        .solve()
}

/// f* versus the low-entropy set.
pub fn compute_n_fstar_entropy(
    sol: &MaxEntSolution,
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    epsilon: f64,
    eta: f64,
) -> Result<BoundReport> {
    check_eta(eta, sol.h_star, cs.m())?;
    let rate = Rate::Entropy { eta, h_star: sol.h_star };
    setting_from_solution(BoundKind::LemmaCor1, rate, sol, cs, delta, epsilon)?.solve()
}

/// f* versus the far-in-ℓ1 set.
pub fn compute_n_fstar_norm(
    sol: &MaxEntSolution,
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    epsilon: f64,
    theta: f64,
) -> Result<BoundReport> {
    check_theta(theta)?;
    setting_from_solution(BoundKind::LemmaCor2, Rate::Norm { theta }, sol, cs, delta, epsilon)?
        .solve()
}

/// The f* threshold stated for probability distributions; numerically the
/// same as [`compute_n_fstar_norm`].
pub fn compute_n_pd(
    sol: &MaxEntSolution,
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    epsilon: f64,
    theta: f64,
) -> Result<BoundReport> {
    check_theta(theta)?;
    setting_from_solution(BoundKind::CorollaryPd, Rate::Norm { theta }, sol, cs, delta, epsilon)?
        .solve()
}

/// The unconstrained case: φ* uniform, θ∞ = ∞, φ*min = 1/m. Needs
/// ϑ ≤ min(0.09, 1/m).
pub fn compute_n_uniform(m: usize, epsilon: f64, theta: f64) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    check_theta(theta)?;
    if m < 2 {
        return Err(Error::Precondition("the bounds need m ≥ 2".into()));
    }
    let limit = 0.09f64.min(1.0 / m as f64);
    if theta > limit {
        return Err(Error::Precondition(format!(
            "ϑ = {theta} exceeds min(0.09, 1/m) = {limit}"
        )));
    }
    Setting {
        kind: BoundKind::CorollaryUnif,
        rate: Rate::Norm { theta },
        m,
        mu: m,
        epsilon,
        theta_inf: f64::INFINITY,
        phi_min: 1.0 / m as f64,
        scale: 0.75 * m as f64,
    }
    .solve()
}

/// Tolerance parameter of a bound: η for the entropy kinds, ϑ for the rest.
pub fn compute_bound(
    kind: BoundKind,
    sol: &MaxEntSolution,
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    epsilon: f64,
    param: f64,
) -> Result<BoundReport> {
    match kind {
        BoundKind::Theorem1 => compute_n_theorem1(sol, cs, delta, epsilon, param),
        BoundKind::Theorem2 => compute_n_theorem2(sol, cs, delta, epsilon, param),
        BoundKind::LemmaCor1 => compute_n_fstar_entropy(sol, cs, delta, epsilon, param),
        BoundKind::LemmaCor2 => compute_n_fstar_norm(sol, cs, delta, epsilon, param),
        BoundKind::CorollaryPd => compute_n_pd(sol, cs, delta, epsilon, param),
        BoundKind::CorollaryUnif => compute_n_uniform(cs.m(), epsilon, param),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub alpha: f64,
    #[serde(rename = "N_alpha")]
    pub n_alpha: f64,
    pub rhs: f64,
    pub active_branch: ActiveBranch,
    pub crossing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaScan {
    pub kind: BoundKind,
    pub rows: Vec<ScanRow>,
    pub alpha_hat: f64,
}

/// Tabulates N(α) and RHS(α) on an even grid over the search bracket, with
/// the crossing α̂ inserted in order.
pub fn scan_alpha(
    kind: BoundKind,
    sol: &MaxEntSolution,
    cs: &ConstraintSystem,
    delta: &ToleranceSpec,
    epsilon: f64,
    param: f64,
    grid: usize,
) -> Result<AlphaScan> {
    let report = compute_bound(kind, sol, cs, delta, epsilon, param)?;
    let setting = match kind {
        BoundKind::CorollaryUnif => Setting {
            kind,
            rate: Rate::Norm { theta: param },
            m: cs.m(),
            mu: cs.m(),
            epsilon,
            theta_inf: f64::INFINITY,
            phi_min: 1.0 / cs.m() as f64,
            scale: 0.75 * cs.m() as f64,
        },
        _ => {
            let rate = if kind.is_norm_kind() {
                Rate::Norm { theta: param }
            } else {
                Rate::Entropy { eta: param, h_star: sol.h_star }
            };
            setting_from_solution(kind, rate, sol, cs, delta, epsilon)?
        }
    };
    let (lo, hi, _) = setting.bracket()?;
    let grid = grid.max(2);
    let mut alphas: Vec<(f64, bool)> = (0..grid)
        .map(|i| (lo + (hi - lo) * i as f64 / (grid - 1) as f64, false))
        .collect();
    alphas.push((report.alpha_hat, true));
    alphas.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rows = alphas
        .into_iter()
        .map(|(alpha, crossing)| {
            let p = setting.point(alpha);
            ScanRow { alpha, n_alpha: p.n_alpha, rhs: p.rhs, active_branch: p.branch, crossing }
        })
        .collect();
    Ok(AlphaScan { kind, rows, alpha_hat: report.alpha_hat })
}
