//! Realization counting: exact multinomials, entropy, the two sandwich
//! bounds on #f, the lattice-point lower bound Λ, the composition-sum
//! inequality, the equiprobable Sanov bound and the norm/entropy bridges.

mod log_scalar;

pub use log_scalar::{big_ln, LogScalar};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::discretize::{CountVector, FrequencyVector};
use crate::error::{Error, Result};
use crate::special::{ln_binomial, ln_gamma, LN_SQRT_2PI};

/// Exact nonnegative integer counts.
pub type BigCount = BigUint;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// n! / (ν1! ⋯ νm!), exactly.
pub fn multinomial_count(nu: &CountVector) -> BigCount {
    let mut acc = BigUint::one();
    let mut total = 0u64;
    for &v in &nu.nu {
        total += v;
        acc *= binomial(total, v);
    }
    acc
}

/// ln #f from a table of ln k! (used by the enumeration oracle).
pub fn ln_multinomial(nu: &[u64], ln_fact: &[f64]) -> f64 {
    let n: u64 = nu.iter().sum();
    ln_fact[n as usize] - nu.iter().map(|&v| ln_fact[v as usize]).sum::<f64>()
}

/// ln 0!, ln 1!, …, ln n!
pub fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(0.0);
    for k in 1..=n {
        // exact gamma per entry rather than a running sum, to avoid drift
        t.push(if k < 20 { t[k - 1] + (k as f64).ln() } else { ln_gamma(k as f64 + 1.0) });
    }
    t
}

/// −Σ f ln f over the positive entries.
pub fn entropy_f64(f: &[f64]) -> f64 {
    -f.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>()
}

/// Entropy of a real vector on the simplex.
pub fn entropy(f: &[f64]) -> Result<f64> {
    if let Some(v) = f.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::Precondition(format!("entropy of a negative entry {v}")));
    }
    let s: f64 = f.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(Error::NotSimplex(format!("entries sum to {s}")));
    }
    Ok(entropy_f64(f))
}

/// Entropy of ν/n computed as ln n − (1/n) Σ ν ln ν.
pub fn entropy_counts(f: &FrequencyVector) -> f64 {
    let n = f.n as f64;
    let s: f64 = f.numerators.iter().filter(|&&v| v > 0).map(|&v| v as f64 * (v as f64).ln()).sum();
    n.ln() - s / n
}

/// e^{nH(f)} / C(n+m−1, m−1) ≤ #f ≤ e^{nH(f)}.
pub fn realization_bounds_simple(f: &FrequencyVector) -> (LogScalar, LogScalar) {
    let n = f.n as f64;
    let m = f.m() as f64;
    let nh = n * entropy_counts(f);
    let lower = nh - ln_binomial(n + m - 1.0, m - 1.0);
    (LogScalar::from_ln(lower), LogScalar::from_ln(nh))
}

/// The Stirling-sharp sandwich: with S = (2πn)^{−(μ−1)/2}(Π f_i)^{−1/2}
/// over the μ nonzero entries,
/// S e^{nH} e^{−Σ(1/f_i)/(12n)} ≤ #f ≤ S e^{nH} e^{1/(12n)}.
pub fn realization_bounds_stirling(f: &FrequencyVector) -> (LogScalar, LogScalar) {
    let n = f.n as f64;
    let nz: Vec<f64> = f.numerators.iter().filter(|&&v| v > 0).map(|&v| v as f64 / n).collect();
    let mu = nz.len() as f64;
    let ln_s = -(mu - 1.0) / 2.0 * (2.0 * std::f64::consts::PI * n).ln()
        - 0.5 * nz.iter().map(|v| v.ln()).sum::<f64>();
    let nh = n * entropy_counts(f);
    let inv_sum: f64 = nz.iter().map(|v| 1.0 / v).sum();
    let lower = ln_s + nh - inv_sum / (12.0 * n);
    let upper = ln_s + nh + 1.0 / (12.0 * n);
    (LogScalar::from_ln(lower), LogScalar::from_ln(upper))
}

/// Λ(n, ϑ, μ*) = ⌊nϑ(1/(m−1) + 1/(μ*−1))⌋^{μ*−1} ⌊nϑ/(m−1)⌋^{m−μ*}, a
/// lower bound on the number of points of F_n in the ∞-norm cube of
/// radius ϑ around φ* (given ϑ ≤ φ*max and ϑ ≤ (μ*−1)φ*min).
pub fn lambda_lower_bound(n: u64, theta: f64, m: usize, mu: usize) -> Result<BigCount> {
    if m < 2 {
        return Err(Error::Precondition("Λ needs m ≥ 2".into()));
    }
    if mu == 0 || mu > m {
        return Err(Error::Precondition(format!("μ* must lie in 1..=m, got {mu}")));
    }
    let nt = n as f64 * theta;
    let second = (nt / (m - 1) as f64).floor();
    let second = BigUint::from(second.max(0.0) as u64).pow((m - mu) as u32);
    if mu == 1 {
        return Ok(second);
    }
    let first = (nt * (1.0 / (m - 1) as f64 + 1.0 / (mu - 1) as f64)).floor();
    Ok(BigUint::from(first.max(0.0) as u64).pow((mu - 1) as u32) * second)
}

/// Σ over compositions of n into μ positive parts of (ν1⋯νμ)^{−1/2},
/// together with the bound π^{μ/2}/Γ(μ/2) n^{μ/2−1}.
pub fn sum_inequality_check(mu: usize, n: u64) -> Result<(f64, f64)> {
    if !(2..=6).contains(&mu) {
        return Err(Error::Precondition(format!("μ must lie in 2..=6, got {mu}")));
    }
    if n > 300 {
        return Err(Error::Budget { needed: n as f64, budget: 300 });
    }
    if n < mu as u64 {
        return Err(Error::Precondition("n must be at least μ".into()));
    }
    let n = n as usize;
    let w: Vec<f64> = (0..=n).map(|k| if k == 0 { 0.0 } else { 1.0 / (k as f64).sqrt() }).collect();
    // s[t] = sum over compositions of t into the parts placed so far
    let mut s = w.clone();
    for _ in 1..mu {
        let mut next = vec![0.0; n + 1];
        for t in 0..=n {
            let mut acc = 0.0;
            for k in 1..t {
                acc += w[k] * s[t - k];
            }
            next[t] = acc;
        }
        s = next;
    }
    let muf = mu as f64;
    let bound = (muf / 2.0 * std::f64::consts::PI.ln() - ln_gamma(muf / 2.0)).exp() * (n as f64).powf(muf / 2.0 - 1.0);
    Ok((s[n], bound))
}

/// Bounds from the equiprobable form of Sanov's theorem: the probability
/// that a uniformly random assignment lands in a set whose entropies are at
/// most H* is ≤ m^{−n} C(n+m−1, n) e^{nH*}; the number of such assignments
/// is ≤ C(n+m−1, n) e^{nH*}.
pub fn sanov_upper_bound(m: usize, n: u64, h_star: f64) -> Result<(LogScalar, LogScalar)> {
    if m < 2 || n < 1 {
        return Err(Error::Precondition("Sanov bound needs m ≥ 2 and n ≥ 1".into()));
    }
    if !(h_star >= 0.0) || h_star > (m as f64).ln() + 1e-12 {
        return Err(Error::Precondition(format!("H* = {h_star} outside [0, ln m]")));
    }
    let nf = n as f64;
    let ln_count = ln_binomial(nf + m as f64 - 1.0, nf) + nf * h_star;
    let ln_prob = ln_count - nf * (m as f64).ln();
    Ok((LogScalar::from_ln(ln_prob), LogScalar::from_ln(ln_count)))
}

/// Which norm–entropy implications hold for a particular f.
#[derive(Clone, Debug, Serialize)]
pub struct BridgeReport {
    /// ‖f − φ*‖∞
    pub gamma: f64,
    /// ‖f − φ*‖1
    pub l1: f64,
    /// H* − H(f)
    pub entropy_gap: f64,
    /// H* − H(f) ≤ mγ ln(1/γ); `None` when γ > 1/e (or γ = 0 handled as true)
    pub linf_entropy: Option<bool>,
    /// the ∞-norm radius under which H(f) ≥ (1−η)H* is guaranteed
    pub eta_radius: Option<f64>,
    /// γ ≤ eta_radius ⇒ H(f) ≥ (1−η)H*; `None` if the premise fails
    pub eta_implication: Option<bool>,
    /// ‖f−φ*‖1 ≤ ϑ ⇒ H(f) ≥ H* − ϑ ln(m/ϑ); `None` if the premise fails
    pub l1_near: Option<bool>,
    /// ‖f−φ*‖1 > ϑ ⇒ H(f) < H* − ϑ²/2; `None` if the premise fails
    pub l1_far: Option<bool>,
}

impl BridgeReport {
    /// False if any implication whose premise held has a false conclusion.
    pub fn all_hold(&self) -> bool {
        [self.linf_entropy, self.eta_implication, self.l1_near, self.l1_far]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

/// Evaluates the norm/entropy implications at f for the entropy
/// tolerance η and the ℓ1 tolerance ϑ.
pub fn entropy_norm_bridges(phi: &[f64], h_star: f64, f: &[f64], eta: f64, theta: f64) -> Result<BridgeReport> {
    if phi.len() != f.len() {
        return Err(Error::Dimension { expected: phi.len(), got: f.len() });
    }
    let m = phi.len() as f64;
    let gamma = phi.iter().zip(f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let l1: f64 = phi.iter().zip(f).map(|(a, b)| (a - b).abs()).sum();
    let hf = entropy_f64(f);
    let gap = h_star - hf;
    let slack = 1e-12;
    let linf_entropy = if gamma == 0.0 {
        Some(gap <= slack)
    } else if gamma <= (-1.0f64).exp() {
        Some(gap <= m * gamma * (1.0 / gamma).ln() + slack)
    } else {
        None
    };
    let x = eta * h_star;
    let eta_radius = (eta > 0.0 && x > 0.0 && eta <= m / (21.0 * h_star)).then(|| 2.0 / 3.0 * x / (m / x).ln());
    let eta_implication = eta_radius.and_then(|r| (gamma <= r).then_some(hf >= (1.0 - eta) * h_star - slack));
    let (l1_near, l1_far) = if theta > 0.0 && theta <= 0.5 {
        if l1 <= theta {
            (Some(hf >= h_star - theta * (m / theta).ln() - slack), None)
        } else {
            (None, Some(hf < h_star - theta * theta / 2.0 + slack))
        }
    } else {
        (None, None)
    };
    Ok(BridgeReport { gamma, l1, entropy_gap: gap, linf_entropy, eta_radius, eta_implication, l1_near, l1_far })
}

/// f64 view of a big count (∞ if too large).
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// ln of the Stirling-form constant used by the lower bound on #A:
/// √(2π) (μ/2π)^{μ/2} e^{−μ/12}.
pub(crate) fn ln_a_constant(mu: usize) -> f64 {
    let mu = mu as f64;
    LN_SQRT_2PI + mu / 2.0 * (mu / (2.0 * std::f64::consts::PI)).ln() - mu / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(v: &[u64]) -> FrequencyVector {
        FrequencyVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn multinomials_from_small_example() {
        assert_eq!(multinomial_count(&CountVector::new(vec![3, 1, 1]).unwrap()), BigUint::from(20u32));
        assert_eq!(multinomial_count(&CountVector::new(vec![5, 0, 0]).unwrap()), BigUint::from(1u32));
        assert_eq!(multinomial_count(&CountVector::new(vec![2, 1, 2]).unwrap()), BigUint::from(30u32));
        assert_eq!(multinomial_count(&CountVector::new(vec![3, 0, 2]).unwrap()), BigUint::from(10u32));
    }

    #[test]
    fn entropy_values() {
        assert!((entropy(&[1. / 3., 1. / 3., 1. / 3.]).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert_eq!(entropy(&[1., 0., 0.]).unwrap(), 0.0);
        assert!((entropy_counts(&fv(&[3, 1, 1])) - 0.950_270_539_4).abs() < 1e-9);
        assert!(entropy(&[-0.1, 1.1]).is_err());
    }

    #[test]
    fn simple_bounds_half_half() {
        let (lo, hi) = realization_bounds_simple(&fv(&[5, 5]));
        assert!((lo.value() - 1024.0 / 11.0).abs() < 1e-9);
        assert!((hi.value() - 1024.0).abs() < 1e-9);
    }

    #[test]
    fn stirling_bounds_half_half() {
        let (lo, hi) = realization_bounds_stirling(&fv(&[5, 5]));
        assert!((lo.value() - 249.9).abs() < 0.05, "{}", lo.value());
        assert!((hi.value() - 260.5).abs() < 0.05, "{}", hi.value());
        let (lo, hi) = realization_bounds_stirling(&fv(&[7, 0, 0]));
        assert!(lo.value() <= 1.0 && hi.value() >= 1.0);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_lower_bound(100, 0.05, 2, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(lambda_lower_bound(60, 0.1, 3, 1).unwrap(), BigUint::from(9u32));
        assert_eq!(lambda_lower_bound(30, 0.1, 3, 3).unwrap(), BigUint::from(9u32));
        assert!(lambda_lower_bound(30, 0.1, 1, 1).is_err());
    }

    #[test]
    fn composition_sum_small_cases() {
        let (s, b) = sum_inequality_check(2, 10).unwrap();
        let direct: f64 = (1..10).map(|v| 1.0 / ((v * (10 - v)) as f64).sqrt()).sum();
        assert!((s - direct).abs() < 1e-13);
        assert!((s - 2.21135).abs() < 1e-4);
        assert!((b - std::f64::consts::PI).abs() < 1e-13);
        let (s, _) = sum_inequality_check(2, 2).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sanov_trivial_case() {
        let (p, c) = sanov_upper_bound(2, 1, 2f64.ln()).unwrap();
        assert!((p.value() - 2.0).abs() < 1e-12);
        assert!((c.value() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn bridges_examples() {
        let u = [1. / 3.; 3];
        let h = 3f64.ln();
        let r = entropy_norm_bridges(&u, h, &u, 0.1, 0.5).unwrap();
        assert!(r.all_hold() && r.gamma == 0.0);
        let r = entropy_norm_bridges(&u, h, &[0.4, 0.3, 0.3], 0.1, 0.5).unwrap();
        assert!((r.gamma - 0.0667).abs() < 1e-4);
        assert!((r.entropy_gap - 0.00970).abs() < 1e-4);
        assert_eq!(r.linf_entropy, Some(true));
        let r = entropy_norm_bridges(&u, h, &[0.6, 0.2, 0.2], 0.1, 0.5).unwrap();
        assert!((r.l1 - 0.5333).abs() < 1e-4);
        assert_eq!(r.l1_far, Some(true));
        assert!(r.all_hold());
    }
}
