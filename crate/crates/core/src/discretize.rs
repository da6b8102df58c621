//! Round-and-adjust discretization of a MaxEnt vector to integer counts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxent::MaxEntSolution;

/// Integer counts ν summing to n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountVector {
    pub n: u64,
    pub nu: Vec<u64>,
}

impl CountVector {
    pub fn new(nu: Vec<u64>) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::Precondition("empty count vector".into()));
        }
        let n = nu.iter().try_fold(0u64, |a, &v| a.checked_add(v));
        match n {
            Some(n) if n > 0 => Ok(CountVector { n, nu }),
            Some(_) => Err(Error::Precondition("count vector must have n > 0".into())),
            None => Err(Error::Precondition("count vector total overflows".into())),
        }
    }

    pub fn m(&self) -> usize {
        self.nu.len()
    }

    pub fn frequencies(&self) -> FrequencyVector {
        FrequencyVector { n: self.n, numerators: self.nu.clone() }
    }
}

/// A point of F_n: entry i is numerators[i] / n, held exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrequencyVector {
    pub n: u64,
    pub numerators: Vec<u64>,
}

impl FrequencyVector {
    pub fn new(numerators: Vec<u64>) -> Result<Self> {
        CountVector::new(numerators).map(|c| c.frequencies())
    }

    pub fn m(&self) -> usize {
        self.numerators.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.numerators[i] as f64 / self.n as f64
    }

    pub fn to_f64(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.numerators.iter().map(|&v| v as f64 / n).collect()
    }

    pub fn counts(&self) -> CountVector {
        CountVector { n: self.n, nu: self.numerators.clone() }
    }

    /// Number of nonzero entries.
    pub fn support(&self) -> usize {
        self.numerators.iter().filter(|&&v| v > 0).count()
    }
}

/// Round n·φ* to integers and repair the total.
///
/// Each n·φ_i is rounded to nearest (halves away from zero). If the total
/// comes out short by |d|, 1 is added to |d| entries that were rounded down;
/// if it overshoots, 1 is taken from |d| entries that were rounded up. The
/// entries adjusted are those with the largest rounding residual, lowest
/// index first among equal residuals.
pub fn round_to_counts(sol: &MaxEntSolution, n: u64) -> Result<CountVector> {
    round_vector(&sol.phi_star, n)
}

/// [`round_to_counts`] on a bare probability vector.
pub fn round_vector(phi: &[f64], n: u64) -> Result<CountVector> {
    let m = phi.len();
    if (n as usize) < m || n == 0 {
        return Err(Error::Precondition(format!("rounding needs n ≥ m (n = {n}, m = {m})")));
    }
    let nf = n as f64;
    let scaled: Vec<f64> = phi.iter().map(|&p| p * nf).collect();
    let mut nu: Vec<i64> = scaled.iter().map(|x| x.round() as i64).collect();
    // residual > 0: rounded down; residual < 0: rounded up
    let resid: Vec<f64> = scaled.iter().zip(&nu).map(|(x, &v)| x - v as f64).collect();
    let d: i64 = nu.iter().sum::<i64>() - n as i64;
    if d != 0 {
        let want_down = d < 0;
        let mut eligible: Vec<usize> = (0..m)
            .filter(|&i| if want_down { resid[i] > 0.0 } else { resid[i] < 0.0 })
            .collect();
        if (eligible.len() as i64) < d.abs() {
            return Err(Error::Precondition(format!(
                "cannot repair total: off by {d} with only {} eligible entries (is φ on the simplex?)",
                eligible.len()
            )));
        }
        eligible.sort_by(|&a, &b| resid[b].abs().total_cmp(&resid[a].abs()).then(a.cmp(&b)));
        for &i in eligible.iter().take(d.unsigned_abs() as usize) {
            nu[i] += if want_down { 1 } else { -1 };
        }
    }
    if nu.iter().any(|&v| v < 0) {
        return Err(Error::Precondition("negative count after rounding (negative φ entry?)".into()));
    }
    let out = CountVector { n, nu: nu.into_iter().map(|v| v as u64).collect() };
    debug_assert_eq!(out.nu.iter().sum::<u64>(), n);
    debug_assert!(out.nu.iter().zip(&scaled).all(|(&v, &x)| (v as f64 - x).abs() <= 1.0 + 1e-9));
    Ok(out)
}

/// The guaranteed distances between f* = ν*/n and φ*: (∞-norm, ℓ1-norm).
pub fn closeness_radii(sol: &MaxEntSolution, n: u64) -> (f64, f64) {
    let nf = n as f64;
    (1.0 / nf, 3.0 * sol.mu_star as f64 / (4.0 * nf))
}

/// Exact distances between ν/n and φ, with every f64 entry of φ taken at
/// its exact binary value.
#[derive(Clone, Debug)]
pub struct ExactCloseness {
    pub linf: BigRational,
    pub l1: BigRational,
}

pub fn exact_closeness(counts: &CountVector, phi: &[f64]) -> Result<ExactCloseness> {
    if counts.m() != phi.len() {
        return Err(Error::Dimension { expected: phi.len(), got: counts.m() });
    }
    let n = BigInt::from(counts.n);
    let mut linf = BigRational::zero();
    let mut l1 = BigRational::zero();
    for (&v, &p) in counts.nu.iter().zip(phi) {
        let p = BigRational::from_float(p)
            .ok_or_else(|| Error::Precondition("non-finite φ entry".into()))?;
        let f = BigRational::new(BigInt::from(v), n.clone());
        let diff = (f - p).abs();
        if diff > linf {
            linf = diff.clone();
        }
        l1 += diff;
    }
    Ok(ExactCloseness { linf, l1 })
}

impl ExactCloseness {
    /// Whether both distances are within the guaranteed radii 1/n and
    /// 3μ/(4n), compared exactly.
    pub fn within_radii(&self, n: u64, mu: usize) -> bool {
        let n = BigInt::from(n);
        let r_inf = BigRational::new(BigInt::from(1), n.clone());
        let r_l1 = BigRational::new(BigInt::from(3 * mu as u64), BigInt::from(4) * n);
        self.linf <= r_inf && self.l1 <= r_l1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_halves() {
        let c = round_vector(&[0.5, 0.5], 10).unwrap();
        assert_eq!(c.nu, vec![5, 5]);
    }

    #[test]
    fn short_total_goes_to_largest_residual() {
        // 3 × 3.333.. = 9 → one unit short, all residuals equal → lowest index
        let c = round_vector(&[1.0 / 3.0; 3], 10).unwrap();
        assert_eq!(c.nu, vec![4, 3, 3]);
        // 0.26·10 = 2.6 → 3, 0.37·10 = 3.7 → 4, 0.37 → 4: total 11, take from
        // the entry rounded up the most (2.6 → 3 has residual −0.4)
        let c = round_vector(&[0.26, 0.37, 0.37], 10).unwrap();
        assert_eq!(c.nu, vec![2, 4, 4]);
    }

    #[test]
    fn zeros_stay_zero() {
        let c = round_vector(&[0.0, 0.3, 0.7, 0.0], 7).unwrap();
        assert_eq!(c.nu[0], 0);
        assert_eq!(c.nu[3], 0);
        assert_eq!(c.n, 7);
    }

    #[test]
    fn n_below_m_rejected() {
        assert!(round_vector(&[0.25; 4], 3).is_err());
    }

    #[test]
    fn exact_closeness_of_exact_point() {
        let c = CountVector::new(vec![1, 3]).unwrap();
        let e = exact_closeness(&c, &[0.25, 0.75]).unwrap();
        assert!(e.linf.is_zero() && e.l1.is_zero());
        assert!(e.within_radii(4, 2));
    }
}
