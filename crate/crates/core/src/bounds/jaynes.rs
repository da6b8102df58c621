//! The classical χ² concentration statement, recast in the same C1/C2
//! form so the two thresholds can be set side by side.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{chi2_upper_quantile, ln_gamma};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JaynesComparison {
    /// number of linearly independent equality constraints
    pub ell: usize,
    /// m − ℓ − 1
    pub dof: u32,
    pub chi2_critical: f64,
    /// the entropy deficit χ²/(2n) expressed relative to H*
    pub eta_equivalent: f64,
    /// ΔH = χ²/(2n)
    pub delta_h: f64,
    /// s = (m − ℓ − 3)/2
    pub s: f64,
    #[serde(rename = "C1_jaynes")]
    pub c1: f64,
    #[serde(rename = "C2_jaynes")]
    pub c2: f64,
}

/// χ² critical value at upper-tail mass ε and the constants C1 = s/ΔH,
/// C2 = (s·ln ΔH − ln(ε·Γ(s + 1)))/ΔH of the χ² tail expansion.
pub fn jaynes_comparison(
    m: usize,
    ell: usize,
    epsilon: f64,
    n: u64,
    h_star: f64,
) -> Result<JaynesComparison> {
    if m < ell + 2 {
        return Err(Error::Precondition(format!(
            "m − ℓ − 1 = {} leaves no degrees of freedom",
            m as i64 - ell as i64 - 1
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Precondition(format!("ε = {epsilon} is outside (0, 1)")));
    }
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if !(h_star > 0.0) {
        return Err(Error::Precondition("H* must be positive".into()));
    }
    let dof = (m - ell - 1) as u32;
    let chi2 = chi2_upper_quantile(dof, epsilon)?;
    let delta_h = chi2 / (2.0 * n as f64);
    let s = (dof as f64 - 2.0) / 2.0;
    let c1 = s / delta_h;
    let c2 = (s * delta_h.ln() - (epsilon.ln() + ln_gamma(s + 1.0))) / delta_h;
    Ok(JaynesComparison {
        ell,
        dof,
        chi2_critical: chi2,
        eta_equivalent: delta_h / h_star,
        delta_h,
        s,
        c1,
        c2,
    })
}
