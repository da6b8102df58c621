//! Special functions: log-gamma, Stirling remainder, the regularized
//! incomplete gamma function, chi-squared quantiles and a bisection solver.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// ln √(2π)
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of |Γ(x)|.
///
/// Lanczos approximation for moderate arguments, the asymptotic Stirling
/// series for large ones (where it is both cheaper and more accurate).
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let s = (PI * x).sin().abs();
        return PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    if x >= 15.0 {
        return stirling_ln_gamma(x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + a.ln()
}

fn stirling_ln_gamma(x: f64) -> f64 {
    // ln Γ(x) = (x − ½) ln x − x + ln √(2π) + Σ B₂ₖ / (2k(2k−1) x^{2k−1})
    let r = 1.0 / x;
    let r2 = r * r;
    let series = r
        * (1.0 / 12.0
            - r2 * (1.0 / 360.0
                - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 * (1.0 / 1188.0)))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

/// ln x! = ln Γ(x + 1), for real x > 0 (and x = 0).
pub fn log_factorial(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Precondition(format!("log_factorial needs x ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(ln_gamma(x + 1.0))
}

/// The θ of ln x! = x ln x − x + ½ ln x + ln √(2π) + θ/(12x).
///
/// For x ≥ 10 the value comes from the asymptotic series of θ itself; below
/// that it is recovered from ln Γ directly.
pub fn stirling_theta(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Precondition(format!("stirling_theta needs x > 0, got {x}")));
    }
    if x >= 10.0 {
        Ok(stirling_theta_series(x))
    } else {
        Ok(stirling_theta_direct(x))
    }
}

pub(crate) fn stirling_theta_series(x: f64) -> f64 {
    let r2 = 1.0 / (x * x);
    1.0 - r2 * (1.0 / 30.0 - r2 * (1.0 / 105.0 - r2 * (1.0 / 140.0 - r2 * (1.0 / 99.0))))
}

pub(crate) fn stirling_theta_direct(x: f64) -> f64 {
    let lead = x * x.ln() - x + 0.5 * x.ln() + LN_SQRT_2PI;
    12.0 * x * (ln_gamma(x + 1.0) - lead)
}

/// ln C(n, k) for real arguments.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0.0 || k == n {
        return 0.0;
    }
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

const GAMMA_EPS: f64 = 1e-15;
const GAMMA_MAX_ITER: usize = 10_000;

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x)/Γ(a).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0, "gamma_q needs a > 0");
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_fraction(a, x)
    }
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0, "gamma_p needs a > 0");
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_fraction(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..GAMMA_MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * GAMMA_EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_fraction(a: f64, x: f64) -> f64 {
    // modified Lentz on the continued fraction for Γ(a, x)
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < GAMMA_EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Upper-tail quantile of the χ² distribution: the x with P(χ²_k > x) = eps.
pub fn chi2_upper_quantile(dof: u32, eps: f64) -> Result<f64> {
    if dof == 0 {
        return Err(Error::Precondition("chi-squared needs at least one degree of freedom".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("tail probability must lie in (0,1), got {eps}")));
    }
    let a = dof as f64 / 2.0;
    let tail = |x: f64| gamma_q(a, x / 2.0) - eps;
    let mut hi = (dof as f64).max(1.0);
    while tail(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Root("chi-squared quantile beyond 1e9".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection for a sign change of `g` on [lo, hi], run until the bracket
/// cannot be split any further in double precision. Returns the bracket end
/// with the smaller |g|.
pub fn bisect<F: Fn(f64) -> f64>(g: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut glo = g(lo);
    let ghi = g(hi);
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if !(glo.signum() != ghi.signum()) || glo.is_nan() || ghi.is_nan() {
        return Err(Error::Root(format!(
            "no sign change on [{lo:e}, {hi:e}]: g(lo) = {glo:e}, g(hi) = {ghi:e}"
        )));
    }
    let mut ghi = ghi;
    for _ in 0..4096 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    Ok(if glo.abs() <= ghi.abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_half_integers() {
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-14);
        assert!((ln_gamma(1.5) - (PI.sqrt() / 2.0).ln()).abs() < 1e-14);
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
    }

    #[test]
    fn both_gamma_routes_agree_at_switch() {
        // Lanczos just below the switch point vs the series just above
        for x in [12.0, 14.5, 15.0, 20.0, 40.0] {
            let series = stirling_ln_gamma(x);
            let xm = x - 1.0;
            let t = xm + LANCZOS_G + 0.5;
            let mut a = LANCZOS[0];
            for (i, c) in LANCZOS.iter().enumerate().skip(1) {
                a += c / (xm + i as f64);
            }
            let lanczos = LN_SQRT_2PI + (xm + 0.5) * t.ln() - t + a.ln();
            assert!((series - lanczos).abs() <= 1e-13 * series.abs(), "x={x}");
        }
    }

    #[test]
    fn theta_routes_agree() {
        for i in 0..=40 {
            let x = 10.0 + i as f64;
            let a = stirling_theta_series(x);
            let b = stirling_theta_direct(x);
            assert!((a - b).abs() < 1e-8, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn chi2_two_dof_is_exponential() {
        let x = chi2_upper_quantile(2, (-1.0f64).exp()).unwrap();
        assert!((x - 2.0).abs() < 1e-9);
    }

    #[test]
    fn gamma_p_q_complement() {
        for &(a, x) in &[(0.5, 0.1), (2.5, 3.0), (10.0, 4.0), (3.0, 20.0)] {
            assert!((gamma_p(a, x) + gamma_q(a, x) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn bisect_rejects_missing_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0).is_err());
        let r = bisect(|x| x - 0.3, 0.0, 1.0).unwrap();
        assert!((r - 0.3).abs() < 1e-15);
    }
}
