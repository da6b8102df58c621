//! Damped Newton on a log-barrier: minimize f(z) − τ Σ ln(d − C z)_j for a
//! decreasing sequence of τ.

use nalgebra::{DMatrix, DVector};

pub(crate) type Eval = Option<(f64, DVector<f64>, DMatrix<f64>)>;

#[derive(Clone, Debug)]
pub(crate) struct Schedule {
    pub tau_start: f64,
    pub tau_stop: f64,
    pub tau_factor: f64,
    pub max_outer: usize,
    pub max_newton: usize,
}

#[derive(Debug)]
pub(crate) struct BarrierOutcome {
    pub z: DVector<f64>,
    /// barrier weight of the last stage
    pub tau: f64,
}

const ARMIJO: f64 = 1e-4;

fn slacks(c: &DMatrix<f64>, d: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
    d - c * z
}

fn solve_spd(h: &DMatrix<f64>, g: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(ch) = h.clone().cholesky() {
        return Some(ch.solve(g));
    }
    // nearly singular: regularize slightly and retry
    let n = h.nrows();
    let bump = 1e-12 * (1.0 + h.diagonal().amax());
    let hr = h + DMatrix::identity(n, n) * bump;
    hr.cholesky().map(|ch| ch.solve(g))
}

/// Runs the barrier schedule from a strictly feasible z0 (d − C z0 > 0).
pub(crate) fn minimize<F>(
    f: F,
    c: &DMatrix<f64>,
    d: &DVector<f64>,
    z0: DVector<f64>,
    sched: &Schedule,
) -> Result<BarrierOutcome, String>
where
    F: Fn(&DVector<f64>) -> Eval,
{
    let mut z = z0;
    if slacks(c, d, &z).iter().any(|&s| !(s > 0.0)) {
        return Err("barrier start is not strictly feasible".into());
    }
    let mut tau = sched.tau_start;
    let mut outer = 0;
    loop {
        outer += 1;
        if outer > sched.max_outer {
            return Err(format!("barrier exceeded {} outer iterations", sched.max_outer));
        }
        let (zn, _, _) = newton_stage(&f, c, d, z, tau, sched.max_newton)?;
        z = zn;
        if tau <= sched.tau_stop * (1.0 + 1e-9) {
            break;
        }
        tau = (tau / sched.tau_factor).max(sched.tau_stop);
    }
    Ok(BarrierOutcome { z, tau })
}

fn barrier_value<F: Fn(&DVector<f64>) -> Eval>(
    f: &F,
    c: &DMatrix<f64>,
    d: &DVector<f64>,
    z: &DVector<f64>,
    tau: f64,
) -> Option<f64> {
    let s = slacks(c, d, z);
    if s.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    let (fv, _, _) = f(z)?;
    Some(fv - tau * s.iter().map(|v| v.ln()).sum::<f64>())
}

fn newton_stage<F: Fn(&DVector<f64>) -> Eval>(
    f: &F,
    c: &DMatrix<f64>,
    d: &DVector<f64>,
    mut z: DVector<f64>,
    tau: f64,
    max_newton: usize,
) -> Result<(DVector<f64>, f64, usize), String> {
    let mut dec = f64::INFINITY;
    for it in 0..max_newton {
        let s = slacks(c, d, &z);
        let (fv, g, h) = f(&z).ok_or("objective undefined at an iterate")?;
        let inv: DVector<f64> = s.map(|v| 1.0 / v);
        let inv2: DVector<f64> = inv.component_mul(&inv);
        let grad = &g + c.transpose() * &inv * tau;
        let mut cw = c.clone();
        for (mut row, w) in cw.row_iter_mut().zip(inv2.iter()) {
            row *= w.sqrt();
        }
        let hess = &h + cw.transpose() * &cw * tau;
        let dz = match solve_spd(&hess, &(-&grad)) {
            Some(v) => v,
            None => return Err("singular Newton system".into()),
        };
        dec = -grad.dot(&dz);
        if !dec.is_finite() {
            return Err("non-finite Newton decrement".into());
        }
        if dec / 2.0 <= 1e-22 {
            return Ok((z, dec, it));
        }
        // largest step that keeps every slack positive
        let cdz = c * &dz;
        let mut t: f64 = 1.0;
        for (sj, cj) in s.iter().zip(cdz.iter()) {
            if *cj > 0.0 {
                t = t.min(0.99 * sj / cj);
            }
        }
        let f0 = fv - tau * s.iter().map(|v| v.ln()).sum::<f64>();
        let mut accepted = false;
        while t > 1e-18 {
            let zn = &z + &dz * t;
            if let Some(fnew) = barrier_value(f, c, d, &zn, tau) {
                // in the quadratic regime the Armijo test drowns in rounding
                if dec < 1e-10 || fnew <= f0 - ARMIJO * t * dec {
                    z = zn;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            // no further progress possible in double precision
            return Ok((z, dec, it));
        }
    }
    Ok((z, dec, max_newton))
}
