//! The maximum-entropy program: maximize −Σ x ln x over the simplex
//! intersected with the constraint system.
//!
//! The solver works in the primal. Equalities (the simplex row included)
//! are eliminated through an orthonormal null-space basis, x = x0 + Z y, and
//! inequalities — including x ≥ 0 — are handled by a logarithmic barrier
//! whose weight drops tenfold per stage from 1 to 1e−12. A phase-1 program
//! on the same machinery finds a strictly feasible start, proves
//! infeasibility, or exposes constraints that hold with equality on the
//! whole feasible set (these become structural zeros or equalities and the
//! problem is re-posed). The barrier solution is finished by an active-set
//! Newton polish, then entries under the zero-clip threshold are fixed at 0
//! and the reduced problem is solved again.

mod barrier;
pub(crate) mod linalg;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use barrier::Schedule;
use linalg::{affine_space, lstsq, nnls};

/// φ* and the statistics every bound needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxEntSolution {
    pub phi_star: Vec<f64>,
    #[serde(rename = "H_star")]
    pub h_star: f64,
    pub mu_star: usize,
    pub phi_min: f64,
    pub phi_max: f64,
    pub kkt_residual: f64,
}

impl MaxEntSolution {
    fn from_phi(phi: Vec<f64>, kkt_residual: f64) -> Self {
        let h_star = crate::counting::entropy_f64(&phi);
        let nz = phi.iter().filter(|&&v| v > 0.0);
        let mu_star = nz.clone().count();
        let phi_min = nz.clone().cloned().fold(f64::INFINITY, f64::min);
        let phi_max = phi.iter().cloned().fold(0.0, f64::max);
        MaxEntSolution { phi_star: phi, h_star, mu_star, phi_min, phi_max, kkt_residual }
    }

    pub fn m(&self) -> usize {
        self.phi_star.len()
    }

    /// True when every entry of φ* is nonzero (μ* = m).
    pub fn full_support(&self) -> bool {
        self.mu_star == self.m()
    }
}

/// Knobs of the solver. The defaults are the documented behaviour.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// entries below this are declared structural zeros
    pub zero_clip: f64,
    pub tau_start: f64,
    pub tau_stop: f64,
    pub tau_factor: f64,
    pub max_outer: usize,
    pub max_newton: usize,
    /// required KKT residual of the returned solution
    pub kkt_tolerance: f64,
    /// optional strictly feasible starting point (skips phase 1)
    pub start: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            zero_clip: 1e-9,
            tau_start: 1.0,
            tau_stop: 1e-12,
            tau_factor: 10.0,
            max_outer: 200,
            max_newton: 100,
            kkt_tolerance: 1e-10,
            start: None,
        }
    }
}

impl SolverOptions {
    fn schedule(&self) -> Schedule {
        Schedule {
            tau_start: self.tau_start,
            tau_stop: self.tau_stop,
            tau_factor: self.tau_factor,
            max_outer: self.max_outer,
            max_newton: self.max_newton,
        }
    }
}

/// Solves the MaxEnt program with default options.
pub fn solve_maxent(cs: &ConstraintSystem) -> Result<MaxEntSolution> {
    solve_maxent_with(cs, &SolverOptions::default())
}

fn mat(rows: &[Vec<f64>], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| rows[i][cols[j]])
}

pub fn solve_maxent_with(cs: &ConstraintSystem, opts: &SolverOptions) -> Result<MaxEntSolution> {
    let m = cs.m();
    let (ea, eb) = cs.equality_rows();
    let (ga, gb) = cs.inequality_rows();
    let mut zero = vec![false; m];
    let mut promoted = vec![false; ga.len()];
    let mut start = opts.start.clone();
    let sched = opts.schedule();

    for _round in 0..(m + ga.len() + 2) {
        let support: Vec<usize> = (0..m).filter(|&i| !zero[i]).collect();
        if support.is_empty() {
            return Err(Error::Infeasible { violation: 1.0 });
        }
        let ns = support.len();
        let mut e_rows = vec![vec![1.0; m]];
        let mut e_rhs = vec![1.0];
        e_rows.extend(ea.iter().cloned());
        e_rhs.extend(eb.iter().cloned());
        for (j, p) in promoted.iter().enumerate() {
            if *p {
                e_rows.push(ga[j].clone());
                e_rhs.push(gb[j]);
            }
        }
        let g_idx: Vec<usize> = (0..ga.len()).filter(|&j| !promoted[j]).collect();
        let g_rows: Vec<Vec<f64>> = g_idx.iter().map(|&j| ga[j].clone()).collect();
        let e = mat(&e_rows, &support);
        let erhs = DVector::from_vec(e_rhs);
        let g = mat(&g_rows, &support);
        let h = DVector::from_iterator(g_idx.len(), g_idx.iter().map(|&j| gb[j]));

        let aff = affine_space(&e, &erhs);
        let scale = 1.0 + erhs.amax();
        if aff.residual > 1e-9 * scale {
            return Err(Error::Infeasible { violation: aff.residual });
        }
        let k = aff.z.ncols();
        // y-space inequalities: slack = d − C y ≥ 0 for x ≥ 0 and G x ≤ h
        let mut cmat = DMatrix::zeros(ns + g_idx.len(), k);
        cmat.rows_mut(0, ns).copy_from(&(-&aff.z));
        if !g_idx.is_empty() {
            cmat.rows_mut(ns, g_idx.len()).copy_from(&(&g * &aff.z));
        }
        let mut dvec = DVector::zeros(ns + g_idx.len());
        dvec.rows_mut(0, ns).copy_from(&aff.x0);
        if !g_idx.is_empty() {
            dvec.rows_mut(ns, g_idx.len()).copy_from(&(&h - &g * &aff.x0));
        }

        if k == 0 {
            // a single feasible point, if any
            let worst = dvec.iter().cloned().fold(f64::INFINITY, f64::min);
            if worst < -1e-9 * scale {
                return Err(Error::Infeasible { violation: -worst });
            }
            let mut newly = false;
            for (pos, &i) in support.iter().enumerate() {
                if aff.x0[pos] < opts.zero_clip {
                    zero[i] = true;
                    newly = true;
                }
            }
            if newly {
                continue;
            }
            let phi = scatter(m, &support, &aff.x0);
            return finish(cs, phi, &promoted, opts);
        }

        let y_start = start.take().and_then(|x| {
            if x.len() != m {
                return None;
            }
            let xs = DVector::from_iterator(ns, support.iter().map(|&i| x[i]));
            let y = aff.z.transpose() * (&xs - &aff.x0);
            let back = &aff.x0 + &aff.z * &y;
            let ok = (&back - &xs).amax() < 1e-9 && (&dvec - &cmat * &y).iter().all(|&s| s > 0.0);
            ok.then_some(y)
        });

        let y0 = match y_start {
            Some(y) => y,
            None => match phase_one(&cmat, &dvec, k, &sched)? {
                PhaseOne::Interior(y) => y,
                PhaseOne::Infeasible(v) => return Err(Error::Infeasible { violation: v }),
                PhaseOne::Tight(rows) => {
                    if rows.is_empty() {
                        return Err(Error::SolverFailure {
                            reason: "degenerate feasible set with no identifiable tight constraint".into(),
                            residual: f64::NAN,
                        });
                    }
                    for r in rows {
                        if r < ns {
                            zero[support[r]] = true;
                        } else {
                            promoted[g_idx[r - ns]] = true;
                        }
                    }
                    continue;
                }
            },
        };

        let x0 = aff.x0.clone();
        let z = aff.z.clone();
        let entropy_obj = move |y: &DVector<f64>| {
            let x = &x0 + &z * y;
            if x.iter().any(|&v| !(v > 0.0)) {
                return None;
            }
            let fv: f64 = x.iter().map(|&v| v * v.ln()).sum();
            let gx = x.map(|v| v.ln() + 1.0);
            let grad = z.transpose() * gx;
            let mut zw = z.clone();
            for (mut row, xv) in zw.row_iter_mut().zip(x.iter()) {
                row /= xv.sqrt();
            }
            let hess = zw.transpose() * zw;
            Some((fv, grad, hess))
        };
        let out = barrier::minimize(entropy_obj, &cmat, &dvec, y0, &sched)
            .map_err(|reason| Error::SolverFailure { reason, residual: f64::NAN })?;
        let mut x = &aff.x0 + &aff.z * &out.z;

        if !g_idx.is_empty() {
            let gs = &h - &g * &x;
            let active: Vec<bool> = gs.iter().map(|&s| s < out.tau.sqrt()).collect();
            if let Some(px) = polish(&e, &erhs, &g, &h, &x, active) {
                x = px;
            }
        } else if let Some(px) = polish(&e, &erhs, &g, &h, &x, vec![]) {
            x = px;
        }

        let mut newly = false;
        for (pos, &i) in support.iter().enumerate() {
            if x[pos] < opts.zero_clip {
                zero[i] = true;
                newly = true;
            }
        }
        if newly {
            continue;
        }
        let phi = scatter(m, &support, &x);
        return finish(cs, phi, &promoted, opts);
    }
    Err(Error::SolverFailure { reason: "facial reduction did not terminate".into(), residual: f64::NAN })
}

fn scatter(m: usize, support: &[usize], x: &DVector<f64>) -> Vec<f64> {
    let mut phi = vec![0.0; m];
    for (pos, &i) in support.iter().enumerate() {
        phi[i] = x[pos].max(0.0);
    }
    let s: f64 = phi.iter().sum();
    phi.iter_mut().for_each(|v| *v /= s);
    phi
}

fn finish(cs: &ConstraintSystem, phi: Vec<f64>, promoted: &[bool], opts: &SolverOptions) -> Result<MaxEntSolution> {
    let kkt = kkt_residual(cs, &phi, 1e-9, promoted);
    if !(kkt <= opts.kkt_tolerance) {
        return Err(Error::SolverFailure { reason: "KKT residual above tolerance".into(), residual: kkt });
    }
    Ok(MaxEntSolution::from_phi(phi, kkt))
}

enum PhaseOne {
    Interior(DVector<f64>),
    Infeasible(f64),
    /// indices (into the y-space inequality list) that hold with equality
    /// on the whole feasible set
    Tight(Vec<usize>),
}

/// min s subject to d − C y + s ≥ 0, solved by the same barrier.
fn phase_one(cmat: &DMatrix<f64>, dvec: &DVector<f64>, k: usize, sched: &Schedule) -> Result<PhaseOne> {
    let p = cmat.nrows();
    let mut c1 = DMatrix::zeros(p, k + 1);
    c1.columns_mut(0, k).copy_from(cmat);
    c1.column_mut(k).fill(-1.0);
    let worst = dvec.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut z0 = DVector::zeros(k + 1);
    z0[k] = (-worst).max(0.0) + 1.0;
    let obj = |z: &DVector<f64>| {
        let mut g = DVector::zeros(k + 1);
        g[k] = 1.0;
        Some((z[k], g, DMatrix::zeros(k + 1, k + 1)))
    };
    let out = barrier::minimize(obj, &c1, dvec, z0, sched)
        .map_err(|reason| Error::SolverFailure { reason: format!("phase 1: {reason}"), residual: f64::NAN })?;
    let s_star = out.z[k];
    let y = out.z.rows(0, k).into_owned();
    if s_star > 1e-9 {
        return Ok(PhaseOne::Infeasible(s_star));
    }
    if s_star < -1e-9 {
        return Ok(PhaseOne::Interior(y));
    }
    let slack = dvec - cmat * &y;
    Ok(PhaseOne::Tight((0..p).filter(|&j| slack[j] <= 1e-7).collect()))
}

/// Equality-constrained Newton with the active inequalities held tight,
/// adjusting the active set until the multipliers are nonnegative and the
/// inactive rows hold.
fn polish(
    e: &DMatrix<f64>,
    erhs: &DVector<f64>,
    g: &DMatrix<f64>,
    h: &DVector<f64>,
    x_init: &DVector<f64>,
    mut active: Vec<bool>,
) -> Option<DVector<f64>> {
    let n = x_init.len();
    let mut x = x_init.clone();
    for _ in 0..(2 * g.nrows() + 5) {
        let idx: Vec<usize> = (0..g.nrows()).filter(|&j| active[j]).collect();
        let ne = e.nrows();
        let mut ea = DMatrix::zeros(ne + idx.len(), n);
        ea.rows_mut(0, ne).copy_from(e);
        let mut rhs = DVector::zeros(ne + idx.len());
        rhs.rows_mut(0, ne).copy_from(erhs);
        for (k, &j) in idx.iter().enumerate() {
            ea.set_row(ne + k, &g.row(j));
            rhs[ne + k] = h[j];
        }
        let aff = affine_space(&ea, &rhs);
        if aff.residual > 1e-10 {
            return None;
        }
        let mut y = aff.z.transpose() * (&x - &aff.x0);
        x = &aff.x0 + &aff.z * &y;
        if x.iter().any(|&v| !(v > 0.0)) {
            return None;
        }
        let mut converged = aff.z.ncols() == 0;
        for _ in 0..100 {
            if converged {
                break;
            }
            let gx = x.map(|v| v.ln() + 1.0);
            let grad = aff.z.transpose() * &gx;
            let mut zw = aff.z.clone();
            for (mut row, xv) in zw.row_iter_mut().zip(x.iter()) {
                row /= xv.sqrt();
            }
            let hess = zw.transpose() * &zw;
            let dy = hess.cholesky()?.solve(&(-&grad));
            let dec = -grad.dot(&dy);
            if dec / 2.0 <= 1e-28 {
                converged = true;
                break;
            }
            let f0: f64 = x.iter().map(|&v| v * v.ln()).sum();
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-18 {
                let yn = &y + &dy * t;
                let xn = &aff.x0 + &aff.z * &yn;
                if xn.iter().all(|&v| v > 0.0) {
                    let f1: f64 = xn.iter().map(|&v| v * v.ln()).sum();
                    if dec < 1e-10 || f1 <= f0 - 1e-4 * t * dec {
                        y = yn;
                        x = xn;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                converged = dec < 1e-16;
                break;
            }
        }
        if !converged {
            return None;
        }
        let gx = x.map(|v| -(v.ln() + 1.0));
        let w = lstsq(&ea.transpose(), &gx);
        let lambda: Vec<f64> = (0..idx.len()).map(|k| w[ne + k]).collect();
        let gxh = g * &x - h;
        let worst_inactive = (0..g.nrows())
            .filter(|&j| !active[j])
            .max_by(|&a, &b| gxh[a].total_cmp(&gxh[b]));
        if let Some(j) = worst_inactive {
            if gxh[j] > 1e-13 {
                active[j] = true;
                continue;
            }
        }
        let most_negative = (0..idx.len()).min_by(|&a, &b| lambda[a].total_cmp(&lambda[b]));
        if let Some(kk) = most_negative {
            if lambda[kk] < -1e-12 {
                active[idx[kk]] = false;
                continue;
            }
        }
        return Some(x);
    }
    None
}

/// Largest violation of the KKT conditions at φ: primal feasibility, dual
/// feasibility, stationarity on the support, complementary slackness.
///
/// Inequality rows within `active_tol` of their bound count as active;
/// rows flagged in `free_sign` (inequalities known to hold with equality on
/// the whole feasible set) get unrestricted multipliers.
pub fn kkt_residual(cs: &ConstraintSystem, phi: &[f64], active_tol: f64, free_sign: &[bool]) -> f64 {
    let m = cs.m();
    let (ea, eb) = cs.equality_rows();
    let (ga, gb) = cs.inequality_rows();
    let dot = |r: &[f64]| r.iter().zip(phi).map(|(a, x)| a * x).sum::<f64>();

    let mut primal = (phi.iter().sum::<f64>() - 1.0).abs();
    for (r, b) in ea.iter().zip(&eb) {
        primal = primal.max((dot(r) - b).abs());
    }
    let gval: Vec<f64> = ga.iter().zip(&gb).map(|(r, b)| dot(r) - b).collect();
    for v in &gval {
        primal = primal.max(v.max(0.0));
    }
    for v in phi {
        primal = primal.max((-v).max(0.0));
    }

    let support: Vec<usize> = (0..m).filter(|&i| phi[i] > 0.0).collect();
    let active: Vec<usize> = (0..ga.len()).filter(|&j| gval[j] >= -active_tol).collect();
    let free_active: Vec<usize> = active.iter().cloned().filter(|&j| free_sign.get(j).copied().unwrap_or(false)).collect();
    let signed_active: Vec<usize> = active.iter().cloned().filter(|j| !free_active.contains(j)).collect();

    // columns of the stationarity system: free rows first, then signed ones
    let mut free_rows = vec![vec![1.0; m]];
    free_rows.extend(ea.iter().cloned());
    free_rows.extend(free_active.iter().map(|&j| ga[j].clone()));
    let signed_rows: Vec<Vec<f64>> = signed_active.iter().map(|&j| ga[j].clone()).collect();
    let nf = free_rows.len();
    let ns = signed_rows.len();
    let a = DMatrix::from_fn(support.len(), nf + ns, |i, c| {
        let col = support[i];
        if c < nf {
            free_rows[c][col]
        } else {
            signed_rows[c - nf][col]
        }
    });
    let rhs = DVector::from_iterator(support.len(), support.iter().map(|&i| -(phi[i].ln() + 1.0)));
    let mut w = lstsq(&a, &rhs);
    if (0..ns).any(|k| w[nf + k] < -1e-12) {
        // split free multipliers into ± parts and solve with nonnegativity
        let mut a2 = DMatrix::zeros(support.len(), 2 * nf + ns);
        a2.columns_mut(0, nf).copy_from(&a.columns(0, nf));
        a2.columns_mut(nf, nf).copy_from(&(-a.columns(0, nf)));
        a2.columns_mut(2 * nf, ns).copy_from(&a.columns(nf, ns));
        let v = nnls(&a2, &rhs);
        let mut w2 = DVector::zeros(nf + ns);
        for c in 0..nf {
            w2[c] = v[c] - v[nf + c];
        }
        for c in 0..ns {
            w2[nf + c] = v[2 * nf + c];
        }
        w = w2;
    }
    let stationarity = if support.is_empty() { 0.0 } else { (&a * &w - &rhs).amax() };
    let mut dual: f64 = 0.0;
    let mut comp: f64 = 0.0;
    for (k, &j) in signed_active.iter().enumerate() {
        let lam = w[nf + k];
        dual = dual.max((-lam).max(0.0));
        comp = comp.max((lam * gval[j]).abs());
    }
    primal.max(dual).max(stationarity).max(comp)
}

/// Packages a user-supplied φ (for instance a known closed form) as a
/// solution, after checking it satisfies the constraints within 1e−8.
pub fn accept_external_solution(cs: &ConstraintSystem, phi: &[f64]) -> Result<MaxEntSolution> {
    accept_external_solution_with_tolerance(cs, phi, 1e-8)
}

/// [`accept_external_solution`] with an explicit feasibility tolerance,
/// for vectors known only to a few printed digits.
pub fn accept_external_solution_with_tolerance(
    cs: &ConstraintSystem,
    phi: &[f64],
    tol: f64,
) -> Result<MaxEntSolution> {
    if phi.len() != cs.m() {
        return Err(Error::Dimension { expected: cs.m(), got: phi.len() });
    }
    if let Some(v) = phi.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::Rejected(format!("entry {v} is negative or not finite")));
    }
    let s: f64 = phi.iter().sum();
    if (s - 1.0).abs() > tol {
        return Err(Error::Rejected(format!("entries sum to {s}, not 1 within {tol:e}")));
    }
    let phi: Vec<f64> = phi.iter().map(|v| v / s).collect();
    let report = crate::constraints::satisfies(cs, &crate::constraints::ToleranceSpec::unbounded(), &phi)?;
    let mut bad = Vec::new();
    for r in &report.rows {
        let over = if r.category.is_equality() { r.residual.abs() } else { r.residual };
        if over > tol {
            bad.push(format!("{:?}[{}] residual {:+.3e}", r.category, r.row, r.residual));
        }
    }
    if !bad.is_empty() {
        return Err(Error::Rejected(format!("constraints violated beyond {tol:e}: {}", bad.join(", "))));
    }
    let kkt = kkt_residual(cs, &phi, tol, &[]);
    Ok(MaxEntSolution::from_phi(phi, kkt))
}

/// A strictly feasible point of the constraint system, roughly centred:
/// the phase-1 point that maximizes the smallest slack. Fails when the
/// feasible set has no interior relative to its equalities.
pub fn strictly_feasible_point(cs: &ConstraintSystem) -> Result<Vec<f64>> {
    let m = cs.m();
    let (ea, eb) = cs.equality_rows();
    let (ga, gb) = cs.inequality_rows();
    let all: Vec<usize> = (0..m).collect();
    let mut e_rows = vec![vec![1.0; m]];
    e_rows.extend(ea);
    let mut e_rhs = vec![1.0];
    e_rhs.extend(eb);
    let e = mat(&e_rows, &all);
    let erhs = DVector::from_vec(e_rhs);
    let g = mat(&ga, &all);
    let h = DVector::from_vec(gb);
    let aff = affine_space(&e, &erhs);
    if aff.residual > 1e-9 * (1.0 + erhs.amax()) {
        return Err(Error::Infeasible { violation: aff.residual });
    }
    let k = aff.z.ncols();
    let p = m + ga.len();
    let mut cmat = DMatrix::zeros(p, k);
    cmat.rows_mut(0, m).copy_from(&(-&aff.z));
    let mut dvec = DVector::zeros(p);
    dvec.rows_mut(0, m).copy_from(&aff.x0);
    if !ga.is_empty() {
        cmat.rows_mut(m, ga.len()).copy_from(&(&g * &aff.z));
        dvec.rows_mut(m, ga.len()).copy_from(&(&h - &g * &aff.x0));
    }
    if k == 0 {
        return Err(Error::Precondition("feasible set is a single point".into()));
    }
    match phase_one(&cmat, &dvec, k, &SolverOptions::default().schedule())? {
        PhaseOne::Interior(y) => Ok((&aff.x0 + &aff.z * y).iter().cloned().collect()),
        PhaseOne::Infeasible(v) => Err(Error::Infeasible { violation: v }),
        PhaseOne::Tight(_) => Err(Error::Precondition("feasible set has empty interior".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_without_constraints() {
        let cs = ConstraintSystem::unconstrained(6).unwrap();
        let s = solve_maxent(&cs).unwrap();
        for v in &s.phi_star {
            assert!((v - 1.0 / 6.0).abs() < 1e-13);
        }
        assert!((s.h_star - 6f64.ln()).abs() < 1e-12);
        assert_eq!(s.mu_star, 6);
    }

    #[test]
    fn infeasible_mean_detected() {
        let cs = ConstraintSystem::unconstrained(3)
            .unwrap()
            .with_equalities(vec![vec![1., 2., 3.]], vec![3.5])
            .unwrap();
        assert!(matches!(solve_maxent(&cs), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn forced_zero_becomes_structural() {
        // x0 ≤ 0 (zero-RHS inequality) forces a structural zero
        let cs = ConstraintSystem::unconstrained(3)
            .unwrap()
            .with_zero_inequalities(vec![vec![1., 0., 0.]])
            .unwrap();
        let s = solve_maxent(&cs).unwrap();
        assert_eq!(s.phi_star[0], 0.0);
        assert_eq!(s.mu_star, 2);
        assert!((s.phi_star[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn implied_equality_from_opposite_inequalities() {
        let cs = ConstraintSystem::unconstrained(3)
            .unwrap()
            .with_inequalities(vec![vec![1., 0., 0.], vec![-1., 0., 0.]], vec![0.5, -0.5])
            .unwrap();
        let s = solve_maxent(&cs).unwrap();
        assert!((s.phi_star[0] - 0.5).abs() < 1e-12);
        assert!((s.phi_star[1] - 0.25).abs() < 1e-12);
        assert!(s.kkt_residual <= 1e-10);
    }

    #[test]
    fn single_point_feasible_set() {
        let cs = ConstraintSystem::unconstrained(2)
            .unwrap()
            .with_equalities(vec![vec![1., 0.]], vec![0.3])
            .unwrap();
        let s = solve_maxent(&cs).unwrap();
        assert!((s.phi_star[0] - 0.3).abs() < 1e-14);
    }
}
