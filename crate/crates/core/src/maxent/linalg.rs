//! Small dense linear-algebra helpers for the solver.

use nalgebra::{DMatrix, DVector};

/// {x : E x = e} written as x0 + Z y, with Z an orthonormal null-space
/// basis of E and x0 the minimum-norm solution.
pub(crate) struct AffineSpace {
    pub x0: DVector<f64>,
    pub z: DMatrix<f64>,
    /// ‖E x0 − e‖∞; nonzero when the equalities are inconsistent
    pub residual: f64,
}

pub(crate) fn affine_space(e: &DMatrix<f64>, rhs: &DVector<f64>) -> AffineSpace {
    let (r, m) = e.shape();
    if r == 0 {
        return AffineSpace { x0: DVector::zeros(m), z: DMatrix::identity(m, m), residual: 0.0 };
    }
    let p = r.max(m);
    let mut sq = DMatrix::zeros(p, m);
    sq.rows_mut(0, r).copy_from(e);
    let mut b = DVector::zeros(p);
    b.rows_mut(0, r).copy_from(rhs);
    let svd = sq.svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let sig = &svd.singular_values;
    let smax = sig.iter().cloned().fold(0.0, f64::max);
    let tol = 1e-12 * smax.max(1e-300) * p as f64;
    let mut x0 = DVector::zeros(m);
    let mut null_rows = Vec::new();
    for i in 0..sig.len() {
        if sig[i] > tol {
            let coef = u.column(i).dot(&b) / sig[i];
            x0 += vt.row(i).transpose() * coef;
        } else {
            null_rows.push(i);
        }
    }
    let mut z = DMatrix::zeros(m, null_rows.len());
    for (k, &i) in null_rows.iter().enumerate() {
        z.set_column(k, &vt.row(i).transpose());
    }
    let residual = (e * &x0 - rhs).amax();
    AffineSpace { x0, z, residual }
}

/// Minimum-norm least-squares solution of A x ≈ b.
pub(crate) fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let (r, n) = a.shape();
    if n == 0 {
        return DVector::zeros(0);
    }
    if r == 0 {
        return DVector::zeros(n);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = 1e-13 * smax.max(1e-300) * r.max(n) as f64;
    svd.solve(b, tol).unwrap_or_else(|_| DVector::zeros(n))
}

/// Nonnegative least squares (Lawson–Hanson): min ‖A x − b‖ with x ≥ 0.
pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-14 * (a.amax().max(1.0)) * (b.amax().max(1.0)) * n.max(1) as f64;
    for _outer in 0..3 * n + 10 {
        let w = a.transpose() * (b - a * &x);
        let cand = (0..n).filter(|&j| !passive[j]).max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let t = match cand {
            Some(t) if w[t] > tol => t,
            _ => break,
        };
        passive[t] = true;
        for _inner in 0..3 * n + 10 {
            let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let ap = a.select_columns(idx.iter());
            let sp = lstsq(&ap, b);
            let mut s = DVector::zeros(n);
            for (k, &j) in idx.iter().enumerate() {
                s[j] = sp[k];
            }
            if idx.iter().all(|&j| s[j] > 0.0) {
                x = s;
                break;
            }
            let mut alpha = 1.0f64;
            for &j in &idx {
                if s[j] <= 0.0 {
                    let d = x[j] - s[j];
                    if d > 0.0 {
                        alpha = alpha.min(x[j] / d);
                    }
                }
            }
            x += (s - &x) * alpha;
            for &j in &idx {
                if x[j] <= 1e-15 {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
        }
    }
    x
}
