mod common;

use common::{rel, solved};
use entconc::bounds::{alpha0, psi, scan_alpha};
use entconc::{
    compute_bound, compute_n_fstar_entropy, compute_n_fstar_norm, compute_n_pd, compute_n_theorem1,
    compute_n_theorem2, compute_n_uniform, ActiveBranch, BoundKind, BoundReport, Error,
};

// Reference values below were computed with an independent
// double-precision script of the same α-equation.

fn check_invariants(r: &BoundReport) {
    assert!(r.defining_residual() <= 1e-9, "{:?} residual {}", r.kind, r.defining_residual());
    assert!(r.alpha_hat > 0.0 && r.alpha_hat < 1.0);
    if let Some(a0) = r.alpha0 {
        assert!(r.alpha_hat < a0);
        assert!(psi(r.alpha_hat, r.theta.unwrap(), r.m) > 0.0);
    }
    assert!(r.c1 > 0.0);
    // N is at least every term it is the maximum of, and the branch is the argmax
    let terms = r.max_terms();
    let (best, val) = terms.iter().copied().fold((ActiveBranch::Tolerance, f64::NEG_INFINITY), |a, b| {
        if b.1 > a.1 {
            b
        } else {
            a
        }
    });
    for (_, t) in terms {
        assert!(r.n >= r.scale * t * (1.0 - 1e-12));
    }
    assert!(rel(r.n, r.scale * val) < 1e-12);
    assert_eq!(best, r.active_branch);
    assert!(r.n_ceil as f64 >= r.n);
    assert!(r.validity.iter().all(|v| v.passed));
}

#[test]
fn die_without_constraints() {
    let d = solved("die_unconstrained");
    let eps = [0.05, 0.005, 5e-6, 5e-12, 5e-18, 5e-36];
    let expected = [
        (0.00309, [16066.3117, 16852.7896, 18860.4868, 22216.4802, 25253.5153, 33729.1569]),
        (0.00467, [10075.3577, 10595.7492, 11924.5738, 14146.3005, 16156.9673, 21767.784]),
    ];
    let alphas = [
        [0.340075, 0.325914, 0.294821, 0.254741, 0.227177, 0.175296],
        [0.340403, 0.325569, 0.293222, 0.251974, 0.223894, 0.171654],
    ];
    for ((eta, ns), als) in expected.iter().zip(alphas) {
        for ((e, n), a) in eps.iter().zip(ns).zip(als) {
            let r = compute_n_theorem1(&d.solution, &d.system, &d.tolerances, *e, *eta).unwrap();
            check_invariants(&r);
            assert!(rel(r.n, *n) < 1e-7, "η={eta} ε={e}: {} vs {n}", r.n);
            assert!((r.alpha_hat - a).abs() < 1e-6);
            assert_eq!(r.active_branch, ActiveBranch::Tolerance);
            assert!(r.theta_inf.is_infinite());
        }
    }
}

#[test]
fn die_with_mean() {
    let d = solved("die_mean");
    let eps = [0.01, 1e-4, 1e-8, 1e-16, 1e-32, 1e-64];
    let expected = [7817.0137, 8541.5861, 9769.1982, 11910.2289, 15807.6037, 23162.5152];
    for (e, n) in eps.iter().zip(expected) {
        let r = compute_n_theorem1(&d.solution, &d.system, &d.tolerances, *e, 0.0067).unwrap();
        check_invariants(&r);
        assert!(rel(r.n, n) < 1e-7, "ε={e}: {}", r.n);
    }
    assert!(rel(d.solution.h_star, 1.61358) < 1e-5);
}

#[test]
fn traffic_entropy_bound_hits_the_constraint_branch() {
    let t = solved("traffic");
    let expected_alpha = [0.9163, 0.9126, 0.8995, 0.8326, 0.8253, 0.7991];
    let mut k = 0;
    for eta in [0.01, 0.005] {
        for eps in [1e-6, 1e-12, 1e-24] {
            let r = compute_n_theorem1(&t.solution, &t.system, &t.tolerances, eps, eta).unwrap();
            check_invariants(&r);
            assert_eq!(r.n, 120000.0);
            assert_eq!(r.n_ceil, 120000);
            assert_eq!(r.active_branch, ActiveBranch::ThetaInfinity);
            assert!((r.alpha_hat - expected_alpha[k]).abs() < 5e-5);
            k += 1;
        }
    }
    let expected = [160807.3123, 165691.5624, 183001.4993];
    for (eps, n) in [1e-6, 1e-12, 1e-24].iter().zip(expected) {
        let r = compute_n_theorem1(&t.solution, &t.system, &t.tolerances, *eps, 0.001).unwrap();
        check_invariants(&r);
        assert!(rel(r.n, n) < 1e-8);
        assert_eq!(r.active_branch, ActiveBranch::Tolerance);
    }
}

#[test]
fn traffic_norm_bounds() {
    let t = solved("traffic");
    let expected = [
        (0.05, 1e-6, 416022.4139, 489888.6332),
        (0.05, 1e-12, 428261.2460, 502120.8971),
        (0.05, 1e-24, 471616.3987, 545477.1158),
        (0.01, 1e-6, 13542066.23, 15855341.95),
        (0.01, 1e-12, 13848666.09, 16161801.51),
        (0.01, 1e-24, 14933667.41, 17246704.19),
        (0.005, 1e-6, 59567640.59, 69615840.83),
        (0.005, 1e-12, 60794719.72, 70842404.12),
        (0.005, 1e-24, 65136025.27, 75183239.00),
    ];
    for (theta, eps, th2, le2) in expected {
        let a = compute_n_theorem2(&t.solution, &t.system, &t.tolerances, eps, theta).unwrap();
        let b = compute_n_fstar_norm(&t.solution, &t.system, &t.tolerances, eps, theta).unwrap();
        check_invariants(&a);
        check_invariants(&b);
        assert!(rel(a.n, th2) < 1e-8, "{theta} {eps}: {}", a.n);
        assert!(rel(b.n, le2) < 1e-8, "{theta} {eps}: {}", b.n);
    }
    let r = compute_n_theorem2(&t.solution, &t.system, &t.tolerances, 1e-6, 0.05).unwrap();
    assert!((r.alpha_hat - 5.7689e-4).abs() < 1e-7);
}

#[test]
fn queue_norm_bounds() {
    let th2 = [8.3126e6, 1.0055e9, 1.2290e11, 1.4521e13, 1.6748e15];
    let co = [1.3508e7, 1.1653e9, 1.4249e11, 1.6837e13, 1.9421e15];
    for name in ["queue_mean", "queue_bounded"] {
        let q = solved(name);
        for (i, theta) in [0.01, 1e-3, 1e-4, 1e-5, 1e-6].into_iter().enumerate() {
            let a = compute_n_theorem2(&q.solution, &q.system, &q.tolerances, 1e-20, theta).unwrap();
            let b = compute_n_pd(&q.solution, &q.system, &q.tolerances, 1e-20, theta).unwrap();
            check_invariants(&a);
            check_invariants(&b);
            assert!(rel(a.n, th2[i]) < 1e-4, "{name} ϑ={theta}: {}", a.n);
            assert!(rel(b.n, co[i]) < 1e-4, "{name} ϑ={theta}: {}", b.n);
            assert!(rel(a.theta_inf, 7.217948717948719e-7) < 1e-12);
        }
    }
}

#[test]
fn theorem2_ignores_h_star() {
    let q = solved("queue_bounded");
    let a = compute_n_theorem2(&q.solution, &q.system, &q.tolerances, 1e-20, 1e-3).unwrap();
    let mut other = q.solution.clone();
    other.h_star = f64::NAN;
    let b = compute_n_theorem2(&other, &q.system, &q.tolerances, 1e-20, 1e-3).unwrap();
    assert_eq!(a, b);
}

#[test]
fn uniform_corollary() {
    let r = compute_n_uniform(2, 1e-8, 0.01).unwrap();
    check_invariants(&r);
    assert!(rel(r.n, 1232817.8211) < 1e-9);
    assert_eq!(r.n_ceil, 1232818);
    assert!(r.radius.unwrap() <= 1.22e-6);
    assert!(matches!(compute_n_uniform(20, 1e-8, 0.06), Err(Error::Precondition(_))));
    assert!(matches!(compute_n_uniform(2, 1e-8, 0.1), Err(Error::Precondition(_))));
}

#[test]
fn monotone_in_epsilon_and_tolerance() {
    let d = solved("die_mean");
    let t = solved("traffic");
    let epsilons = [0.1, 1e-2, 1e-4, 1e-8, 1e-16, 1e-32];
    for (s, kind, params) in [
        (&d, BoundKind::Theorem1, vec![0.002, 0.004, 0.0067, 0.01, 0.02]),
        (&d, BoundKind::LemmaCor1, vec![0.002, 0.004, 0.0067, 0.01, 0.02]),
        (&t, BoundKind::Theorem1, vec![0.0005, 0.001, 0.005, 0.01]),
        (&t, BoundKind::Theorem2, vec![0.005, 0.01, 0.02, 0.05]),
        (&t, BoundKind::LemmaCor2, vec![0.005, 0.01, 0.02, 0.05]),
    ] {
        let grid: Vec<Vec<f64>> = params
            .iter()
            .map(|&p| {
                epsilons
                    .iter()
                    .map(|&e| compute_bound(kind, &s.solution, &s.system, &s.tolerances, e, p).unwrap().n)
                    .collect()
            })
            .collect();
        for row in &grid {
            assert!(row.windows(2).all(|w| w[0] <= w[1]), "{kind:?} not monotone in ε: {row:?}");
        }
        for j in 0..epsilons.len() {
            assert!(grid.windows(2).all(|w| w[0][j] >= w[1][j]), "{kind:?} not monotone in tolerance");
        }
    }
}

#[test]
fn fstar_entropy_bound() {
    let d = solved("die_mean");
    let r = compute_n_fstar_entropy(&d.solution, &d.system, &d.tolerances, 1e-8, 0.0067).unwrap();
    check_invariants(&r);
    assert_eq!(r.scale, 1.0);
    let th = compute_n_theorem1(&d.solution, &d.system, &d.tolerances, 1e-8, 0.0067).unwrap();
    assert!(r.n < th.n);
    assert!(r.summary().contains(&r.n_ceil.to_string()));
}

#[test]
fn side_conditions_are_errors() {
    let d = solved("die_mean");
    // η above m/(21 H*)
    let e = compute_n_theorem1(&d.solution, &d.system, &d.tolerances, 1e-8, 0.2).unwrap_err();
    assert!(matches!(e, Error::Validity { .. }), "{e:?}");
    let e = compute_n_theorem2(&d.solution, &d.system, &d.tolerances, 1e-8, 0.5).unwrap_err();
    assert!(matches!(e, Error::Precondition(_)));
    // m = 25 is not below ½ϑ³e^{1/ϑ} at ϑ = 0.3
    let t = solved("traffic");
    assert!(compute_n_theorem2(&t.solution, &t.system, &t.tolerances, 1e-8, 0.3).is_err());
    assert!(compute_n_theorem1(&d.solution, &d.system, &d.tolerances, 1.5, 0.005).is_err());
}

#[test]
fn small_thresholds_are_clamped() {
    let cs = entconc::ConstraintSystem::unconstrained(20).unwrap();
    let sol = entconc::solve_maxent(&cs).unwrap();
    let delta = entconc::ToleranceSpec::unbounded();
    let r = compute_n_fstar_entropy(&sol, &cs, &delta, 0.9, 0.3).unwrap();
    assert!(r.n < 100.0);
    assert_eq!(r.n_ceil, 100);
    assert_eq!(r.notes.len(), 1);
}

#[test]
fn alpha0_is_the_root_of_psi() {
    for (theta, m) in [(0.05, 25), (0.01, 13), (1e-6, 13), (0.12, 3)] {
        let a0 = alpha0(theta, m).unwrap();
        assert!(psi(a0, theta, m).abs() < 1e-15, "ϑ={theta}");
        assert!(psi(a0 * 0.999, theta, m) > 0.0);
    }
    assert!(alpha0(0.3, 25).is_err());
}

#[test]
fn alpha_scan() {
    let d = solved("die_mean");
    let s = scan_alpha(BoundKind::Theorem1, &d.solution, &d.system, &d.tolerances, 1e-8, 0.0067, 2).unwrap();
    assert_eq!(s.rows.len(), 3);
    assert!((s.alpha_hat - 0.2708).abs() < 1e-3);
    let s = scan_alpha(BoundKind::Theorem1, &d.solution, &d.system, &d.tolerances, 1e-8, 0.0067, 50).unwrap();
    let hat = s.rows.iter().find(|r| r.crossing).unwrap();
    assert!(rel(hat.n_alpha, hat.rhs) < 1e-9);
    assert!(rel(hat.rhs, 9769.1982) < 1e-7);
    assert!(s.rows.windows(2).all(|w| w[0].alpha <= w[1].alpha));
    assert!(s.rows.windows(2).all(|w| w[0].n_alpha <= w[1].n_alpha && w[0].rhs >= w[1].rhs));

    let t = solved("traffic");
    let s = scan_alpha(BoundKind::Theorem2, &t.solution, &t.system, &t.tolerances, 1e-6, 0.05, 20).unwrap();
    assert!((s.alpha_hat - 5.7689e-4).abs() < 1e-7);
}
