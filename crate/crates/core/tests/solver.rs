mod common;

use common::solved;
use entconc::maxent::{accept_external_solution, kkt_residual, strictly_feasible_point};
use entconc::{config, solve_maxent, ConstraintSystem, Error};

#[test]
fn die_mean_solution() {
    let s = solved("die_mean").solution;
    // independently: λ solving Σ i x^i / Σ x^i = 4.5, φ_i ∝ x^i
    let expected = [0.0543532, 0.0787715, 0.1141600, 0.1654468, 0.2397744, 0.3474941];
    for (p, e) in s.phi_star.iter().zip(expected) {
        assert!((p - e).abs() < 5e-7, "{p} vs {e}");
    }
    assert!((s.h_star - 1.61358).abs() < 1e-4);
    // exponential family in the face value: constant successive ratio
    let r: Vec<f64> = s.phi_star.windows(2).map(|w| w[1] / w[0]).collect();
    assert!(r.iter().all(|x| (x - r[0]).abs() < 1e-8));
    let mean: f64 = s.phi_star.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum();
    assert!((mean - 4.5).abs() < 1e-12);
}

#[test]
fn traffic_solution_is_rational() {
    let s = solved("traffic").solution;
    assert!((s.h_star - 3.1419).abs() < 1e-3);
    let a1 = 1.17 / 38.0;
    let b1 = a1 * 11.0 / 18.0;
    let a2 = 2.25 / 38.0;
    let b2 = a2 * 11.0 / 18.0;
    let expected = [
        [a1, a1, b1, b1, a1],
        [a2, a2, b2, b2, a2],
        [0.052; 5],
        [0.02; 5],
        [0.052; 5],
    ];
    for i in 0..5 {
        for j in 0..5 {
            let p = s.phi_star[5 * i + j];
            assert!((p - expected[i][j]).abs() < 1e-9, "cell ({i},{j}) = {p}");
        }
    }
    assert!((s.phi_min - b1).abs() < 1e-9);
    assert_eq!(s.mu_star, 25);
}

#[test]
fn queue_solutions() {
    let s = solved("queue_mean").solution;
    assert!((s.h_star - 2.56006).abs() < 1e-4);
    assert!((s.phi_star[0] - 0.0897).abs() < 1e-4);
    assert!((s.phi_star[1] / s.phi_star[0] - 0.9739).abs() < 1e-4);

    let s = solved("queue_bounded").solution;
    assert!((s.h_star - 2.5431552).abs() < 1e-6);
    assert!((s.phi_star[0] - 0.12).abs() < 1e-10);
    assert!((s.phi_star[12] - 0.04).abs() < 1e-10);
    for k in 1..12 {
        let g = 0.0705308289 * 1.013185985f64.powi(k as i32);
        assert!((s.phi_star[k] - g).abs() < 1e-8, "p{k}");
    }
}

#[test]
fn kkt_residual_small_on_every_bundled_problem() {
    for name in config::bundled_names() {
        let p = config::bundled(name).unwrap();
        let t = std::time::Instant::now();
        let s = solve_maxent(&p.system).unwrap();
        assert!(t.elapsed().as_secs_f64() < 1.0, "{name} too slow");
        assert!(s.kkt_residual <= 1e-10, "{name}: {}", s.kkt_residual);
        let sum: f64 = s.phi_star.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}

#[test]
fn external_solution_is_checked() {
    let p = config::bundled("die_mean").unwrap();
    let s = solve_maxent(&p.system).unwrap();
    let back = accept_external_solution(&p.system, &s.phi_star).unwrap();
    assert!((back.h_star - s.h_star).abs() < 1e-12);
    let cs = &p.system;
    // feasible but not maximal: accepted, with the stationarity defect reported
    let mut other = s.phi_star.clone();
    for (o, d) in other.iter_mut().zip([0.01, -0.02, 0.01]) {
        *o += d;
    }
    let acc = accept_external_solution(cs, &other).unwrap();
    assert!(acc.kkt_residual > 1e-3);
    assert!(kkt_residual(cs, &s.phi_star, 1e-9, &[]) < 1e-9);
    // infeasible: rejected
    let bad = [1.0 / 6.0; 6];
    assert!(matches!(accept_external_solution(cs, &bad), Err(Error::Rejected(_))));
    // the printed geometric queue form
    let q = config::bundled("queue_mean").unwrap();
    let phi: Vec<f64> = (0..13).map(|k| 0.0897 * 0.9739f64.powi(k)).collect();
    let acc = entconc::maxent::accept_external_solution_with_tolerance(&q.system, &phi, 1e-3).unwrap();
    assert!((acc.h_star - 2.5600).abs() < 1e-3);
    let u = accept_external_solution(&ConstraintSystem::unconstrained(5).unwrap(), &[0.2; 5]).unwrap();
    assert!((u.h_star - 5f64.ln()).abs() < 1e-12);
}

#[test]
fn interior_point_exists_for_bundled() {
    for name in ["die_mean", "traffic", "queue_bounded"] {
        let p = config::bundled(name).unwrap();
        let x = strictly_feasible_point(&p.system).unwrap();
        assert!(x.iter().all(|&v| v > 0.0));
    }
}

#[test]
fn infeasible_and_degenerate_systems() {
    let cs = ConstraintSystem::unconstrained(3)
        .unwrap()
        .with_equalities(vec![vec![1.0, 2.0, 3.0]], vec![3.5])
        .unwrap();
    assert!(matches!(solve_maxent(&cs), Err(Error::Infeasible { .. })));

    // zero category forcing one entry to vanish
    let cs = ConstraintSystem::unconstrained(4).unwrap().with_zero_equalities(vec![vec![0.0, 0.0, 1.0, 0.0]]).unwrap();
    let s = solve_maxent(&cs).unwrap();
    assert_eq!(s.mu_star, 3);
    assert!((s.h_star - 3f64.ln()).abs() < 1e-10);
}
