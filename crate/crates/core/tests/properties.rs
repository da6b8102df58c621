mod common;

use common::{small_mean_system, solved};
use entconc::counting::{entropy_f64, entropy_norm_bridges, LogScalar};
use entconc::discretize::{exact_closeness, round_vector};
use entconc::oracle::{count_by_enumeration, count_lattice_points, for_each_composition, IntRow, IntegerSystem, RowOp};
use entconc::{
    compute_n_fstar_norm, compute_n_theorem1, compute_n_theorem2, solve_maxent, solve_maxent_with, ConstraintSystem,
    SolverOptions,
};
use proptest::prelude::*;

fn simplex(m: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, m).prop_filter_map("positive mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| w.iter().map(|x| x / s).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rounding_meets_radii_exactly(phi in simplex(2..=10), n in 1u64..20_000) {
        let nu = round_vector(&phi, n).unwrap();
        prop_assert_eq!(nu.nu.iter().sum::<u64>(), n);
        let mu = phi.iter().filter(|&&p| p > 0.0).count();
        let c = exact_closeness(&nu, &phi).unwrap();
        prop_assert!(c.within_radii(n, mu));
        // zeros of φ stay zero
        for (v, p) in nu.nu.iter().zip(&phi) {
            if *p == 0.0 {
                prop_assert_eq!(*v, 0);
            }
        }
    }

    #[test]
    fn log_scalar_arithmetic(a in -50.0f64..50.0, b in -50.0f64..50.0) {
        let (x, y) = (LogScalar::from_ln(a), LogScalar::from_ln(b));
        let s = x.add(y);
        prop_assert!((s.ln() - y.add(x).ln()).abs() < 1e-12);
        prop_assert!(s.ln() >= a.max(b));
        prop_assert!(s.ln() <= a.max(b) + 2f64.ln() + 1e-12);
        prop_assert!(((x * y).ln() - (a + b)).abs() < 1e-12);
        prop_assert!(((x / y).ln() - (a - b)).abs() < 1e-12);
    }

    #[test]
    fn theorem1_residual(eps_exp in 1.0f64..60.0, eta in 0.001f64..0.02) {
        let d = solved("die_mean");
        let r = compute_n_theorem1(&d.solution, &d.system, &d.tolerances, 10f64.powf(-eps_exp), eta).unwrap();
        prop_assert!(r.defining_residual() <= 1e-9);
        prop_assert!(r.n_ceil as f64 >= r.n);
    }

    #[test]
    fn theorem2_residual(eps_exp in 1.0f64..60.0, theta in 0.002f64..0.06) {
        let t = solved("traffic");
        let a = compute_n_theorem2(&t.solution, &t.system, &t.tolerances, 10f64.powf(-eps_exp), theta).unwrap();
        let b = compute_n_fstar_norm(&t.solution, &t.system, &t.tolerances, 10f64.powf(-eps_exp), theta).unwrap();
        for r in [a, b] {
            prop_assert!(r.defining_residual() <= 1e-9);
            prop_assert!(r.alpha_hat < r.alpha0.unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Strict concavity: any interior starting point reaches the same φ*.
    #[test]
    fn solver_start_does_not_matter(w in prop::collection::vec(0.05f64..1.0, 13), name_idx in 0usize..3) {
        let name = ["die_mean", "traffic", "queue_bounded"][name_idx];
        let p = entconc::config::bundled(name).unwrap();
        let base = solve_maxent(&p.system).unwrap();
        // blend a random positive vector toward an interior point so it stays feasible
        let interior = entconc::maxent::strictly_feasible_point(&p.system).unwrap();
        let m = interior.len();
        let s: f64 = w.iter().take(m).sum::<f64>() + (m.saturating_sub(13)) as f64 * 0.5;
        let rnd: Vec<f64> = (0..m).map(|i| w.get(i).copied().unwrap_or(0.5) / s).collect();
        let start: Vec<f64> = interior.iter().zip(&rnd).map(|(a, b)| 0.999 * a + 0.001 * b).collect();
        let opts = SolverOptions { start: Some(start), ..SolverOptions::default() };
        let other = solve_maxent_with(&p.system, &opts).unwrap();
        let diff = base.phi_star.iter().zip(&other.phi_star).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-8, "{} differs by {}", name, diff);
    }

    /// Adding a row never raises H*.
    #[test]
    fn more_constraints_lower_entropy(row in prop::collection::vec(-3.0f64..3.0, 6), frac in 0.1f64..0.9) {
        let d = solved("die_mean");
        // right side between the row's extremes over the feasible set: take it at a known feasible point
        let feasible = [0.1, 0.1, 0.1, 0.1, 0.2, 0.4];
        let uniform_val: f64 = row.iter().sum::<f64>() / 6.0;
        let at_feasible: f64 = row.iter().zip(feasible).map(|(a, b)| a * b).sum();
        let rhs = frac * at_feasible + (1.0 - frac) * uniform_val;
        prop_assume!(rhs.abs() > 1e-3);
        let tighter = d.system.clone().with_inequalities(vec![row], vec![rhs]).unwrap();
        if let Ok(s) = solve_maxent(&tighter) {
            prop_assert!(s.h_star <= d.solution.h_star + 1e-10);
        }
    }

    #[test]
    fn dp_agrees_with_enumeration(
        m in 2usize..=4,
        n in 0u64..=60,
        a in prop::collection::vec(-4i64..=4, 8),
        b in -3i64..=6,
        eq in any::<bool>(),
    ) {
        let rows = vec![
            IntRow { a: a[..m].to_vec(), b, op: if eq { RowOp::Eq } else { RowOp::Le } },
            IntRow { a: a[4..4 + m].to_vec(), b: b.abs(), op: RowOp::Le },
        ];
        let sys = IntegerSystem::new(m, rows).unwrap();
        let dp = count_lattice_points(&sys, n, 1_000_000).unwrap();
        let en = count_by_enumeration(&sys, n, 1_000_000).unwrap();
        prop_assert_eq!(dp.count, en.count);
    }
}

/// φ* has the largest entropy of every exactly feasible frequency vector.
#[test]
fn solver_beats_every_feasible_vector() {
    for cs in [ConstraintSystem::unconstrained(4).unwrap(), small_mean_system()] {
        let s = solve_maxent(&cs).unwrap();
        let delta = entconc::ToleranceSpec::from_values(1e-9, 1e-9, 1e-9, 1e-9).unwrap();
        let member = entconc::constraints::Membership::new(&cs, &delta).unwrap();
        for n in 1..=40 {
            for_each_composition(cs.m(), n, 1_000_000, |nu| {
                if member.contains_counts(nu, n) {
                    let f: Vec<f64> = nu.iter().map(|&v| v as f64 / n as f64).collect();
                    assert!(entropy_f64(&f) <= s.h_star + 1e-12);
                }
            })
            .unwrap();
        }
    }
}

/// The norm/entropy implications over every f ∈ F_n, m = 3, n ≤ 60, for
/// the uniform φ*; for a constrained φ* the far-set clause is checked on
/// the exactly feasible vectors, the others on all of F_n.
#[test]
fn bridges_over_the_full_sweep() {
    let u = [1.0 / 3.0; 3];
    let hu = 3f64.ln();
    let cs = small_mean_system();
    let s = solve_maxent(&cs).unwrap();
    let mut checked = 0u64;
    for n in 1..=60u64 {
        for_each_composition(3, n, 1_000_000, |nu| {
            let f: Vec<f64> = nu.iter().map(|&v| v as f64 / n as f64).collect();
            let feasible = (nu[0] + 2 * nu[1] + 3 * nu[2]) * 5 == 11 * n;
            for eta in [0.02, 0.05, 0.1] {
                for theta in [0.05, 0.1, 0.2, 0.3, 0.5] {
                    let r = entropy_norm_bridges(&u, hu, &f, eta, theta).unwrap();
                    assert!(r.all_hold(), "uniform {nu:?} η={eta} ϑ={theta}: {r:?}");
                    let r = entropy_norm_bridges(&s.phi_star, s.h_star, &f, eta, theta).unwrap();
                    assert_ne!(r.linf_entropy, Some(false), "{nu:?}");
                    assert_ne!(r.eta_implication, Some(false), "{nu:?}");
                    assert_ne!(r.l1_near, Some(false), "{nu:?}");
                    if feasible {
                        assert_ne!(r.l1_far, Some(false), "{nu:?}");
                    }
                    checked += 1;
                }
            }
        })
        .unwrap();
    }
    assert!(checked > 400_000);
}
