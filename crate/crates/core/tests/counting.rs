use entconc::counting::{
    multinomial_count, realization_bounds_simple, realization_bounds_stirling, sanov_upper_bound,
    sum_inequality_check, LogScalar,
};
use entconc::oracle::{for_each_composition, DEFAULT_BUDGET};
use entconc::special::stirling_theta;
use entconc::FrequencyVector;

/// Exhaustive over m ≤ 4, n ≤ 60: both sandwiches bracket the exact count.
#[test]
fn sandwiches_bracket_every_count() {
    let mut vectors = 0u64;
    for m in 2..=4 {
        for n in 1..=60 {
            for_each_composition(m, n, DEFAULT_BUDGET, |nu| {
                let f = FrequencyVector::new(nu.to_vec()).unwrap();
                let exact = LogScalar::from_big(&multinomial_count(&f.counts())).ln();
                let slack = 1e-9 * exact.abs().max(1.0);
                let (lo, hi) = realization_bounds_simple(&f);
                assert!(lo.ln() <= exact + slack && exact <= hi.ln() + slack, "simple {nu:?}");
                let (lo, hi) = realization_bounds_stirling(&f);
                assert!(lo.ln() <= exact + slack && exact <= hi.ln() + slack, "stirling {nu:?}");
                vectors += 1;
            })
            .unwrap();
        }
    }
    assert!(vectors > 40_000);
}

#[test]
fn stirling_remainder_in_unit_interval() {
    for x in 1..=1000 {
        let t = stirling_theta(x as f64).unwrap();
        assert!(t > 0.0 && t < 1.0, "x = {x}: {t}");
    }
    for k in 0..100 {
        let x = 0.5 + k as f64;
        let t = stirling_theta(x).unwrap();
        assert!(t > 0.0 && t < 1.0, "x = {x}: {t}");
    }
}

#[test]
fn composition_sum_below_bound() {
    for mu in 2..=5 {
        for n in mu as u64..=150 {
            let (s, b) = sum_inequality_check(mu, n).unwrap();
            assert!(s < b, "μ={mu} n={n}: {s} ≥ {b}");
        }
    }
    let (s, b) = sum_inequality_check(3, 50).unwrap();
    assert!(s < b);
    assert!(sum_inequality_check(7, 10).is_err());
    assert!(sum_inequality_check(3, 301).is_err());
}

#[test]
fn sanov_die_bounds() {
    // independently: C(9547, 5) e^{9542·1.6135811} 6^{−9542}
    let (p, c) = sanov_upper_bound(6, 9542, 1.6135811).unwrap();
    assert!((p.log10() - (-720.5582)).abs() < 1e-3, "{}", p.log10());
    assert!((c.log10() - 6704.5610).abs() < 1e-3, "{}", c.log10());
}
