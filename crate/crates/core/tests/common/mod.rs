#![allow(dead_code)]

use entconc::{config, solve_maxent, ConstraintSystem, MaxEntSolution, ToleranceSpec};

pub struct Solved {
    pub system: ConstraintSystem,
    pub tolerances: ToleranceSpec,
    pub solution: MaxEntSolution,
}

pub fn solved(name: &str) -> Solved {
    let p = config::bundled(name).unwrap();
    let solution = solve_maxent(&p.system).unwrap();
    Solved { system: p.system, tolerances: p.tolerances, solution }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// The three-category die used by the small exhaustive checks, with a
/// mean constraint of 2.2 on faces (1, 2, 3).
pub fn small_mean_system() -> ConstraintSystem {
    ConstraintSystem::unconstrained(3)
        .unwrap()
        .with_equalities(vec![vec![1.0, 2.0, 3.0]], vec![2.2])
        .unwrap()
}
