//! Shared fixtures for the benchmarks.

use entconc::{config, solve_maxent, ConstraintSystem, MaxEntSolution, ToleranceSpec};

pub struct Fixture {
    pub name: &'static str,
    pub system: ConstraintSystem,
    pub tolerances: ToleranceSpec,
    pub solution: MaxEntSolution,
}

/// Every bundled problem, solved once.
pub fn fixtures() -> Vec<Fixture> {
    config::bundled_names()
        .map(|name| {
            let p = config::bundled(name).expect("bundled problem parses");
            let solution = solve_maxent(&p.system).expect("bundled problem solves");
            Fixture { name, system: p.system, tolerances: p.tolerances, solution }
        })
        .collect()
}

pub fn fixture(name: &str) -> Fixture {
    fixtures().into_iter().find(|f| f.name == name).expect("known fixture")
}
