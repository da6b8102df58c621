//! Explicit entropy-concentration thresholds.
//!
//! Given linear constraints on the frequency vector of n assignments of
//! objects to m categories, this crate finds the maximum-entropy vector φ*,
//! rounds it to an integer count vector f*, and computes finite thresholds
//! N beyond which f* (or the near-φ* region) holds all but an ε fraction of
//! the constraint-satisfying assignments. An exact enumerator checks the
//! bounds on small instances.

pub mod bounds;
pub mod config;
pub mod constraints;
pub mod counting;
pub mod discretize;
pub mod error;
pub mod maxent;
pub mod oracle;
pub mod special;

pub use bounds::{
    compute_bound, compute_n_fstar_entropy, compute_n_fstar_norm, compute_n_pd,
    compute_n_theorem1, compute_n_theorem2, compute_n_uniform, jaynes_comparison, scan_alpha,
    ActiveBranch, AlphaScan, BoundKind, BoundReport, JaynesComparison, ValidityCheck,
};
pub use config::Problem;
pub use constraints::{theta_infinity, Category, ConstraintSystem, Tolerance, ToleranceSpec};
pub use counting::{BigCount, LogScalar};
pub use discretize::{round_to_counts, CountVector, FrequencyVector};
pub use error::{Error, Result};
pub use maxent::{solve_maxent, solve_maxent_with, MaxEntSolution, SolverOptions};
