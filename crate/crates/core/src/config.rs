//! The JSON problem format shared by the library and the CLI.
//!
//! ```json
//! {"m": 6,
//!  "equalities":       {"A": [[1,2,3,4,5,6]], "b": [4.5]},
//!  "inequalities":     {"A": [], "b": []},
//!  "zero_equalities":  {"A": []},
//!  "zero_inequalities":{"A": []},
//!  "tolerances": {"eq": 0.00467, "ineq": null, "eq0": null, "ineq0": null}}
//! ```
//!
//! A tolerance of `null` is unbounded; a tolerance key that is absent is
//! missing, which is an error once the matching category has rows.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

use crate::constraints::{ConstraintSystem, Tolerance, ToleranceSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct RhsBlock {
    #[serde(rename = "A", default)]
    a: Vec<Vec<f64>>,
    #[serde(default)]
    b: Vec<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct ZeroBlock {
    #[serde(rename = "A", default)]
    a: Vec<Vec<f64>>,
}

// Distinguishes an absent key (outer None) from an explicit null (Some(None)).
fn present<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Option<f64>>, D::Error> {
    Option::<f64>::deserialize(d).map(Some)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct TolerancesRepr {
    #[serde(default, deserialize_with = "present", skip_serializing_if = "Option::is_none")]
    eq: Option<Option<f64>>,
    #[serde(default, deserialize_with = "present", skip_serializing_if = "Option::is_none")]
    ineq: Option<Option<f64>>,
    #[serde(default, deserialize_with = "present", skip_serializing_if = "Option::is_none")]
    eq0: Option<Option<f64>>,
    #[serde(default, deserialize_with = "present", skip_serializing_if = "Option::is_none")]
    ineq0: Option<Option<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ProblemRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    m: usize,
    #[serde(default)]
    equalities: RhsBlock,
    #[serde(default)]
    inequalities: RhsBlock,
    #[serde(default)]
    zero_equalities: ZeroBlock,
    #[serde(default)]
    zero_inequalities: ZeroBlock,
    #[serde(default)]
    tolerances: TolerancesRepr,
}

/// A constraint system together with its tolerances.
#[derive(Clone, Debug)]
pub struct Problem {
    pub name: Option<String>,
    pub system: ConstraintSystem,
    pub tolerances: ToleranceSpec,
}

fn to_tolerance(v: Option<Option<f64>>, key: &str) -> Result<Option<Tolerance>> {
    match v {
        None => Ok(None),
        Some(None) => Ok(Some(Tolerance::Unbounded)),
        Some(Some(x)) if x > 0.0 && x.is_finite() => Ok(Some(Tolerance::Value(x))),
        Some(Some(x)) => Err(Error::Config(format!("tolerance {key} must be positive, got {x}"))),
    }
}

fn from_tolerance(t: Option<Tolerance>) -> Option<Option<f64>> {
    t.map(|t| match t {
        Tolerance::Value(v) => Some(v),
        Tolerance::Unbounded => None,
    })
}

impl Problem {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let r: ProblemRepr = serde_json::from_str(s)?;
        let system = ConstraintSystem::new(
            r.m,
            (r.equalities.a, r.equalities.b),
            (r.inequalities.a, r.inequalities.b),
            r.zero_equalities.a,
            r.zero_inequalities.a,
        )?;
        let tolerances = ToleranceSpec {
            eq: to_tolerance(r.tolerances.eq, "eq")?,
            ineq: to_tolerance(r.tolerances.ineq, "ineq")?,
            eq0: to_tolerance(r.tolerances.eq0, "eq0")?,
            ineq0: to_tolerance(r.tolerances.ineq0, "ineq0")?,
        };
        // fail early on a nonempty category without a tolerance
        tolerances.resolve(&system)?;
        Ok(Problem { name: r.name, system, tolerances })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Self::from_json_str(&s)
    }

    pub fn to_json(&self) -> Result<String> {
        use crate::constraints::Category;
        let cs = &self.system;
        let rhs = |c: Category| {
            let (a, b) = cs.block(c);
            RhsBlock { a: a.to_vec(), b }
        };
        let repr = ProblemRepr {
            name: self.name.clone(),
            m: cs.m(),
            equalities: rhs(Category::Eq),
            inequalities: rhs(Category::Ineq),
            zero_equalities: ZeroBlock { a: cs.rows(Category::Eq0).to_vec() },
            zero_inequalities: ZeroBlock { a: cs.rows(Category::Ineq0).to_vec() },
            tolerances: TolerancesRepr {
                eq: from_tolerance(self.tolerances.eq),
                ineq: from_tolerance(self.tolerances.ineq),
                eq0: from_tolerance(self.tolerances.eq0),
                ineq0: from_tolerance(self.tolerances.ineq0),
            },
        };
        Ok(serde_json::to_string_pretty(&repr)?)
    }
}

const BUNDLED: [(&str, &str); 5] = [
    ("die_unconstrained", include_str!("../problems/die_unconstrained.json")),
    ("die_mean", include_str!("../problems/die_mean.json")),
    ("traffic", include_str!("../problems/traffic.json")),
    ("queue_mean", include_str!("../problems/queue_mean.json")),
    ("queue_bounded", include_str!("../problems/queue_bounded.json")),
];

/// Names of the example problems shipped with the library.
pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// One of the shipped example problems by name.
pub fn bundled(name: &str) -> Result<Problem> {
    let (_, src) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Config(format!("no bundled problem named {name:?}")))?;
    Problem::from_json_str(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_problems_load() {
        for name in bundled_names() {
            let p = bundled(name).unwrap();
            assert_eq!(p.name.as_deref(), Some(name));
        }
    }

    #[test]
    fn absent_vs_null_tolerance() {
        let src = r#"{"m": 2, "equalities": {"A": [[1, 2]], "b": [1.5]}, "tolerances": {}}"#;
        assert!(matches!(Problem::from_json_str(src), Err(Error::Config(_))));
        let src = r#"{"m": 2, "equalities": {"A": [[1, 2]], "b": [1.5]}, "tolerances": {"eq": null}}"#;
        let p = Problem::from_json_str(src).unwrap();
        assert_eq!(p.tolerances.eq, Some(Tolerance::Unbounded));
    }

    #[test]
    fn json_roundtrip() {
        let p = bundled("traffic").unwrap();
        let q = Problem::from_json_str(&p.to_json().unwrap()).unwrap();
        assert_eq!(p.system, q.system);
        assert_eq!(p.tolerances, q.tolerances);
    }
}
