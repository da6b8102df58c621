use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A nonnegative quantity stored as its natural logarithm.
///
/// Zero is `ln = −∞`. Multiplication adds logs; addition is a log-sum-exp.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogScalar {
    ln: f64,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar { ln: f64::NEG_INFINITY };
    pub const ONE: LogScalar = LogScalar { ln: 0.0 };

    pub fn from_ln(ln: f64) -> Self {
        assert!(!ln.is_nan(), "LogScalar from NaN");
        LogScalar { ln }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0, "LogScalar needs a nonnegative value, got {x}");
        LogScalar { ln: x.ln() }
    }

    pub fn from_big(x: &BigUint) -> Self {
        LogScalar { ln: big_ln(x) }
    }

    pub fn ln(self) -> f64 {
        self.ln
    }

    pub fn log10(self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    pub fn is_zero(self) -> bool {
        self.ln == f64::NEG_INFINITY
    }

    /// The plain value; overflows to ∞ or underflows to 0 outside f64 range.
    pub fn value(self) -> f64 {
        self.ln.exp()
    }

    pub fn powf(self, p: f64) -> Self {
        if self.is_zero() {
            return if p == 0.0 { Self::ONE } else { Self::ZERO };
        }
        LogScalar { ln: self.ln * p }
    }

    pub fn add(self, other: LogScalar) -> Self {
        let (hi, lo) = if self.ln >= other.ln { (self.ln, other.ln) } else { (other.ln, self.ln) };
        if hi == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogScalar { ln: hi + (lo - hi).exp().ln_1p() }
    }

    /// Mantissa and decimal exponent, e.g. (7.88, −714).
    pub fn scientific(self) -> (f64, i64) {
        if self.is_zero() {
            return (0.0, 0);
        }
        let l = self.log10();
        let mut e = l.floor();
        let mut mant = 10f64.powf(l - e);
        if mant >= 9.999_999_5 {
            mant /= 10.0;
            e += 1.0;
        }
        (mant, e as i64)
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;
    fn mul(self, rhs: LogScalar) -> LogScalar {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        LogScalar { ln: self.ln + rhs.ln }
    }
}

impl Div for LogScalar {
    type Output = LogScalar;
    fn div(self, rhs: LogScalar) -> LogScalar {
        assert!(!rhs.is_zero(), "LogScalar division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        LogScalar { ln: self.ln - rhs.ln }
    }
}

impl PartialOrd for LogScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.ln.partial_cmp(&other.ln)
    }
}

impl std::iter::Sum for LogScalar {
    fn sum<I: Iterator<Item = LogScalar>>(iter: I) -> Self {
        iter.fold(LogScalar::ZERO, LogScalar::add)
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, e) = self.scientific();
        write!(f, "{m:.4}e{e}")
    }
}

#[derive(Serialize, Deserialize)]
struct Log10Repr {
    log10: Option<f64>,
}

impl Serialize for LogScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let log10 = if self.is_zero() { None } else { Some(self.log10()) };
        Log10Repr { log10 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LogScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = Log10Repr::deserialize(d)?;
        Ok(match r.log10 {
            None => LogScalar::ZERO,
            Some(l) => LogScalar::from_ln(l * std::f64::consts::LN_10),
        })
    }
}

/// Natural log of a big integer, accurate to double precision.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 128 {
        let v: u128 = x.try_into().unwrap();
        return (v as f64).ln();
    }
    let shift = bits - 64;
    let top: u64 = (x >> shift).try_into().unwrap();
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}
