//! Count-based scores and exact rational helpers.
//!
//! Metric values are computed as exact fractions and rounded to `f64`
//! once, so results do not depend on document or cluster iteration order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `n / d` with `0/0` (or any zero denominator) defined as 0.
pub fn ratio(n: u64, d: u64) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

pub(crate) fn rational(n: u64, d: u64) -> BigRational {
    if d == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Harmonic mean with `0/0` defined as 0.
pub(crate) fn harmonic(p: &BigRational, r: &BigRational) -> BigRational {
    let sum = p + r;
    if sum.is_zero() {
        BigRational::zero()
    } else {
        (p * r * BigInt::from(2)) / sum
    }
}

/// Sum of fractions `numerator / denominator`, accumulated per distinct
/// denominator so the total stays exact.
#[derive(Debug, Clone, Default)]
pub(crate) struct FractionSum(BTreeMap<u64, u64>);

impl FractionSum {
    pub fn add(&mut self, numerator: u64, denominator: u64) {
        if numerator > 0 {
            *self.0.entry(denominator).or_default() += numerator;
        }
    }

    pub fn value(&self) -> BigRational {
        self.0
            .iter()
            .fold(BigRational::zero(), |acc, (&d, &n)| acc + rational(n, d))
    }
}

/// Precision, recall and F1.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricTriple {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MetricTriple {
    pub(crate) fn from_rationals(p: &BigRational, r: &BigRational) -> Self {
        MetricTriple {
            precision: to_f64(p),
            recall: to_f64(r),
            f1: to_f64(&harmonic(p, r)),
        }
    }
}

/// True/false positive and false negative counts for one class (or pooled).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl Counts {
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// Equal to the harmonic mean of precision and recall.
    pub fn f1(&self) -> f64 {
        ratio(2 * self.tp, 2 * self.tp + self.fp + self.fn_)
    }

    pub(crate) fn f1_exact(&self) -> BigRational {
        rational(2 * self.tp, 2 * self.tp + self.fp + self.fn_)
    }
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, rhs: Self) {
        self.tp += rhs.tp;
        self.fp += rhs.fp;
        self.fn_ += rhs.fn_;
    }
}

/// Per-class score row.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassScore {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold-side count for the class (mentions or links, by mode).
    pub support: u64,
}

impl ClassScore {
    pub fn from_counts(counts: Counts, support: u64) -> Self {
        ClassScore {
            tp: counts.tp,
            fp: counts.fp,
            fn_: counts.fn_,
            precision: counts.precision(),
            recall: counts.recall(),
            f1: counts.f1(),
            support,
        }
    }

    pub fn counts(&self) -> Counts {
        Counts {
            tp: self.tp,
            fp: self.fp,
            fn_: self.fn_,
        }
    }
}
