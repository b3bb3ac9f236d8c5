//! Threshold reading of "most", "small" and "very small".
//!
//! The arithmetic is generic over the scalar so that the same gate runs on
//! `f64` or on exact rationals ([`ExactSizePolicy`](crate::ExactSizePolicy)),
//! which avoids rounding at the threshold boundaries.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{ModelSet, Valuation};

/// Scalar usable as a size fraction.
pub trait Fraction: Num + PartialOrd + Copy + FromPrimitive + Debug + Display {}

impl<T> Fraction for T where T: Num + PartialOrd + Copy + FromPrimitive + Debug + Display {}

fn ratio<S: Fraction>(num: u32, den: u32) -> S {
    S::from_u32(num).expect("small integer") / S::from_u32(den).expect("small integer")
}

/// Thresholds for "most" (`most`), the exception union (`small`) and the
/// residual surprise set (`very_small`). Invariant:
/// `1/2 < most <= 1` and `0 <= very_small <= small < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizePolicy<S> {
    pub most: S,
    pub small: S,
    pub very_small: S,
}

impl<S: Fraction> SizePolicy<S> {
    pub fn new(most: S, small: S, very_small: S) -> Result<Self> {
        let half = ratio::<S>(1, 2);
        if !(most > half && most <= S::one()) {
            return Err(Error::InvalidSizePolicy(format!("most = {most} not in (1/2, 1]")));
        }
        if !(very_small >= S::zero() && very_small <= small && small < half) {
            return Err(Error::InvalidSizePolicy(format!(
                "need 0 <= very_small ({very_small}) <= small ({small}) < 1/2"
            )));
        }
        Ok(SizePolicy {
            most,
            small,
            very_small,
        })
    }

    /// `most = 7/10`, `small = 3/10`, `very_small = 1/20`.
    pub fn standard() -> Self {
        SizePolicy {
            most: ratio(7, 10),
            small: ratio(3, 10),
            very_small: ratio(1, 20),
        }
    }
}

impl<S: Fraction> Default for SizePolicy<S> {
    fn default() -> Self {
        Self::standard()
    }
}

/// How model sets are measured.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure<S> {
    /// Every valuation weighs one.
    Counting,
    /// Explicit weights; unlisted valuations weigh zero.
    Weighted(BTreeMap<Valuation, S>),
}

impl<S: Fraction> Measure<S> {
    pub fn of(&self, set: &ModelSet) -> S {
        match self {
            Measure::Counting => S::from_usize(set.len()).expect("count fits scalar"),
            Measure::Weighted(weights) => set
                .iter()
                .filter_map(|v| weights.get(&v).copied())
                .fold(S::zero(), |acc, w| acc + w),
        }
    }
}

/// The sets a default's size gate looks at: its scope `X`, the region `Y`
/// where it holds, and its declared exception sets.
#[derive(Debug, Clone, Copy)]
pub struct SizeSets<'a> {
    pub scope: &'a ModelSet,
    pub holds: &'a ModelSet,
    pub exceptions: &'a [ModelSet],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeViolation {
    ZeroMeasure,
    NotMost,
    ExceptionsTooLarge,
    SurpriseTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeVerdict {
    Pass,
    Fail(Vec<SizeViolation>),
    /// `X ∩ Y` is empty: no reading of "most" can hold.
    HardFail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeReport<S> {
    pub scope_measure: S,
    pub most_ratio: S,
    pub exception_ratio: S,
    pub surprise_ratio: S,
    pub verdict: SizeVerdict,
}

impl<S> SizeReport<S> {
    pub fn passed(&self) -> bool {
        self.verdict == SizeVerdict::Pass
    }
}

/// Checks `|X∩Y|/|X| >= most`, `|X_1 ∪ X_2 ∪ …|/|X| <= small` and that the
/// residual surprise set `X − Y − ⋃X_i` stays within `very_small`.
pub fn check_size_gate<S: Fraction>(
    sets: SizeSets<'_>,
    measure: &Measure<S>,
    policy: &SizePolicy<S>,
) -> SizeReport<S> {
    let scope = sets.scope;
    let inside = scope.intersection(sets.holds);
    let mut exceptions = ModelSet::empty(scope.width());
    for e in sets.exceptions {
        exceptions.union_with(&e.intersection(scope));
    }
    let surprise = scope.difference(sets.holds).difference(&exceptions);

    let total = measure.of(scope);
    let (most_ratio, exception_ratio, surprise_ratio) = if total == S::zero() {
        (S::zero(), S::zero(), S::zero())
    } else {
        (
            measure.of(&inside) / total,
            measure.of(&exceptions) / total,
            measure.of(&surprise) / total,
        )
    };

    let verdict = if inside.is_empty() {
        SizeVerdict::HardFail
    } else if total == S::zero() {
        SizeVerdict::Fail(vec![SizeViolation::ZeroMeasure])
    } else {
        let mut violations = Vec::new();
        if most_ratio < policy.most {
            violations.push(SizeViolation::NotMost);
        }
        if exception_ratio > policy.small {
            violations.push(SizeViolation::ExceptionsTooLarge);
        }
        if surprise_ratio > policy.very_small {
            violations.push(SizeViolation::SurpriseTooLarge);
        }
        if violations.is_empty() {
            SizeVerdict::Pass
        } else {
            SizeVerdict::Fail(violations)
        }
    };
    SizeReport {
        scope_measure: total,
        most_ratio,
        exception_ratio,
        surprise_ratio,
        verdict,
    }
}
