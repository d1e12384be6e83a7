//! Summative fairness measures over per-group error rates.
//!
//! Each measure is split into an α-free decomposition ([`Terms`]: the
//! FMR-side term A and the FNMR-side term B) and an aggregation step that
//! applies the risk weight. Sweeps compute the decomposition once per record
//! and re-aggregate it for every α.

mod gini;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::model::{GroupRates, RateKind};
use crate::Scalar;

pub use gini::{gini, merge_counts};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("risk weight alpha = {0} outside [0, 1]")]
    InvalidAlpha(f64),
    #[error("{kind} is 0 for group `{group}`; the inequity rate is incalculable")]
    ZeroRate { group: String, kind: RateKind },
    #[error("gini needs at least 2 values, got {0}")]
    TooFewValues(usize),
    #[error("value at index {index} is negative")]
    NegativeValue { index: usize },
    #[error("value at index {index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

impl Serialize for MetricError {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Risk weight α on FMR differentials; the FNMR weight is always `1 - α`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct RiskWeight<T>(T);

impl<T: Scalar> RiskWeight<T> {
    pub fn new(alpha: T) -> Result<Self, MetricError> {
        if alpha >= T::zero() && alpha <= T::one() {
            Ok(Self(alpha))
        } else {
            Err(MetricError::InvalidAlpha(
                alpha.to_f64().unwrap_or(f64::NAN),
            ))
        }
    }

    pub fn balanced() -> Self {
        Self(T::lit(0.5))
    }

    pub fn alpha(self) -> T {
        self.0
    }

    pub fn beta(self) -> T {
        T::one() - self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Measure {
    #[serde(rename = "FDR")]
    Fdr,
    #[serde(rename = "IR")]
    Ir,
    #[serde(rename = "GARBE")]
    Garbe,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Fdr, Measure::Ir, Measure::Garbe];

    /// Analytic range of the measure, `None` when unbounded.
    pub fn theoretical_bounds(self) -> Option<(f64, f64)> {
        match self {
            Measure::Fdr | Measure::Garbe => Some((0.0, 1.0)),
            Measure::Ir => None,
        }
    }

    /// The value a perfectly fair record attains.
    pub fn fair_value(self) -> f64 {
        match self {
            Measure::Fdr | Measure::Ir => 1.0,
            Measure::Garbe => 0.0,
        }
    }

    pub fn higher_is_fairer(self) -> bool {
        matches!(self, Measure::Fdr)
    }

    /// The α-independent part of the measure.
    pub fn decompose<T: Scalar>(self, rates: &GroupRates<T>) -> Result<Terms<T>, MetricError> {
        let (term_a, term_b) = match self {
            Measure::Fdr => (spread(rates.fmr()), spread(rates.fnmr())),
            Measure::Ir => (
                max_min_ratio(rates, RateKind::Fmr)?,
                max_min_ratio(rates, RateKind::Fnmr)?,
            ),
            Measure::Garbe => (gini(rates.fmr())?, gini(rates.fnmr())?),
        };
        Ok(Terms {
            measure: self,
            term_a,
            term_b,
        })
    }

    pub fn evaluate<T: Scalar>(
        self,
        rates: &GroupRates<T>,
        w: RiskWeight<T>,
    ) -> Result<MeasureResult<T>, MetricError> {
        Ok(self.decompose(rates)?.aggregate(w))
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::Fdr => "FDR",
            Measure::Ir => "IR",
            Measure::Garbe => "GARBE",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fdr" => Ok(Measure::Fdr),
            "ir" | "inequity" => Ok(Measure::Ir),
            "garbe" => Ok(Measure::Garbe),
            other => Err(format!(
                "unknown measure `{other}` (expected fdr, ir or garbe)"
            )),
        }
    }
}

/// α-free decomposition of a measure: A is the FMR-side term, B the FNMR side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Terms<T> {
    pub measure: Measure,
    pub term_a: T,
    pub term_b: T,
}

impl<T: Scalar> Terms<T> {
    pub fn value(&self, w: RiskWeight<T>) -> T {
        let (a, b) = (self.term_a, self.term_b);
        match self.measure {
            Measure::Fdr => {
                let v = T::one() - (w.alpha() * a + w.beta() * b);
                v.max(T::zero()).min(T::one())
            }
            Measure::Ir => a.powf(w.alpha()) * b.powf(w.beta()),
            Measure::Garbe => (w.alpha() * a + w.beta() * b).min(T::one()),
        }
    }

    /// Share of the α-weighted term in the aggregated differential.
    ///
    /// Additive measures use `αA / (αA + (1-α)B)`; the inequity rate is
    /// multiplicative and uses the same share in log space. Zero when both
    /// weighted parts vanish.
    pub fn contribution_a(&self, w: RiskWeight<T>) -> T {
        let (a, b) = match self.measure {
            Measure::Fdr | Measure::Garbe => (self.term_a, self.term_b),
            Measure::Ir => (self.term_a.ln(), self.term_b.ln()),
        };
        let weighted_a = w.alpha() * a;
        let denom = weighted_a + w.beta() * b;
        if denom > T::zero() {
            (weighted_a / denom).max(T::zero()).min(T::one())
        } else {
            T::zero()
        }
    }

    pub fn aggregate(&self, w: RiskWeight<T>) -> MeasureResult<T> {
        MeasureResult {
            measure: self.measure,
            alpha: w,
            value: self.value(w),
            term_a: self.term_a,
            term_b: self.term_b,
            contribution_a: self.contribution_a(w),
        }
    }
}

/// A measure value with its decomposition at one risk weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureResult<T> {
    pub measure: Measure,
    pub alpha: RiskWeight<T>,
    pub value: T,
    pub term_a: T,
    pub term_b: T,
    pub contribution_a: T,
}

/// Largest pairwise absolute difference, i.e. `max - min`.
fn spread<T: Scalar>(values: &[T]) -> T {
    let (lo, hi) = min_max(values);
    hi - lo
}

fn min_max<T: Scalar>(values: &[T]) -> (T, T) {
    values
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

fn max_min_ratio<T: Scalar>(rates: &GroupRates<T>, kind: RateKind) -> Result<T, MetricError> {
    let values = rates.rates(kind);
    if let Some(i) = values.iter().position(|&v| v == T::zero()) {
        return Err(MetricError::ZeroRate {
            group: rates.groups()[i].to_string(),
            kind,
        });
    }
    let (lo, hi) = min_max(values);
    Ok(hi / lo)
}

/// Fairness Discrepancy Rate: `1 - (α·A + (1-α)·B)` with A, B the largest
/// between-group FMR and FNMR differences. 1 is fair, 0 maximally unfair.
pub fn fdr<T: Scalar>(rates: &GroupRates<T>, w: RiskWeight<T>) -> MeasureResult<T> {
    Measure::Fdr
        .evaluate(rates, w)
        .expect("FDR is total on valid rates")
}

/// Inequity Rate: `A^α · B^(1-α)` with A, B the max/min ratios of FMR and
/// FNMR. 1 is fair; unbounded above; undefined when any group has a zero rate.
pub fn inequity_rate<T: Scalar>(
    rates: &GroupRates<T>,
    w: RiskWeight<T>,
) -> Result<MeasureResult<T>, MetricError> {
    Measure::Ir.evaluate(rates, w)
}

/// Gini Aggregation Rate for Biometric Equitability: `α·G(FMR) + (1-α)·G(FNMR)`
/// with `G` the corrected Gini coefficient. 0 is fair, 1 maximally unfair.
pub fn garbe<T: Scalar>(rates: &GroupRates<T>, w: RiskWeight<T>) -> MeasureResult<T> {
    Measure::Garbe
        .evaluate(rates, w)
        .expect("GARBE is total on valid rates")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rates(fmr: [f64; 2], fnmr: [f64; 2]) -> GroupRates<f64> {
        GroupRates::new([("a", fmr[0], fnmr[0]), ("b", fmr[1], fnmr[1])]).unwrap()
    }

    fn half() -> RiskWeight<f64> {
        RiskWeight::new(0.5).unwrap()
    }

    #[test]
    fn risk_weight_range() {
        assert!(RiskWeight::new(-0.01).is_err());
        assert!(RiskWeight::new(1.01).is_err());
        assert!(RiskWeight::new(f64::NAN).is_err());
        let w = RiskWeight::new(0.25).unwrap();
        assert_eq!(w.beta(), 0.75);
    }

    #[test]
    fn fdr_examples() {
        let fair = fdr(&rates([0.01, 0.01], [0.02, 0.02]), half());
        assert_eq!(fair.value, 1.0);
        assert_eq!(fair.contribution_a, 0.0);

        let r = fdr(&rates([0.01, 0.02], [0.02, 0.04]), half());
        assert!((r.term_a - 0.01).abs() < 1e-15);
        assert!((r.term_b - 0.02).abs() < 1e-15);
        assert!((r.value - 0.985).abs() < 1e-12);
        assert!((r.contribution_a - 1.0 / 3.0).abs() < 1e-12);

        for alpha in [0.0, 0.3, 1.0] {
            let worst = fdr(
                &rates([0.0, 1.0], [0.0, 1.0]),
                RiskWeight::new(alpha).unwrap(),
            );
            assert_eq!(worst.value, 0.0);
        }
    }

    #[test]
    fn ir_examples() {
        let fair = inequity_rate(
            &rates([0.01, 0.01], [0.02, 0.02]),
            RiskWeight::new(0.7).unwrap(),
        )
        .unwrap();
        assert_eq!(fair.value, 1.0);
        assert_eq!(fair.contribution_a, 0.0);

        let r = inequity_rate(&rates([0.01, 0.02], [0.02, 0.04]), half()).unwrap();
        assert!((r.term_a - 2.0).abs() < 1e-12);
        assert!((r.term_b - 2.0).abs() < 1e-12);
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!((r.contribution_a - 0.5).abs() < 1e-12);

        let err = inequity_rate(&rates([0.01, 0.02], [0.0, 0.01]), half()).unwrap_err();
        assert_eq!(
            err,
            MetricError::ZeroRate {
                group: "a".into(),
                kind: RateKind::Fnmr
            }
        );
    }

    #[test]
    fn garbe_examples() {
        assert_eq!(
            garbe(
                &rates([0.01, 0.01], [0.02, 0.02]),
                RiskWeight::new(0.3).unwrap()
            )
            .value,
            0.0
        );

        let r = garbe(&rates([0.01, 0.02], [0.02, 0.04]), half());
        assert!((r.term_a - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.term_b - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);

        let three =
            GroupRates::new([("a", 1e-5, 0.01), ("b", 3e-5, 0.02), ("c", 2e-5, 0.05)]).unwrap();
        let at_zero = garbe(&three, RiskWeight::new(0.0).unwrap());
        assert_eq!(at_zero.value, gini(three.fnmr()).unwrap());
    }

    #[test]
    fn zero_probe_is_fine_for_additive_measures() {
        let probe = rates([0.0, 1e-4], [0.03, 0.0]);
        assert!(fdr(&probe, half()).value <= 1.0);
        assert!(garbe(&probe, half()).value <= 1.0);
        assert!(inequity_rate(&probe, half()).is_err());
    }

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert!("gini".parse::<Measure>().is_err());
    }
}
