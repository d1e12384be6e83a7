//! Functional Fairness Measure Criteria scorecard.
//!
//! * FFMC.1: the α-term contribution crosses one half inside a band of
//!   ordinary risk weights (median over the dataset, default band [0.2, 0.8]).
//! * FFMC.2: the measure has declared finite analytic bounds.
//! * FFMC.3: the measure evaluates on a synthetic record holding one
//!   zero-FNMR group and one zero-FMR group.

use serde::Serialize;

use super::{default_grid, sweep, AuditError, Statistic};
use crate::metrics::{Measure, RiskWeight};
use crate::model::GroupRates;
use crate::{Dataset, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct FfmcConfig<T> {
    pub band: (f64, f64),
    pub level: f64,
    pub statistic: Statistic,
    pub grid: Vec<RiskWeight<T>>,
}

impl<T: Scalar> Default for FfmcConfig<T> {
    fn default() -> Self {
        Self {
            band: (0.2, 0.8),
            level: 0.5,
            statistic: Statistic::Median,
            grid: default_grid(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FfmcReport {
    pub measure: Measure,
    pub ffmc1: Verdict,
    /// Crossover α found on the grid, if any.
    pub crossover: Option<f64>,
    pub ffmc2: Verdict,
    pub bounds: Option<(f64, f64)>,
    pub ffmc3: Verdict,
    pub notes: Vec<String>,
}

impl FfmcReport {
    pub fn verdicts(&self) -> [bool; 3] {
        [self.ffmc1.passed, self.ffmc2.passed, self.ffmc3.passed]
    }
}

/// Record with a zero-FNMR group and a zero-FMR group.
pub fn zero_probe<T: Scalar>() -> GroupRates<T> {
    GroupRates::new([
        ("zero-fnmr", T::lit(1e-4), T::zero()),
        ("zero-fmr", T::zero(), T::lit(0.03)),
        ("reference", T::lit(2e-4), T::lit(0.02)),
    ])
    .expect("probe rates are valid")
}

pub fn ffmc_audit<T: Scalar>(d: &Dataset<T>, measure: Measure) -> Result<FfmcReport, AuditError> {
    ffmc_audit_with(d, measure, &FfmcConfig::default())
}

pub fn ffmc_audit_with<T: Scalar>(
    d: &Dataset<T>,
    measure: Measure,
    cfg: &FfmcConfig<T>,
) -> Result<FfmcReport, AuditError> {
    let s = sweep(d, measure, &cfg.grid)?;
    let mut notes = Vec::new();
    if !s.incalculable.is_empty() {
        notes.push(format!(
            "{} of {} record(s) incalculable and excluded",
            s.incalculable.len(),
            d.len()
        ));
    }

    let crossover = s
        .crossover(cfg.statistic, T::lit(cfg.level))
        .and_then(|w| w.alpha().to_f64());
    let (lo, hi) = cfg.band;
    let stat = match cfg.statistic {
        Statistic::Median => "median",
        Statistic::Mean => "mean",
    };
    let ffmc1 = match crossover {
        Some(x) => Verdict {
            passed: x >= lo - 1e-12 && x <= hi + 1e-12,
            detail: format!(
                "{stat} contribution of the alpha term reaches {} at alpha = {x:.2} (band [{lo}, {hi}])",
                cfg.level
            ),
        },
        None => Verdict {
            passed: false,
            detail: format!("{stat} contribution of the alpha term never reaches {} on the grid", cfg.level),
        },
    };

    let bounds = measure.theoretical_bounds();
    let ffmc2 = Verdict {
        passed: bounds.is_some(),
        detail: match bounds {
            Some((a, b)) => format!("bounded in [{a}, {b}], fair at {}", measure.fair_value()),
            None => format!("unbounded above, fair at {}", measure.fair_value()),
        },
    };

    let probe = zero_probe::<T>();
    let ffmc3 = match measure.evaluate(&probe, RiskWeight::balanced()) {
        Ok(r) if r.value.is_finite() => Verdict {
            passed: true,
            detail: format!("zero-rate probe evaluates to {}", r.value),
        },
        Ok(r) => Verdict {
            passed: false,
            detail: format!("zero-rate probe evaluates to non-finite {}", r.value),
        },
        Err(e) => Verdict {
            passed: false,
            detail: format!("zero-rate probe fails: {e}"),
        },
    };

    Ok(FfmcReport {
        measure,
        ffmc1,
        crossover,
        ffmc2,
        bounds,
        ffmc3,
        notes,
    })
}
