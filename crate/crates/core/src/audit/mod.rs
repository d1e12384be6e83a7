//! Dataset-level analysis of a fairness measure.
//!
//! [`sweep`] evaluates a measure for every (record, α) cell of a grid and
//! summarises each α column; [`crossover_alpha`] finds where the α-weighted
//! term starts to dominate; [`distribution`] bins values at one α; and
//! [`ffmc_audit`] scores a measure against the three interpretability
//! criteria.

mod ffmc;
mod stats;

use serde::Serialize;
use thiserror::Error;

use crate::metrics::{Measure, MetricError, RiskWeight, Terms};
use crate::model::Dataset;
use crate::Scalar;

pub use ffmc::{ffmc_audit, ffmc_audit_with, zero_probe, FfmcConfig, FfmcReport, Verdict};
pub use stats::{quantile_sorted, Summary};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditError {
    #[error("dataset has no records")]
    EmptyDataset,
    #[error("invalid alpha grid: {0}")]
    InvalidGrid(String),
    #[error("{0} is incalculable for every record")]
    AllIncalculable(Measure),
    #[error("histogram needs at least one bin")]
    ZeroBins,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Inclusive grid `start, start+step, ..., stop`.
///
/// Points are rounded to 12 decimals so that e.g. `0:1:0.01` yields exactly
/// the decimal values 0.00, 0.01, ..., 1.00.
pub fn alpha_grid<T: Scalar>(
    start: f64,
    stop: f64,
    step: f64,
) -> Result<Vec<RiskWeight<T>>, AuditError> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(AuditError::InvalidGrid("non-finite bound".into()));
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) || start > stop {
        return Err(AuditError::InvalidGrid(format!(
            "need 0 <= start <= stop <= 1, got {start}:{stop}"
        )));
    }
    if step <= 0.0 {
        return Err(AuditError::InvalidGrid(format!(
            "step must be positive, got {step}"
        )));
    }
    let span = stop - start;
    let steps = (span / step + 1e-9).floor() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let v = ((start + k as f64 * step) * 1e12).round() / 1e12;
        out.push(v.min(stop));
    }
    grid_from_values(&out)
}

/// Parses `start:stop:step`.
pub fn parse_grid<T: Scalar>(spec: &str) -> Result<Vec<RiskWeight<T>>, AuditError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(AuditError::InvalidGrid(format!(
            "`{spec}` is not start:stop:step"
        )));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| AuditError::InvalidGrid(format!("`{s}` is not a number")))
    };
    alpha_grid(num(a)?, num(b)?, num(c)?)
}

/// 0.00 to 1.00 in steps of 0.01.
pub fn default_grid<T: Scalar>() -> Vec<RiskWeight<T>> {
    alpha_grid(0.0, 1.0, 0.01).expect("static grid")
}

pub fn grid_from_values<T: Scalar>(values: &[f64]) -> Result<Vec<RiskWeight<T>>, AuditError> {
    if values.is_empty() {
        return Err(AuditError::InvalidGrid("empty grid".into()));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AuditError::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }
    values
        .iter()
        .map(|&v| RiskWeight::new(T::lit(v)).map_err(|e| AuditError::InvalidGrid(e.to_string())))
        .collect()
}

/// Central tendency of the relative contribution of the α term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContributionStats<T> {
    pub mean: T,
    pub median: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Statistic {
    Median,
    Mean,
}

impl std::str::FromStr for Statistic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "median" => Ok(Statistic::Median),
            "mean" => Ok(Statistic::Mean),
            o => Err(format!("unknown statistic `{o}`")),
        }
    }
}

/// A measure evaluated over a dataset for every α of a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult<T> {
    pub measure: Measure,
    pub alphas: Vec<RiskWeight<T>>,
    pub records: Vec<String>,
    /// α-free decomposition per record; `None` when incalculable.
    pub terms: Vec<Option<Terms<T>>>,
    /// Record × α; `None` marks an incalculable cell.
    pub values: Vec<Vec<Option<T>>>,
    pub contributions: Vec<Vec<Option<T>>>,
    /// Per α, over calculable records.
    pub value_stats: Vec<Option<Summary<T>>>,
    pub contribution_stats: Vec<Option<ContributionStats<T>>>,
    pub incalculable: Vec<(String, MetricError)>,
}

impl<T: Scalar> SweepResult<T> {
    pub fn column(&self, alpha_index: usize) -> impl Iterator<Item = T> + '_ {
        self.values.iter().filter_map(move |row| row[alpha_index])
    }

    pub fn contribution_column(&self, alpha_index: usize) -> impl Iterator<Item = T> + '_ {
        self.contributions
            .iter()
            .filter_map(move |row| row[alpha_index])
    }

    pub fn alpha_index(&self, alpha: T) -> Option<usize> {
        let tol = T::lit(1e-9);
        self.alphas
            .iter()
            .position(|w| (w.alpha() - alpha).abs() <= tol)
    }

    /// Largest value over the whole sweep with the α and record attaining it.
    pub fn max_value(&self) -> Option<(T, RiskWeight<T>, &str)> {
        let mut best: Option<(T, RiskWeight<T>, &str)> = None;
        for (r, row) in self.values.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                if let Some(v) = *v {
                    if best.is_none_or(|(b, _, _)| v > b) {
                        best = Some((v, self.alphas[k], &self.records[r]));
                    }
                }
            }
        }
        best
    }

    /// Summaries of the FMR-side and FNMR-side terms over calculable records.
    pub fn term_summaries(&self) -> (Option<Summary<T>>, Option<Summary<T>>) {
        let calc = || self.terms.iter().flatten();
        (
            Summary::of(calc().map(|t| t.term_a)),
            Summary::of(calc().map(|t| t.term_b)),
        )
    }

    /// Smallest grid α whose contribution statistic reaches `level`.
    pub fn crossover(&self, statistic: Statistic, level: T) -> Option<RiskWeight<T>> {
        self.alphas
            .iter()
            .zip(&self.contribution_stats)
            .find(|(_, s)| {
                s.is_some_and(|s| {
                    let v = match statistic {
                        Statistic::Median => s.median,
                        Statistic::Mean => s.mean,
                    };
                    v >= level
                })
            })
            .map(|(w, _)| *w)
    }
}

/// Evaluates `measure` for every record and every α of `grid`.
///
/// Records for which the measure is undefined (zero rates under the inequity
/// rate) are kept as incalculable rows and excluded from the statistics.
pub fn sweep<T: Scalar>(
    d: &Dataset<T>,
    measure: Measure,
    grid: &[RiskWeight<T>],
) -> Result<SweepResult<T>, AuditError> {
    if d.is_empty() {
        return Err(AuditError::EmptyDataset);
    }
    if grid.is_empty() {
        return Err(AuditError::InvalidGrid("empty grid".into()));
    }
    if grid.windows(2).any(|w| w[0].alpha() >= w[1].alpha()) {
        return Err(AuditError::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }

    let mut terms = Vec::with_capacity(d.len());
    let mut incalculable = Vec::new();
    for r in d.records() {
        match measure.decompose(r.rates()) {
            Ok(t) => terms.push(Some(t)),
            Err(e) => {
                incalculable.push((r.name().to_owned(), e));
                terms.push(None);
            }
        }
    }
    let values: Vec<Vec<Option<T>>> = terms
        .iter()
        .map(|t| grid.iter().map(|&w| t.map(|t| t.value(w))).collect())
        .collect();
    let contributions: Vec<Vec<Option<T>>> = terms
        .iter()
        .map(|t| {
            grid.iter()
                .map(|&w| t.map(|t| t.contribution_a(w)))
                .collect()
        })
        .collect();

    let mut result = SweepResult {
        measure,
        alphas: grid.to_vec(),
        records: d.records().iter().map(|r| r.name().to_owned()).collect(),
        terms,
        values,
        contributions,
        value_stats: Vec::with_capacity(grid.len()),
        contribution_stats: Vec::with_capacity(grid.len()),
        incalculable,
    };
    for k in 0..grid.len() {
        let vs = Summary::of(result.column(k));
        let cs = Summary::of(result.contribution_column(k)).map(|s| ContributionStats {
            mean: s.mean,
            median: s.median,
        });
        result.value_stats.push(vs);
        result.contribution_stats.push(cs);
    }
    Ok(result)
}

/// Smallest α on `grid` at which the chosen statistic of the α-term
/// contribution reaches `level`; `None` if it never does.
pub fn crossover_alpha<T: Scalar>(
    d: &Dataset<T>,
    measure: Measure,
    statistic: Statistic,
    level: T,
    grid: &[RiskWeight<T>],
) -> Result<Option<RiskWeight<T>>, AuditError> {
    Ok(sweep(d, measure, grid)?.crossover(statistic, level))
}

/// Equal-width histogram of measure values at one α.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram<T> {
    pub measure: Measure,
    pub alpha: RiskWeight<T>,
    /// `counts.len() + 1` edges from the observed minimum to the maximum.
    pub edges: Vec<T>,
    pub counts: Vec<usize>,
    /// Calculable values, ascending.
    pub values: Vec<T>,
    pub excluded: Vec<String>,
}

impl<T: Scalar> Histogram<T> {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn min(&self) -> T {
        self.values[0]
    }

    pub fn max(&self) -> T {
        self.values[self.values.len() - 1]
    }

    /// Share of values inside the closed interval `[lo, hi]`.
    pub fn fraction_within(&self, lo: T, hi: T) -> T {
        let inside = self.values.iter().filter(|&&v| v >= lo && v <= hi).count();
        T::from_count(inside) / T::from_count(self.values.len())
    }
}

/// Bins the measure values at α into `bins` equal-width bins spanning the
/// observed range. A degenerate range collapses to a single bin.
pub fn distribution<T: Scalar>(
    d: &Dataset<T>,
    measure: Measure,
    alpha: RiskWeight<T>,
    bins: usize,
) -> Result<Histogram<T>, AuditError> {
    if bins == 0 {
        return Err(AuditError::ZeroBins);
    }
    if d.is_empty() {
        return Err(AuditError::EmptyDataset);
    }
    let mut values = Vec::with_capacity(d.len());
    let mut excluded = Vec::new();
    for r in d.records() {
        match measure.evaluate(r.rates(), alpha) {
            Ok(m) => values.push(m.value),
            Err(_) => excluded.push(r.name().to_owned()),
        }
    }
    if values.is_empty() {
        return Err(AuditError::AllIncalculable(measure));
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite measure values"));
    let (lo, hi) = (values[0], values[values.len() - 1]);
    let bins = if hi > lo { bins } else { 1 };
    let width = (hi - lo) / T::from_count(bins);
    let edges = (0..=bins)
        .map(|i| {
            if i == bins {
                hi
            } else {
                lo + width * T::from_count(i)
            }
        })
        .collect();
    let mut counts = vec![0usize; bins];
    for &v in &values {
        let idx = if hi > lo {
            ((v - lo) / width)
                .floor()
                .to_usize()
                .unwrap_or(0)
                .min(bins - 1)
        } else {
            0
        };
        counts[idx] += 1;
    }
    Ok(Histogram {
        measure,
        alpha,
        edges,
        counts,
        values,
        excluded,
    })
}
