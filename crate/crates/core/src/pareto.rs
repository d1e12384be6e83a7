//! Accuracy/fairness trade space.
//!
//! Both objectives are minimised: total FNMR for accuracy, and for fairness
//! the measure value (GARBE, IR) or `1 - FDR`. A point is *efficient* when no
//! other point is at least as good in both objectives and strictly better in
//! one; *weakly efficient* when it is not efficient but no other point is
//! strictly better in both; *dominated* otherwise.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::metrics::{Measure, MetricError, RiskWeight};
use crate::model::{AlgorithmRecord, Dataset};
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParetoError {
    #[error("point {index} has a non-finite objective")]
    NonFinite { index: usize },
    #[error("no points to classify")]
    Empty,
    #[error("no record is calculable under {0}")]
    NoCalculable(Measure),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Efficient,
    WeaklyEfficient,
    Dominated,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Efficient => "efficient",
            Classification::WeaklyEfficient => "weakly_efficient",
            Classification::Dominated => "dominated",
        }
    }
}

/// Mated-count weighted mean FNMR, or the plain mean over groups when the
/// record carries no counts.
pub fn total_fnmr<T: Scalar>(r: &AlgorithmRecord<T>) -> T {
    let fnmr = r.rates().fnmr();
    match r.mated_counts() {
        Some(counts) => {
            let (num, den) =
                fnmr.iter()
                    .zip(counts)
                    .fold((T::zero(), T::zero()), |(n, d), (&v, &c)| {
                        let c = T::from_u64(c).expect("count representable");
                        (n + c * v, d + c)
                    });
            num / den
        }
        None => fnmr.iter().fold(T::zero(), |acc, &v| acc + v) / T::from_count(fnmr.len()),
    }
}

/// Classifies `(accuracy, fairness)` pairs, both minimised.
///
/// Sort-and-scan, O(n log n). Exact duplicates of an efficient point are
/// all efficient.
pub fn classify<T: Scalar>(points: &[(T, T)]) -> Result<Vec<Classification>, ParetoError> {
    if points.is_empty() {
        return Err(ParetoError::Empty);
    }
    if let Some(index) = points
        .iter()
        .position(|(x, y)| !(x.is_finite() && y.is_finite()))
    {
        return Err(ParetoError::NonFinite { index });
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (points[i], points[j]);
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
    });

    let mut out = vec![Classification::Dominated; points.len()];
    // Lowest fairness value among points with strictly smaller accuracy.
    let mut best_before = T::infinity();
    let mut start = 0;
    while start < order.len() {
        let x = points[order[start]].0;
        let mut end = start;
        while end < order.len() && points[order[end]].0 == x {
            end += 1;
        }
        // Within a run of equal accuracy, the first entry has the lowest fairness.
        let group_min = points[order[start]].1;
        for &i in &order[start..end] {
            let y = points[i].1;
            out[i] = if y == group_min && group_min < best_before {
                Classification::Efficient
            } else if best_before >= y {
                Classification::WeaklyEfficient
            } else {
                Classification::Dominated
            };
        }
        best_before = best_before.min(group_min);
        start = end;
    }
    Ok(out)
}

/// Flags points that are strictly smaller than every other point in both
/// objectives at once (at most one point can qualify).
pub fn strictly_minimal<T: Scalar>(points: &[(T, T)]) -> Vec<bool> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            points
                .iter()
                .enumerate()
                .all(|(j, q)| i == j || (p.0 < q.0 && p.1 < q.1))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoPoint<T> {
    pub algorithm: String,
    pub objective_accuracy: T,
    pub objective_fairness: T,
    /// The raw measure value (differs from the objective only for FDR).
    pub measure_value: T,
    pub classification: Classification,
    pub strictly_minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frontier<T> {
    pub measure: Measure,
    pub alpha: RiskWeight<T>,
    /// Every calculable point, in input order.
    pub points: Vec<ParetoPoint<T>>,
    /// Efficient points by ascending accuracy objective (ties by fairness, then name).
    pub efficient: Vec<ParetoPoint<T>>,
    pub excluded: Vec<(String, MetricError)>,
}

impl<T: Scalar> Frontier<T> {
    pub fn count(&self, c: Classification) -> usize {
        self.points.iter().filter(|p| p.classification == c).count()
    }

    /// Fraction of candidates kept by the down-select, `|efficient| / |total|`.
    pub fn kept_ratio(&self) -> f64 {
        self.efficient.len() as f64 / self.points.len() as f64
    }

    /// Efficient points with accuracy objective below `max_fnmr`.
    pub fn inset(&self, max_fnmr: T) -> Vec<&ParetoPoint<T>> {
        self.efficient
            .iter()
            .filter(|p| p.objective_accuracy < max_fnmr)
            .collect()
    }

    pub fn point(&self, algorithm: &str) -> Option<&ParetoPoint<T>> {
        self.points.iter().find(|p| p.algorithm == algorithm)
    }
}

/// Builds the trade space `(total_fnmr, fairness objective)` for every
/// calculable record and extracts the efficient set.
pub fn frontier<T: Scalar>(
    d: &Dataset<T>,
    measure: Measure,
    alpha: RiskWeight<T>,
) -> Result<Frontier<T>, ParetoError> {
    let mut names = Vec::with_capacity(d.len());
    let mut coords = Vec::with_capacity(d.len());
    let mut values = Vec::with_capacity(d.len());
    let mut excluded = Vec::new();
    for r in d.records() {
        match measure.evaluate(r.rates(), alpha) {
            Ok(m) => {
                let fairness = if measure.higher_is_fairer() {
                    T::one() - m.value
                } else {
                    m.value
                };
                names.push(r.name().to_owned());
                coords.push((total_fnmr(r), fairness));
                values.push(m.value);
            }
            Err(e) => excluded.push((r.name().to_owned(), e)),
        }
    }
    if coords.is_empty() {
        return Err(ParetoError::NoCalculable(measure));
    }
    let classes = classify(&coords)?;
    let minimal = strictly_minimal(&coords);
    let points: Vec<ParetoPoint<T>> = names
        .into_iter()
        .zip(coords)
        .zip(values)
        .zip(classes.into_iter().zip(minimal))
        .map(|(((algorithm, (x, y)), v), (c, m))| ParetoPoint {
            algorithm,
            objective_accuracy: x,
            objective_fairness: y,
            measure_value: v,
            classification: c,
            strictly_minimal: m,
        })
        .collect();
    let mut efficient: Vec<ParetoPoint<T>> = points
        .iter()
        .filter(|p| p.classification == Classification::Efficient)
        .cloned()
        .collect();
    efficient.sort_by(|a, b| {
        a.objective_accuracy
            .partial_cmp(&b.objective_accuracy)
            .unwrap_or(Ordering::Equal)
            .then(
                a.objective_fairness
                    .partial_cmp(&b.objective_fairness)
                    .unwrap_or(Ordering::Equal),
            )
            .then_with(|| a.algorithm.cmp(&b.algorithm))
    });
    Ok(Frontier {
        measure,
        alpha,
        points,
        efficient,
        excluded,
    })
}
