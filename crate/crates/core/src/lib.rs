//! Demographic fairness auditing for biometric matchers.
//!
//! The crate takes per-group false match and false non-match rates measured at
//! one operating threshold per algorithm, and provides:
//!
//! * [`model`]: the rate data model, wide/long CSV ingestion and data checks;
//! * [`metrics`]: the Fairness Discrepancy Rate, the Inequity Rate, the
//!   small-sample corrected Gini coefficient and GARBE;
//! * [`audit`]: risk-weight sweeps, distribution statistics, crossover
//!   detection and the FFMC interpretability scorecard;
//! * [`pareto`]: accuracy/fairness trade-space classification and frontier
//!   down-selection.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases below fix the common `f64` instantiation; [`Exact`] is the
//! rational type accepted by [`metrics::gini`].

pub mod audit;
pub mod metrics;
pub mod model;
pub mod pareto;
mod scalar;

pub use scalar::Scalar;

pub use audit::{FfmcConfig, FfmcReport, Histogram, Statistic, SweepResult};
pub use metrics::{Measure, MeasureResult, MetricError, RiskWeight, Terms};
pub use model::{
    AlgorithmRecord, Dataset, DemographicGroup, FmrScale, GroupRates, ModelError, ValidationReport,
    WideLayout,
};
pub use pareto::{Classification, Frontier, ParetoPoint};

/// Exact rational scalar; usable with [`metrics::gini`] for closed-form checks.
pub type Exact = num_rational::Ratio<i64>;

pub type GroupRates64 = GroupRates<f64>;
pub type AlgorithmRecord64 = AlgorithmRecord<f64>;
pub type Dataset64 = Dataset<f64>;
pub type RiskWeight64 = RiskWeight<f64>;
pub type MeasureResult64 = MeasureResult<f64>;
pub type SweepResult64 = SweepResult<f64>;
pub type Frontier64 = Frontier<f64>;

pub type GroupRates32 = GroupRates<f32>;
pub type Dataset32 = Dataset<f32>;
pub type RiskWeight32 = RiskWeight<f32>;
pub type MeasureResult32 = MeasureResult<f32>;
