//! Disaggregated error-rate data: groups, per-algorithm rates, datasets.
//!
//! Every type here is immutable once built. Constructors enforce the
//! per-record invariants (unique group labels, identical FMR/FNMR key sets,
//! at least two groups, rates finite and within `[0, 1]`). Cross-record
//! consistency of the group sets is reported by [`validate`] rather than
//! rejected, so malformed corpora can still be inspected.

mod csv_io;
mod validate;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::Scalar;

pub use csv_io::{
    parse_counts_csv, parse_long_csv, parse_long_csv_scaled, parse_wide_csv,
    parse_wide_csv_with_layout, to_long_csv, to_wide_csv, WideLayout,
};
pub use validate::{validate, CriterionCheck, ValidationReport, ValidationWarning};

/// Which of the two error rates a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RateKind {
    Fmr,
    Fnmr,
}

impl fmt::Display for RateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RateKind::Fmr => "FMR",
            RateKind::Fnmr => "FNMR",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("empty demographic group label")]
    EmptyGroupLabel,
    #[error("duplicate demographic group `{0}`")]
    DuplicateGroup(String),
    #[error("FMR and FNMR are given for different group sets (`{0}` has no counterpart)")]
    GroupSetMismatch(String),
    #[error("need at least 2 demographic groups, found {0}")]
    TooFewGroups(usize),
    #[error("{kind} for group `{group}` is {value}, outside [0, 1]")]
    RateOutOfRange {
        group: String,
        kind: RateKind,
        value: f64,
    },
    #[error("mated counts must cover exactly the rate groups (offending group `{0}`)")]
    MatedCountGroups(String),
    #[error("mated count for group `{0}` must be at least 1")]
    ZeroMatedCount(String),
    #[error("empty algorithm name")]
    EmptyAlgorithmName,
    #[error("duplicate algorithm name `{0}`")]
    DuplicateAlgorithm(String),

    #[error("row {row}: expected {expected} cells, found {found}")]
    RaggedRow {
        row: u64,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column}: `{cell}` is not a number")]
    NonNumeric {
        row: u64,
        column: usize,
        cell: String,
    },
    #[error("row {row}, column {column}: rate {value} outside [0, 1]")]
    CellOutOfRange { row: u64, column: usize, value: f64 },
    #[error("row {row}: unrecognised row label `{label}`")]
    BadRowLabel { row: u64, label: String },
    #[error("row {row}: duplicate entry for algorithm `{algorithm}`, group `{group}`")]
    DuplicateRow {
        row: u64,
        algorithm: String,
        group: String,
    },
    #[error("no row for algorithm `{algorithm}`, group `{group}`")]
    MissingCell { algorithm: String, group: String },
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("input is empty")]
    EmptyInput,
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for ModelError {
    fn from(e: csv::Error) -> Self {
        ModelError::Csv(e.to_string())
    }
}

/// Demographic group label, compared by exact string equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DemographicGroup(String);

impl DemographicGroup {
    pub fn new(label: impl Into<String>) -> Result<Self, ModelError> {
        let label = label.into();
        if label.is_empty() {
            return Err(ModelError::EmptyGroupLabel);
        }
        Ok(Self(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DemographicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Encoding of FMR cells in an input file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FmrScale {
    #[default]
    Linear,
    /// Cells hold `log10(FMR)`; each value `v` is stored as `10^v`.
    Log10,
}

impl FmrScale {
    pub fn decode<T: Scalar>(self, cell: T) -> T {
        match self {
            FmrScale::Linear => cell,
            FmrScale::Log10 => T::lit(10.0).powf(cell),
        }
    }
}

impl FromStr for FmrScale {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(FmrScale::Linear),
            "log10" => Ok(FmrScale::Log10),
            other => Err(format!(
                "unknown FMR scale `{other}` (expected linear or log10)"
            )),
        }
    }
}

/// FMR and FNMR per demographic group at one algorithm's threshold.
///
/// Groups keep their input order; the three vectors are index-aligned.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupRates<T> {
    groups: Vec<DemographicGroup>,
    fmr: Vec<T>,
    fnmr: Vec<T>,
}

fn check_rate<T: Scalar>(group: &str, kind: RateKind, v: T) -> Result<(), ModelError> {
    if !(v.is_finite() && v >= T::zero() && v <= T::one()) {
        return Err(ModelError::RateOutOfRange {
            group: group.to_owned(),
            kind,
            value: v.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

impl<T: Scalar> GroupRates<T> {
    /// Builds rates from `(group, fmr, fnmr)` triples.
    pub fn new<I, S>(rows: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (S, T, T)>,
        S: Into<String>,
    {
        let mut groups = Vec::new();
        let mut fmr = Vec::new();
        let mut fnmr = Vec::new();
        let mut seen = HashSet::new();
        for (label, a, b) in rows {
            let group = DemographicGroup::new(label)?;
            if !seen.insert(group.clone()) {
                return Err(ModelError::DuplicateGroup(group.0));
            }
            check_rate(group.as_str(), RateKind::Fmr, a)?;
            check_rate(group.as_str(), RateKind::Fnmr, b)?;
            groups.push(group);
            fmr.push(a);
            fnmr.push(b);
        }
        if groups.len() < 2 {
            return Err(ModelError::TooFewGroups(groups.len()));
        }
        Ok(Self { groups, fmr, fnmr })
    }

    /// Builds rates from two keyed maps that must share one key set.
    /// Groups come out in key order.
    pub fn from_maps(
        fmr: &BTreeMap<String, T>,
        fnmr: &BTreeMap<String, T>,
    ) -> Result<Self, ModelError> {
        if let Some(k) = fmr.keys().find(|k| !fnmr.contains_key(*k)) {
            return Err(ModelError::GroupSetMismatch(k.clone()));
        }
        if let Some(k) = fnmr.keys().find(|k| !fmr.contains_key(*k)) {
            return Err(ModelError::GroupSetMismatch(k.clone()));
        }
        Self::new(fmr.iter().map(|(k, &a)| (k.clone(), a, fnmr[k])))
    }

    pub fn groups(&self) -> &[DemographicGroup] {
        &self.groups
    }

    pub fn fmr(&self) -> &[T] {
        &self.fmr
    }

    pub fn fnmr(&self) -> &[T] {
        &self.fnmr
    }

    pub fn rates(&self, kind: RateKind) -> &[T] {
        match kind {
            RateKind::Fmr => &self.fmr,
            RateKind::Fnmr => &self.fnmr,
        }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DemographicGroup, T, T)> + '_ {
        self.groups
            .iter()
            .zip(self.fmr.iter().zip(&self.fnmr))
            .map(|(g, (&a, &b))| (g, a, b))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.groups.iter().position(|g| g.as_str() == label)
    }

    /// Same rates with groups reordered: entry `i` of the result is entry
    /// `order[i]` of `self`.
    ///
    /// # Panics
    /// If `order` is not a permutation of `0..len`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len(), "order must be a permutation");
        let mut seen = vec![false; self.len()];
        for &i in order {
            assert!(
                !std::mem::replace(&mut seen[i], true),
                "order must be a permutation"
            );
        }
        Self {
            groups: order.iter().map(|&i| self.groups[i].clone()).collect(),
            fmr: order.iter().map(|&i| self.fmr[i]).collect(),
            fnmr: order.iter().map(|&i| self.fnmr[i]).collect(),
        }
    }

    /// Applies `f` to every rate of one kind, re-checking the range invariant.
    pub fn map_rates(&self, kind: RateKind, f: impl Fn(T) -> T) -> Result<Self, ModelError> {
        let mut out = self.clone();
        let target = match kind {
            RateKind::Fmr => &mut out.fmr,
            RateKind::Fnmr => &mut out.fnmr,
        };
        for (g, v) in self.groups.iter().zip(target.iter_mut()) {
            *v = f(*v);
            check_rate(g.as_str(), kind, *v)?;
        }
        Ok(out)
    }

    /// Whether every group shares one FMR and one FNMR.
    pub fn is_uniform(&self) -> bool {
        self.fmr.iter().all(|&v| v == self.fmr[0]) && self.fnmr.iter().all(|&v| v == self.fnmr[0])
    }
}

/// One algorithm's rates plus optional metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmRecord<T> {
    name: String,
    rates: GroupRates<T>,
    threshold_note: Option<String>,
    /// Aligned with `rates.groups()`.
    mated_counts: Option<Vec<u64>>,
}

impl<T: Scalar> AlgorithmRecord<T> {
    pub fn new(name: impl Into<String>, rates: GroupRates<T>) -> Result<Self, ModelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModelError::EmptyAlgorithmName);
        }
        Ok(Self {
            name,
            rates,
            threshold_note: None,
            mated_counts: None,
        })
    }

    pub fn with_threshold_note(mut self, note: impl Into<String>) -> Self {
        self.threshold_note = Some(note.into());
        self
    }

    /// Attaches mated-comparison counts keyed by group label. The key set
    /// must equal the rate groups and every count must be at least 1.
    pub fn with_mated_counts<I, S>(mut self, counts: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut aligned: Vec<Option<u64>> = vec![None; self.rates.len()];
        for (label, count) in counts {
            let label = label.as_ref();
            let idx = self
                .rates
                .index_of(label)
                .ok_or_else(|| ModelError::MatedCountGroups(label.to_owned()))?;
            if aligned[idx].is_some() {
                return Err(ModelError::DuplicateGroup(label.to_owned()));
            }
            if count == 0 {
                return Err(ModelError::ZeroMatedCount(label.to_owned()));
            }
            aligned[idx] = Some(count);
        }
        let counts = aligned
            .iter()
            .zip(self.rates.groups())
            .map(|(c, g)| c.ok_or_else(|| ModelError::MatedCountGroups(g.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        self.mated_counts = Some(counts);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rates(&self) -> &GroupRates<T> {
        &self.rates
    }

    pub fn threshold_note(&self) -> Option<&str> {
        self.threshold_note.as_deref()
    }

    /// Mated counts aligned with `rates().groups()`.
    pub fn mated_counts(&self) -> Option<&[u64]> {
        self.mated_counts.as_deref()
    }
}

/// Ordered collection of algorithm records with unique names.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Dataset<T> {
    records: Vec<AlgorithmRecord<T>>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(records: Vec<AlgorithmRecord<T>>) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        for r in &records {
            if !seen.insert(r.name.as_str()) {
                return Err(ModelError::DuplicateAlgorithm(r.name.clone()));
            }
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[AlgorithmRecord<T>] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&AlgorithmRecord<T>> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Group labels of the first record (all records share them in a valid dataset).
    pub fn group_labels(&self) -> Vec<&str> {
        self.records
            .first()
            .map(|r| {
                r.rates
                    .groups()
                    .iter()
                    .map(DemographicGroup::as_str)
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Applies one set of per-group mated counts to every record.
    pub fn with_global_counts(&self, counts: &[(String, u64)]) -> Result<Self, ModelError> {
        let records = self
            .records
            .iter()
            .cloned()
            .map(|r| r.with_mated_counts(counts.iter().map(|(g, c)| (g.as_str(), *c))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { records })
    }
}
