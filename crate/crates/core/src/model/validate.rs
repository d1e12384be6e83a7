//! Data criteria checks (C.1 to C.5). Validation never fails; it reports.

use std::fmt;

use serde::Serialize;

use super::{Dataset, RateKind};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionCheck {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    /// Records (or record pairs) that violate the criterion.
    pub offenders: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationWarning {
    pub algorithm: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub criteria: Vec<CriterionCheck>,
    pub record_count: usize,
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    /// True when the structural criteria C.1 to C.4 all hold.
    pub fn structural_ok(&self) -> bool {
        self.criteria
            .iter()
            .filter(|c| c.id != "C.5")
            .all(|c| c.passed)
    }

    /// C.5 with a caller-chosen minimum number of algorithms.
    pub fn is_representative(&self, min_records: usize) -> bool {
        self.record_count >= min_records
    }

    pub fn criterion(&self, id: &str) -> Option<&CriterionCheck> {
        self.criteria.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{} {mark}  {}: {}", c.id, c.description, c.detail)?;
            for o in &c.offenders {
                writeln!(f, "      offending: {o}")?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "warning [{}]: {}", w.algorithm, w.message)?;
        }
        Ok(())
    }
}

fn rate_check<T: Scalar>(d: &Dataset<T>, kind: RateKind) -> (bool, Vec<String>) {
    let offenders: Vec<String> = d
        .records()
        .iter()
        .filter(|r| {
            !r.rates()
                .rates(kind)
                .iter()
                .all(|&v| v.is_finite() && v >= T::zero() && v <= T::one())
        })
        .map(|r| r.name().to_owned())
        .collect();
    (offenders.is_empty(), offenders)
}

pub fn validate<T: Scalar>(d: &Dataset<T>) -> ValidationReport {
    let mut criteria = Vec::with_capacity(5);

    let (ok, offenders) = rate_check(d, RateKind::Fmr);
    criteria.push(CriterionCheck {
        id: "C.1",
        description: "false match rates",
        passed: ok && !d.is_empty(),
        detail: format!(
            "{} record(s) with a complete FMR vector",
            d.len() - offenders.len()
        ),
        offenders,
    });
    let (ok, offenders) = rate_check(d, RateKind::Fnmr);
    criteria.push(CriterionCheck {
        id: "C.2",
        description: "false non-match rates",
        passed: ok && !d.is_empty(),
        detail: format!(
            "{} record(s) with a complete FNMR vector",
            d.len() - offenders.len()
        ),
        offenders,
    });
    // A record holds exactly one rate set, so a single threshold is structural.
    criteria.push(CriterionCheck {
        id: "C.3",
        description: "C.1 and C.2 at a single threshold per algorithm",
        passed: true,
        offenders: Vec::new(),
        detail: "one rate set per record".into(),
    });

    let mut offenders = Vec::new();
    if let Some(first) = d.records().first() {
        let mut reference: Vec<&str> = first.rates().groups().iter().map(|g| g.as_str()).collect();
        reference.sort_unstable();
        for r in &d.records()[1..] {
            let mut labels: Vec<&str> = r.rates().groups().iter().map(|g| g.as_str()).collect();
            labels.sort_unstable();
            if labels != reference {
                offenders.push(format!("{} vs {}", first.name(), r.name()));
            }
        }
    }
    criteria.push(CriterionCheck {
        id: "C.4",
        description: "C.1 and C.2 disaggregated by demographic group",
        passed: offenders.is_empty(),
        detail: format!("groups: [{}]", d.group_labels().join(", ")),
        offenders,
    });
    criteria.push(CriterionCheck {
        id: "C.5",
        description: "C.1 to C.4 across a representative number of algorithms",
        passed: !d.is_empty(),
        offenders: Vec::new(),
        detail: format!("{} algorithm(s)", d.len()),
    });

    let mut warnings = Vec::new();
    for r in d.records() {
        for (g, a, b) in r.rates().iter() {
            for (kind, v) in [(RateKind::Fmr, a), (RateKind::Fnmr, b)] {
                if v == T::zero() {
                    warnings.push(ValidationWarning {
                        algorithm: r.name().to_owned(),
                        message: format!(
                            "IR incalculable for this record: {kind} = 0 for group `{g}`"
                        ),
                    });
                }
            }
        }
    }

    ValidationReport {
        criteria,
        record_count: d.len(),
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AlgorithmRecord, GroupRates};

    fn rec(name: &str, groups: [&str; 2], fnmr0: f64) -> AlgorithmRecord<f64> {
        AlgorithmRecord::new(
            name,
            GroupRates::new([(groups[0], 1e-4, fnmr0), (groups[1], 2e-4, 0.03)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn well_formed_passes() {
        let d = Dataset::new(vec![
            rec("a", ["x", "y"], 0.02),
            rec("b", ["x", "y"], 0.02),
            rec("c", ["y", "x"], 0.02),
        ])
        .unwrap();
        let rep = validate(&d);
        assert!(rep.structural_ok());
        assert_eq!(rep.record_count, 3);
        assert!(rep.warnings.is_empty());
        assert!(rep.criterion("C.5").unwrap().detail.contains('3'));
    }

    #[test]
    fn zero_fnmr_warns() {
        let d = Dataset::new(vec![rec("a", ["x", "y"], 0.0)]).unwrap();
        let rep = validate(&d);
        assert!(rep.structural_ok());
        assert_eq!(rep.warnings.len(), 1);
        assert_eq!(rep.warnings[0].algorithm, "a");
        assert!(rep.warnings[0]
            .message
            .contains("IR incalculable for this record"));
    }

    #[test]
    fn mismatched_groups_fail_c4() {
        let d = Dataset::new(vec![
            rec("first", ["x", "y"], 0.02),
            rec("second", ["x", "z"], 0.02),
        ])
        .unwrap();
        let rep = validate(&d);
        assert!(!rep.structural_ok());
        let c4 = rep.criterion("C.4").unwrap();
        assert!(!c4.passed);
        assert_eq!(c4.offenders, vec!["first vs second".to_string()]);
    }

    #[test]
    fn empty_dataset_fails() {
        let rep = validate(&Dataset::<f64>::new(Vec::new()).unwrap());
        assert!(!rep.structural_ok());
        assert!(!rep.criterion("C.1").unwrap().passed);
    }
}
