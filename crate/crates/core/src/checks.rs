//! Machine-readable outcomes of invariant checks.

use serde::Serialize;

use crate::fim::MultiIndex;

/// One failed comparison: where, which homological index, and both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckViolation {
    pub degree: Vec<usize>,
    pub index: Option<usize>,
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
}

impl CheckViolation {
    pub fn new(degree: &MultiIndex, index: Option<usize>, relation: &str, lhs: impl ToString, rhs: impl ToString) -> Self {
        CheckViolation {
            degree: degree.coords().to_vec(),
            index,
            relation: relation.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOutcome {
    pub degrees_tested: usize,
    pub violations: Vec<CheckViolation>,
}

impl CheckOutcome {
    pub fn merge(&mut self, other: CheckOutcome) {
        self.degrees_tested += other.degrees_tested;
        self.violations.extend(other.violations);
    }

    pub fn report(self, check: &str, seed: u64) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            instance_seed: seed,
            degrees_tested: self.degrees_tested,
            violations: self.violations,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    #[serde(rename = "instance-seed")]
    pub instance_seed: u64,
    #[serde(rename = "degrees-tested")]
    pub degrees_tested: usize,
    pub violations: Vec<CheckViolation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
