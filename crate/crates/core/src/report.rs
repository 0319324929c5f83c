//! Shared JSON verification-report schema.

use serde::{Deserialize, Serialize};

use crate::exact::Poly;

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One named check. For exact identities `residual` is the number of
/// surviving terms of the difference polynomial; for numerical checks it is
/// the measured quantity compared against the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl Check {
    /// Passes iff `difference` is the zero polynomial.
    pub fn identity(name: impl Into<String>, difference: &Poly) -> Check {
        let ok = difference.is_zero();
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Some(difference.num_terms() as f64),
            witness: (!ok).then(|| difference.to_canonical_text()),
        }
    }

    /// Passes iff every polynomial is zero; the witness is the first survivor.
    pub fn identities<'a>(name: impl Into<String>, diffs: impl IntoIterator<Item = &'a Poly>) -> Check {
        let mut terms = 0usize;
        let mut witness = None;
        for d in diffs {
            terms += d.num_terms();
            if witness.is_none() && !d.is_zero() {
                witness = Some(d.to_canonical_text());
            }
        }
        Check {
            name: name.into(),
            status: if witness.is_none() { Status::Pass } else { Status::Fail },
            residual: Some(terms as f64),
            witness,
        }
    }

    /// Passes iff `value <= threshold` (and `value` is finite).
    pub fn bound(name: impl Into<String>, value: f64, threshold: f64) -> Check {
        let ok = value.is_finite() && value <= threshold;
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Some(value),
            witness: (!ok).then(|| format!("{value:e} exceeds {threshold:e}")),
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Check {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Some(if ok { 0.0 } else { 1.0 }),
            witness: (!ok).then(witness),
        }
    }

    pub fn skip(name: impl Into<String>, note: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::Skip,
            residual: None,
            witness: Some(note.into()),
        }
    }

    pub fn error(name: impl Into<String>, err: &crate::Error) -> Check {
        Check {
            name: name.into(),
            status: Status::Fail,
            residual: None,
            witness: Some(err.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub package_version: String,
    pub target_os: String,
    pub target_arch: String,
}

impl Default for Environment {
    fn default() -> Self {
        Environment {
            package: env!("CARGO_PKG_NAME").to_string(),
            package_version: env!("CARGO_PKG_VERSION").to_string(),
            target_os: std::env::consts::OS.to_string(),
            target_arch: std::env::consts::ARCH.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub environment: Environment,
}

impl Report {
    pub fn new(seed: Option<u64>, checks: Vec<Check>) -> Report {
        Report {
            version: REPORT_VERSION.to_string(),
            seed,
            checks,
            environment: Environment::default(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}
