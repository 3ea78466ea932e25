use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

/// Exact rational as numerator/denominator strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatString {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RatString {
    fn from(x: &BigRational) -> Self {
        Self {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }
}

pub(crate) fn ser_rat<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    RatString::from(x).serialize(s)
}

/// One checked property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    /// Informational records never fail the report.
    pub required: bool,
    /// Parameters of the instance, e.g. `n`, `k`, `r`.
    pub params: BTreeMap<String, String>,
    /// Exact values backing the verdict.
    pub exact: BTreeMap<String, RatString>,
    /// Floating-point values reported for reference only.
    pub approx: BTreeMap<String, f64>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            passed,
            required: true,
            params: BTreeMap::new(),
            exact: BTreeMap::new(),
            approx: BTreeMap::new(),
        }
    }

    pub fn informational(mut self) -> Self {
        self.required = false;
        self
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn exact(mut self, key: &str, value: &BigRational) -> Self {
        self.exact.insert(key.to_string(), value.into());
        self
    }

    pub fn approx(mut self, key: &str, value: f64) -> Self {
        self.approx.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CertificationReport {
    pub checks: Vec<CheckRecord>,
    /// `(N, k, measured phd)` per constructed inner dual.
    pub measured_phd: Vec<(usize, usize, usize)>,
    pub all_passed: bool,
}

impl CertificationReport {
    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    pub fn finish(mut self) -> Self {
        self.all_passed = self.checks.iter().all(|c| c.passed || !c.required);
        self
    }
}
