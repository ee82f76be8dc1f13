use std::fmt;

/// One named pass/fail measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// Passes when `value ≤ tol`.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        let passed = value <= tol;
        let op = if passed { "<=" } else { ">" };
        Self::new(name, passed, format!("{value:.3e} {op} {tol:.0e}"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Name of the first failing check, if any.
pub fn first_failure(checks: &[Check]) -> Option<&str> {
    checks.iter().find(|c| !c.passed).map(|c| c.name.as_str())
}
