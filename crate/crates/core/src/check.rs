//! Named pass/fail records shared by every certificate.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The statement the check decides.
    pub anchor: String,
    pub result: bool,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: &str, anchor: &str, result: bool, witness: Option<String>) -> Self {
        Check {
            name: name.to_string(),
            anchor: anchor.to_string(),
            result,
            witness,
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.result)
}

/// First failing check, if any.
pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| !c.result)
}
