//! The published rule catalogue.

use crate::diagnostic::Severity;

pub const E_REQ: &str = "E-REQ";
pub const E_18W: &str = "E-18W";
pub const E_UC_DUP: &str = "E-UC-DUP";
pub const E_UC_REF: &str = "E-UC-REF";
pub const W_LIM_METRIC: &str = "W-LIM-METRIC";
pub const E_CARRIER_REF: &str = "E-CARRIER-REF";
pub const E_DOC_REF: &str = "E-DOC-REF";
pub const E_FMEA_COVERAGE: &str = "E-FMEA-COVERAGE";
pub const E_RPN: &str = "E-RPN";
pub const E_UNIT_DIM: &str = "E-UNIT-DIM";
pub const W_FUND_LIMIT: &str = "W-FUND-LIMIT";
pub const W_BENCH: &str = "W-BENCH";
pub const E_EFF_RANGE: &str = "E-EFF-RANGE";
pub const W_FACTORS_ML: &str = "W-FACTORS-ML";
pub const W_ENV: &str = "W-ENV";
pub const E_EXT: &str = "E-EXT";
pub const E_DUP_ID: &str = "E-DUP-ID";
pub const E_ENV_BOUNDS: &str = "E-ENV-BOUNDS";

pub const P_SYNTAX: &str = "P-SYNTAX";
pub const P_SHAPE: &str = "P-SHAPE";
pub const P_QUANTITY: &str = "P-QUANTITY";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleStage {
    /// Reported while reading the document.
    Parse,
    /// Reported by [`lint`](super::lint) on a parsed card.
    Content,
}

#[derive(Debug, Clone, Copy)]
pub struct Rule {
    pub id: &'static str,
    pub severity: Severity,
    pub stage: RuleStage,
    pub summary: &'static str,
}

const fn rule(id: &'static str, severity: Severity, summary: &'static str) -> Rule {
    Rule { id, severity, stage: RuleStage::Content, summary }
}

const fn parse_rule(id: &'static str, summary: &'static str) -> Rule {
    Rule { id, severity: Severity::Error, stage: RuleStage::Parse, summary }
}

use Severity::{Error, Warning};

pub const CATALOGUE: &[Rule] = &[
    rule(E_REQ, Error, "a mandatory field is empty"),
    rule(E_18W, Error, "a purpose or use-case statement exceeds the word limit"),
    rule(E_UC_DUP, Error, "use-case ids are repeated or not strictly ascending"),
    rule(E_UC_REF, Error, "a metric or limitation references an undeclared use case or limitation"),
    rule(W_LIM_METRIC, Warning, "a limitation is not addressed by any performance metric"),
    rule(E_CARRIER_REF, Error, "a reference names a carrier that is not declared"),
    rule(E_DOC_REF, Error, "a referenced supporting document is not listed in the entity details"),
    rule(E_FMEA_COVERAGE, Error, "a carrier lacks an FMEA row at the entity or system level"),
    rule(E_RPN, Error, "a stored risk priority number disagrees with its scores or a score is outside 1..10"),
    rule(E_UNIT_DIM, Error, "a quantity's dimension disagrees with the declared unit"),
    rule(W_FUND_LIMIT, Warning, "a metric does not state its fundamental limit"),
    rule(W_BENCH, Warning, "a metric lists no benchmarks"),
    rule(E_EFF_RANGE, Error, "a detector efficiency lies outside [0, 1]"),
    rule(W_FACTORS_ML, Warning, "factors are listed although no machine-learning components are present"),
    rule(W_ENV, Warning, "the operational environment is empty"),
    rule(E_EXT, Error, "a field outside the x- extension namespace is not part of the schema"),
    rule(E_DUP_ID, Error, "an identifier that must be unique is repeated"),
    rule(E_ENV_BOUNDS, Error, "an environmental lower bound exceeds its upper bound"),
    parse_rule(P_SYNTAX, "the document is not well-formed JSON"),
    parse_rule(P_SHAPE, "a field is missing or has the wrong type"),
    parse_rule(P_QUANTITY, "a quantity or unit string does not parse"),
];

pub fn find_rule(id: &str) -> Option<&'static Rule> {
    CATALOGUE.iter().find(|r| r.id == id)
}

/// Severity a finding is reported with before configuration is applied.
pub fn default_severity(id: &str) -> Severity {
    find_rule(id).map_or(Severity::Error, |r| r.severity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_prefixed_by_severity() {
        let mut ids: Vec<_> = CATALOGUE.iter().map(|r| r.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CATALOGUE.len());
        for r in CATALOGUE.iter().filter(|r| r.stage == RuleStage::Content) {
            let expected = if r.id.starts_with('W') { Severity::Warning } else { Severity::Error };
            assert_eq!(r.severity, expected, "{}", r.id);
        }
    }
}
