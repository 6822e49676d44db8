use std::collections::BTreeMap;

use thiserror::Error;

use super::rules;
use crate::card_model::Statement18;
use crate::diagnostic::{Diagnostic, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeverityOverride {
    Error,
    Warning,
    Off,
}

impl std::str::FromStr for SeverityOverride {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "error" => Ok(SeverityOverride::Error),
            "warning" => Ok(SeverityOverride::Warning),
            "off" => Ok(SeverityOverride::Off),
            other => Err(format!("severity \"{other}\" is not one of error, warning, off")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("lint config references unknown rule \"{0}\"")]
    UnknownRuleInConfig(String),
    #[error("lint config is not a JSON object mapping rule ids to severities: {0}")]
    Malformed(String),
}

/// Per-rule severity overrides plus the statement word limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintConfig {
    pub overrides: BTreeMap<String, SeverityOverride>,
    pub word_limit: usize,
}

impl Default for LintConfig {
    fn default() -> Self {
        LintConfig { overrides: BTreeMap::new(), word_limit: Statement18::WORD_LIMIT }
    }
}

impl LintConfig {
    /// Reads `{"<rule id>": "error" | "warning" | "off", ...}`.
    pub fn from_json(bytes: &[u8]) -> Result<Self, ConfigError> {
        let raw: BTreeMap<String, String> =
            serde_json::from_slice(bytes).map_err(|e| ConfigError::Malformed(e.to_string()))?;
        let mut overrides = BTreeMap::new();
        for (rule, sev) in raw {
            let sev = sev.parse().map_err(ConfigError::Malformed)?;
            overrides.insert(rule, sev);
        }
        let config = LintConfig { overrides, ..LintConfig::default() };
        config.validate()?;
        Ok(config)
    }

    pub fn with_override(mut self, rule: &str, sev: SeverityOverride) -> Self {
        self.overrides.insert(rule.to_string(), sev);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.overrides.keys().find(|id| rules::find_rule(id).is_none()) {
            Some(id) => Err(ConfigError::UnknownRuleInConfig(id.clone())),
            None => Ok(()),
        }
    }

    /// Re-labels severities and drops findings whose rule is switched off.
    pub fn apply(&self, diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
        diags
            .into_iter()
            .filter_map(|mut d| match self.overrides.get(d.rule_id) {
                Some(SeverityOverride::Off) => None,
                Some(SeverityOverride::Error) => {
                    d.severity = Severity::Error;
                    Some(d)
                }
                Some(SeverityOverride::Warning) => {
                    d.severity = Severity::Warning;
                    Some(d)
                }
                None => Some(d),
            })
            .collect()
    }
}
