//! Findings shared by the parser, the linter and the FMEA checks.

use std::fmt;

use serde::Serialize;

/// One step of a document path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathSegment {
    Key(String),
    Index(usize),
}

/// Root-to-leaf position inside a card document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceLocation {
    pub path: Vec<PathSegment>,
    pub byte_offset: Option<usize>,
}

impl SourceLocation {
    pub fn root() -> Self {
        SourceLocation::default()
    }

    pub fn key(&self, key: impl Into<String>) -> Self {
        let mut path = self.path.clone();
        path.push(PathSegment::Key(key.into()));
        SourceLocation { path, byte_offset: None }
    }

    pub fn index(&self, index: usize) -> Self {
        let mut path = self.path.clone();
        path.push(PathSegment::Index(index));
        SourceLocation { path, byte_offset: None }
    }

    /// Builds a location from `/`-separated literal keys; numeric segments
    /// become indices.
    pub fn at(path: &str) -> Self {
        let path = path
            .split('/')
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<usize>() {
                Ok(i) => PathSegment::Index(i),
                Err(_) => PathSegment::Key(s.to_string()),
            })
            .collect();
        SourceLocation { path, byte_offset: None }
    }

    /// RFC 6901 JSON Pointer text; the root is the empty string.
    pub fn pointer(&self) -> String {
        let mut out = String::new();
        for seg in &self.path {
            out.push('/');
            match seg {
                PathSegment::Key(k) => out.push_str(&k.replace('~', "~0").replace('/', "~1")),
                PathSegment::Index(i) => out.push_str(&i.to_string()),
            }
        }
        out
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str("(root)")
        } else {
            f.write_str(&self.pointer())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub rule_id: &'static str,
    pub severity: Severity,
    pub location: SourceLocation,
    pub message: String,
}

impl Diagnostic {
    pub fn new(rule_id: &'static str, severity: Severity, location: SourceLocation, message: impl Into<String>) -> Self {
        Diagnostic { rule_id, severity, location, message: message.into() }
    }

    pub fn error(rule_id: &'static str, location: SourceLocation, message: impl Into<String>) -> Self {
        Diagnostic::new(rule_id, Severity::Error, location, message)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Sorts by (location, rule id, message), the order every report uses.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        (&a.location.path, a.rule_id, &a.message, a.severity).cmp(&(&b.location.path, b.rule_id, &b.message, b.severity))
    });
}
