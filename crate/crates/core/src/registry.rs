//! A set of lint-clean cards keyed by persistent identifier, with search and
//! cross-card metric comparison.
//!
//! On disk a registry is a directory of `<slug>@<version>.qtmc.json` files and
//! an optional `index.cache.json`. The files are authoritative; the cache only
//! records content hashes so that edits made behind the registry's back are
//! reported on the next load.
//!
//! Mutation needs `&mut CardIndex`, so a shared index (for example behind an
//! `RwLock`) admits many readers and one writer.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::card_model::{EntityType, ModelCard};
use crate::card_parser::{parse_card, serialize_card, FILE_EXTENSION};
use crate::identity::{card_pid, content_hash, IdentityError, Pid};
use crate::lint::{has_errors, lint, LintConfig};
use crate::units::{DimensionVector, Quantity};

pub const CACHE_FILE: &str = "index.cache.json";

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{pid} is already registered with different content (hash {existing}, new {incoming})")]
    PidCollision { pid: Pid, existing: String, incoming: String },
    #[error("card has {0} error-severity lint finding(s) and cannot be registered")]
    LintErrorsPresent(usize),
    #[error("no card reports a metric named \"{0}\"")]
    NoSuchMetricAnywhere(String),
    #[error("metric name must not be empty")]
    EmptyMetricName,
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> RegistryError + '_ {
    move |source| RegistryError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexEntry {
    pub card: ModelCard,
    pub content_hash: String,
    pub source: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddOutcome {
    Added,
    /// The identical card was already present.
    Unchanged,
}

/// Conjunctive filter; absent fields match everything. Text matches ignore
/// case and surrounding whitespace.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Query {
    pub entity_type: Option<EntityType>,
    pub classification: Option<String>,
    pub category: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FindHit {
    pub pid: Pid,
    pub purpose: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub pid: Pid,
    /// Value in coherent base units.
    pub value: Quantity,
    pub n_samples: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricComparison {
    pub metric: String,
    /// Shared dimension of every row and whether the rows are logarithmic.
    pub dimension: (DimensionVector, bool),
    /// Ascending by normalized value, ties by identifier.
    pub rows: Vec<ComparisonRow>,
    /// Cards whose value has a different dimension, with the value as stated.
    pub mismatched: Vec<(Pid, Quantity)>,
    /// Cards that do not report the metric.
    pub missing: Vec<Pid>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CardIndex {
    entries: BTreeMap<Pid, IndexEntry>,
    by_type: BTreeMap<EntityType, BTreeSet<Pid>>,
    by_classification: BTreeMap<String, BTreeSet<Pid>>,
}

fn fold(text: &str) -> String {
    text.trim().to_lowercase()
}

fn dimension_key(q: &Quantity) -> (DimensionVector, bool) {
    (q.dimension(), q.unit.is_log_unit)
}

impl CardIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, pid: &Pid) -> Option<&IndexEntry> {
        self.entries.get(pid)
    }

    /// Entries in identifier order.
    pub fn entries(&self) -> impl Iterator<Item = (&Pid, &IndexEntry)> {
        self.entries.iter()
    }

    pub fn add(&mut self, card: ModelCard) -> Result<AddOutcome, RegistryError> {
        self.add_from(card, None)
    }

    /// Admits cards without error-severity lint findings under the default
    /// configuration.
    pub fn add_from(&mut self, card: ModelCard, source: Option<PathBuf>) -> Result<AddOutcome, RegistryError> {
        let pid = card_pid(&card)?;
        let hash = content_hash(&card);
        if let Some(existing) = self.entries.get(&pid) {
            if existing.content_hash == hash {
                return Ok(AddOutcome::Unchanged);
            }
            return Err(RegistryError::PidCollision { pid, existing: existing.content_hash.clone(), incoming: hash });
        }
        let diags = lint(&card, &LintConfig::default()).expect("default configuration is valid");
        if has_errors(&diags) {
            return Err(RegistryError::LintErrorsPresent(diags.iter().filter(|d| d.is_error()).count()));
        }
        self.by_type.entry(card.entity.entity_type).or_default().insert(pid.clone());
        for uc in &card.intended_use.use_cases {
            self.by_classification.entry(fold(&uc.taxonomy.classification)).or_default().insert(pid.clone());
        }
        self.entries.insert(pid, IndexEntry { card, content_hash: hash, source });
        Ok(AddOutcome::Added)
    }

    pub fn find(&self, query: &Query) -> Vec<FindHit> {
        let empty = BTreeSet::new();
        let mut selections = Vec::new();
        if let Some(t) = query.entity_type {
            selections.push(self.by_type.get(&t).unwrap_or(&empty));
        }
        if let Some(c) = &query.classification {
            selections.push(self.by_classification.get(&fold(c)).unwrap_or(&empty));
        }
        let pids: Vec<&Pid> = match selections.split_first() {
            Some((first, rest)) => first.iter().filter(|p| rest.iter().all(|s| s.contains(*p))).collect(),
            None => self.entries.keys().collect(),
        };
        let category = query.category.as_deref().map(fold);
        pids.into_iter()
            .map(|pid| (pid, &self.entries[pid].card))
            .filter(|(_, card)| {
                category.as_ref().is_none_or(|k| {
                    card.intended_use.use_cases.iter().flat_map(|uc| &uc.taxonomy.categories).any(|c| fold(c) == *k)
                })
            })
            .map(|(pid, card)| FindHit { pid: pid.clone(), purpose: card.entity.purpose.text.clone() })
            .collect()
    }

    /// Gathers the named metric from every card. The reference dimension is
    /// the one most cards share; ties go to the dimension of the card with
    /// the smallest identifier.
    pub fn compare_metric(&self, name: &str) -> Result<MetricComparison, RegistryError> {
        if name.trim().is_empty() {
            return Err(RegistryError::EmptyMetricName);
        }
        let mut reported = Vec::new();
        let mut missing = Vec::new();
        for (pid, entry) in &self.entries {
            match entry.card.performance.metric(name) {
                Some(m) => reported.push((pid, m)),
                None => missing.push(pid.clone()),
            }
        }
        if reported.is_empty() {
            return Err(RegistryError::NoSuchMetricAnywhere(name.to_string()));
        }
        let mut counts: BTreeMap<(DimensionVector, bool), (usize, usize)> = BTreeMap::new();
        for (i, (_, m)) in reported.iter().enumerate() {
            counts.entry(dimension_key(&m.statistics.value)).or_insert((0, i)).0 += 1;
        }
        let (&dimension, _) = counts
            .iter()
            .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.1 .1.cmp(&a.1 .1)))
            .expect("at least one card reports the metric");

        let mut rows = Vec::new();
        let mut mismatched = Vec::new();
        for (pid, m) in reported {
            let value = &m.statistics.value;
            if dimension_key(value) == dimension {
                rows.push(ComparisonRow { pid: pid.clone(), value: value.normalized(), n_samples: m.statistics.n_samples });
            } else {
                mismatched.push((pid.clone(), value.clone()));
            }
        }
        rows.sort_by(|a, b| a.value.value.total_cmp(&b.value.value).then_with(|| a.pid.cmp(&b.pid)));
        Ok(MetricComparison { metric: name.to_string(), dimension, rows, mismatched, missing })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CacheEntry {
    pid: String,
    content_hash: String,
    file: String,
}

/// Non-fatal findings from loading a registry directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadProblem {
    pub path: PathBuf,
    pub kind: LoadProblemKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadProblemKind {
    /// The file could not be read or parsed.
    Unreadable,
    /// The card has error-severity lint findings.
    Rejected,
    /// Two files produce the same identifier with different content.
    Collision,
    /// The content hash disagrees with the one recorded in the cache.
    Tampered,
    /// The file name is not `<pid>.qtmc.json`.
    Misnamed,
}

#[derive(Debug, Default)]
pub struct LoadReport {
    pub index: CardIndex,
    pub problems: Vec<LoadProblem>,
}

/// Indexes every `*.qtmc.json` file directly under `root`, in file-name
/// order, and checks hashes against the cache when one exists.
pub fn load_dir(root: &Path) -> Result<LoadReport, RegistryError> {
    let mut files: Vec<PathBuf> = fs::read_dir(root)
        .map_err(io_error(root))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with(FILE_EXTENSION)))
        .collect();
    files.sort();
    let cached = read_cache(root);

    let mut report = LoadReport::default();
    let mut problem = |path: &Path, kind, message: String| {
        report_problem(&mut report.problems, path, kind, message);
    };
    let mut index = CardIndex::new();
    for path in files {
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) => {
                problem(&path, LoadProblemKind::Unreadable, e.to_string());
                continue;
            }
        };
        let parsed = parse_card(&bytes);
        let Some(card) = parsed.card else {
            let first = parsed.problems.first().map(|d| format!("{} {}: {}", d.rule_id, d.location, d.message));
            problem(&path, LoadProblemKind::Unreadable, first.unwrap_or_else(|| "card does not parse".into()));
            continue;
        };
        let Ok(pid) = card_pid(&card) else {
            problem(&path, LoadProblemKind::Unreadable, "entity name yields no identifier".into());
            continue;
        };
        let file_name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        if file_name != pid.file_name() {
            problem(&path, LoadProblemKind::Misnamed, format!("card {pid} is expected in {}", pid.file_name()));
        }
        let hash = content_hash(&card);
        if let Some(expected) = cached.get(&pid.to_string()) {
            if *expected != hash {
                problem(&path, LoadProblemKind::Tampered, format!("content hash {hash} differs from cached {expected}"));
            }
        }
        match index.add_from(card, Some(path.clone())) {
            Ok(_) => {}
            Err(e @ RegistryError::PidCollision { .. }) => problem(&path, LoadProblemKind::Collision, e.to_string()),
            Err(e) => problem(&path, LoadProblemKind::Rejected, e.to_string()),
        }
    }
    report.index = index;
    Ok(report)
}

fn report_problem(problems: &mut Vec<LoadProblem>, path: &Path, kind: LoadProblemKind, message: String) {
    problems.push(LoadProblem { path: path.to_path_buf(), kind, message });
}

fn read_cache(root: &Path) -> BTreeMap<String, String> {
    let Ok(bytes) = fs::read(root.join(CACHE_FILE)) else {
        return BTreeMap::new();
    };
    // An unreadable cache is rebuilt rather than trusted.
    serde_json::from_slice::<Vec<CacheEntry>>(&bytes)
        .map(|entries| entries.into_iter().map(|e| (e.pid, e.content_hash)).collect())
        .unwrap_or_default()
}

/// Rewrites `index.cache.json` from the in-memory index.
pub fn write_cache(root: &Path, index: &CardIndex) -> Result<PathBuf, RegistryError> {
    let entries: Vec<CacheEntry> = index
        .entries()
        .map(|(pid, e)| CacheEntry {
            pid: pid.to_string(),
            content_hash: e.content_hash.clone(),
            file: e
                .source
                .as_ref()
                .and_then(|p| p.file_name())
                .map_or_else(|| pid.file_name(), |n| n.to_string_lossy().into_owned()),
        })
        .collect();
    let mut bytes = serde_json::to_vec(&entries).expect("cache entries always serialize");
    bytes.push(b'\n');
    let path = root.join(CACHE_FILE);
    fs::write(&path, bytes).map_err(io_error(&path))?;
    Ok(path)
}

/// Adds the card to the index and stores its canonical bytes under
/// `<root>/<pid>.qtmc.json`.
pub fn write_card(root: &Path, index: &mut CardIndex, card: ModelCard) -> Result<PathBuf, RegistryError> {
    let path = root.join(card_pid(&card)?.file_name());
    let bytes = serialize_card(&card);
    index.add_from(card, Some(path.clone()))?;
    fs::write(&path, bytes).map_err(io_error(&path))?;
    Ok(path)
}
