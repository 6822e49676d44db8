//! Content rules over a parsed card.

mod config;
pub mod rules;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use config::{ConfigError, LintConfig, SeverityOverride};
use rules::*;

use crate::card_model::{collect_refs, EdgeKind, Limitation, ModelCard, RefTarget};
use crate::diagnostic::{sort_diagnostics, Diagnostic, Severity, SourceLocation};
use crate::fmea;
use crate::units::{normalize, same_dimension, Quantity, UnitExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LintError {
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Counts whitespace-separated words. Hyphenated compounds are one word and
/// tokens made only of punctuation are not counted.
pub fn count_words(text: &str) -> usize {
    text.split_whitespace()
        .map(|tok| tok.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|tok| !tok.is_empty())
        .count()
}

/// All findings for `card`, sorted by (location, rule id).
pub fn lint(card: &ModelCard, config: &LintConfig) -> Result<Vec<Diagnostic>, LintError> {
    config.validate()?;
    let mut out = config.apply(check(card, config.word_limit));
    sort_diagnostics(&mut out);
    Ok(out)
}

struct Findings(Vec<Diagnostic>);

impl Findings {
    fn push(&mut self, rule: &'static str, loc: SourceLocation, msg: impl Into<String>) {
        self.0.push(Diagnostic::new(rule, default_severity(rule), loc, msg));
    }

    fn require(&mut self, value: &str, loc: SourceLocation, what: &str) {
        if value.trim().is_empty() {
            self.push(E_REQ, loc, format!("{what} is empty"));
        }
    }

    fn unique<'a>(&mut self, items: impl IntoIterator<Item = (&'a str, SourceLocation)>, what: &str) {
        let mut seen = BTreeSet::new();
        for (id, loc) in items {
            if !seen.insert(id) {
                self.push(E_DUP_ID, loc, format!("{what} \"{id}\" is repeated"));
            }
        }
    }
}

fn check(card: &ModelCard, word_limit: usize) -> Vec<Diagnostic> {
    let mut f = Findings(Vec::new());
    let root = SourceLocation::root();
    let graph = collect_refs(card);

    f.require(&card.schema_version, root.key("qtmc_version"), "qtmc_version");
    for key in card.extensions.keys().filter(|k| !k.starts_with("x-")) {
        f.push(E_EXT, root.key(key.as_str()), format!("unknown field \"{key}\"; extensions must use the x- prefix"));
    }

    // Entity details
    let e = &card.entity;
    let eloc = root.key("entity");
    f.require(&e.name, eloc.key("name"), "entity name");
    f.require(&e.version, eloc.key("version"), "entity version");
    f.require(&e.purpose.text, eloc.key("purpose"), "purpose statement");
    if e.developer.iter().all(|d| d.trim().is_empty()) {
        f.push(E_REQ, eloc.key("developer"), "developer list is empty");
    }
    f.require(&e.citation, eloc.key("citation"), "citation");
    f.require(&e.feedback_contact, eloc.key("feedback_contact"), "feedback contact");
    statement_limit(&mut f, &e.purpose.text, eloc.key("purpose"), "purpose", word_limit);
    let docs_loc = eloc.key("supporting_documents");
    for (i, d) in e.supporting_documents.iter().enumerate() {
        f.require(&d.id, docs_loc.index(i).key("id"), "supporting document id");
        f.require(&d.title, docs_loc.index(i).key("title"), "supporting document title");
        f.require(&d.locator, docs_loc.index(i).key("locator"), "supporting document locator");
    }
    f.unique(e.supporting_documents.iter().enumerate().map(|(i, d)| (d.id.as_str(), docs_loc.index(i).key("id"))), "supporting document id");

    // Intended use
    let uloc = root.key("intended_use").key("use_cases");
    let use_cases = &card.intended_use.use_cases;
    if use_cases.is_empty() {
        f.push(E_REQ, uloc.clone(), "no use cases are listed");
    }
    let mut prev: Option<u32> = None;
    let mut seen_uc = BTreeSet::new();
    for (i, uc) in use_cases.iter().enumerate() {
        let loc = uloc.index(i);
        if uc.id == 0 {
            f.push(E_REQ, loc.key("id"), "use-case id must be a positive integer");
        }
        if !seen_uc.insert(uc.id) {
            f.push(E_UC_DUP, loc.key("id"), format!("use-case id {} is repeated", uc.id));
        } else if prev.is_some_and(|p| uc.id <= p) {
            f.push(E_UC_DUP, loc.key("id"), format!("use-case id {} is not in ascending order", uc.id));
        }
        prev = Some(prev.map_or(uc.id, |p| p.max(uc.id)));
        f.require(&uc.statement.text, loc.key("statement"), "use-case statement");
        statement_limit(&mut f, &uc.statement.text, loc.key("statement"), &format!("use case {}", uc.id), word_limit);
        f.require(&uc.taxonomy.classification, loc.key("taxonomy").key("classification"), "taxonomy classification");
        for (j, lim) in uc.limitations.iter().enumerate() {
            let lloc = loc.key("limitations").index(j);
            f.require(&lim.text, lloc.key("text"), "limitation text");
            match Limitation::parse_id(&lim.id) {
                Some((n, _)) if n == uc.id => {}
                Some((n, _)) => f.push(
                    E_UC_REF,
                    lloc.key("id"),
                    format!("limitation {} names use case {n} but belongs to use case {}", lim.id, uc.id),
                ),
                None => f.push(E_UC_REF, lloc.key("id"), format!("limitation id \"{}\" is not of the form UC<n>-L<m>", lim.id)),
            }
        }
    }
    let limitation_ids = use_cases.iter().enumerate().flat_map(|(i, uc)| {
        let uloc = &uloc;
        uc.limitations.iter().enumerate().map(move |(j, l)| (l.id.as_str(), uloc.index(i).key("limitations").index(j).key("id")))
    });
    f.unique(limitation_ids, "limitation id");

    // Limitations must be reflected in the performance metrics.
    let addressed: BTreeSet<&str> =
        card.performance.metrics.iter().flat_map(|m| m.limitations_addressed.iter().map(String::as_str)).collect();
    for (i, uc) in use_cases.iter().enumerate() {
        for (j, lim) in uc.limitations.iter().enumerate() {
            if !addressed.contains(lim.id.as_str()) {
                f.push(
                    W_LIM_METRIC,
                    uloc.index(i).key("limitations").index(j),
                    format!("limitation {} is not addressed by any performance metric", lim.id),
                );
            }
        }
    }

    // Factors
    if let Some(factors) = &card.factors {
        let floc = root.key("factors");
        if !factors.ml_components_present && !factors.factors.is_empty() {
            f.push(W_FACTORS_ML, floc.key("factors"), "factors are listed but ml_components_present is false");
        }
        for (i, factor) in factors.factors.iter().enumerate() {
            f.require(&factor.name, floc.key("factors").index(i).key("name"), "factor name");
        }
    }

    // Cross references
    for edge in graph.dangling() {
        match (&edge.kind, &edge.target) {
            (EdgeKind::MetricUseCase, RefTarget::UseCase(id)) => {
                f.push(E_UC_REF, edge.source.clone(), format!("metric references undeclared use case {id}"))
            }
            (EdgeKind::MetricLimitation, RefTarget::Limitation(id)) => {
                f.push(E_UC_REF, edge.source.clone(), format!("metric references undeclared limitation {id}"))
            }
            (EdgeKind::FmeaRow, _) => {} // reported by the coverage check
            (_, RefTarget::Carrier(id)) => {
                f.push(E_CARRIER_REF, edge.source.clone(), format!("carrier {id} is not declared"))
            }
            (_, RefTarget::Document(id)) => f.push(
                E_DOC_REF,
                edge.source.clone(),
                format!("supporting document \"{id}\" is not listed in the entity details"),
            ),
            _ => {}
        }
    }

    hardware(&mut f, card);

    let qloc = root.key("quantum_spec");
    f.require(&card.quantum_spec.interface.data_type, qloc.key("interface").key("data_type"), "interface data type");
    if let Some(layers) = &card.quantum_spec.layer_model {
        let lloc = qloc.key("layer_model");
        for (i, l) in layers.iter().enumerate() {
            f.require(&l.layer_name, lloc.index(i).key("layer_name"), "layer name");
        }
        f.unique(layers.iter().enumerate().map(|(i, l)| (l.layer_name.as_str(), lloc.index(i).key("layer_name"))), "layer name");
    }

    errors_section(&mut f, card);
    performance(&mut f, card);

    f.0
}

fn statement_limit(f: &mut Findings, text: &str, loc: SourceLocation, what: &str, limit: usize) {
    let n = count_words(text);
    if n > limit {
        f.push(E_18W, loc, format!("{what} has {n} words; statements are limited to {limit} (word_count={n})"));
    }
}

fn hardware(f: &mut Findings, card: &ModelCard) {
    let hw = &card.quantum_spec.hardware;
    let hloc = SourceLocation::root().key("quantum_spec").key("hardware");

    let carriers_loc = hloc.key("carriers");
    for (i, c) in hw.carriers.iter().enumerate() {
        let loc = carriers_loc.index(i);
        f.require(&c.name, loc.key("name"), "carrier name");
        f.require(&c.kind, loc.key("kind"), "carrier kind");
        if c.count == 0 {
            f.push(E_REQ, loc.key("count"), "carrier count must be at least 1");
        }
        if c.id == 0 {
            f.push(E_REQ, loc.key("id"), "carrier id must be a positive integer");
        }
    }
    let carrier_ids: Vec<String> = hw.carriers.iter().map(|c| c.id.to_string()).collect();
    f.unique(carrier_ids.iter().enumerate().map(|(i, id)| (id.as_str(), carriers_loc.index(i).key("id"))), "carrier id");

    for (i, ent) in hw.nonlocal_coherence.iter().enumerate() {
        if ent.carrier_refs.is_empty() {
            let loc = hloc.key("nonlocal_coherence").index(i).key("carrier_refs");
            f.push(E_CARRIER_REF, loc, format!("entanglement resource {} names no carriers", ent.id));
        }
    }
    f.unique(
        hw.nonlocal_coherence.iter().enumerate().map(|(i, x)| (x.id.as_str(), hloc.key("nonlocal_coherence").index(i).key("id"))),
        "entanglement resource id",
    );

    for (i, ic) in hw.interconnects.iter().enumerate() {
        if ic.endpoints[0] == ic.endpoints[1] {
            let loc = hloc.key("interconnects").index(i).key("endpoints");
            f.push(E_CARRIER_REF, loc, format!("interconnect {} connects carrier {} to itself", ic.id, ic.endpoints[0]));
        }
    }
    f.unique(
        hw.interconnects.iter().enumerate().map(|(i, x)| (x.id.as_str(), hloc.key("interconnects").index(i).key("id"))),
        "interconnect id",
    );

    let time = Quantity::new(1.0, None, UnitExpr::parse("s").unwrap());
    for (i, det) in hw.measurement.iter().enumerate() {
        let loc = hloc.key("measurement").index(i);
        if !det.efficiency.unit.is_dimensionless() {
            f.push(E_UNIT_DIM, loc.key("efficiency"), format!("detector {} efficiency must be dimensionless", det.id));
        } else {
            let eff = normalize(&det.efficiency).value;
            if !(0.0..=1.0).contains(&eff) {
                f.push(E_EFF_RANGE, loc.key("efficiency"), format!("detector {} efficiency {eff} is outside [0, 1]", det.id));
            }
        }
        if !same_dimension(&det.dead_time, &time) {
            f.push(E_UNIT_DIM, loc.key("dead_time"), format!("detector {} dead time must be a time", det.id));
        }
    }
    f.unique(
        hw.measurement.iter().enumerate().map(|(i, x)| (x.id.as_str(), hloc.key("measurement").index(i).key("id"))),
        "detector id",
    );

    if hw.operational_env.is_empty() {
        f.push(W_ENV, hloc.key("operational_env"), "no operational environment conditions are stated");
    }
    for (i, env) in hw.operational_env.iter().enumerate() {
        let loc = hloc.key("operational_env").index(i);
        if let (Some(min), Some(max)) = (&env.min, &env.max) {
            // Logarithmic units compare as stated.
            let inverted = if min.unit.is_log_unit {
                min.value > max.value
            } else {
                normalize(min).value > normalize(max).value
            };
            if !same_dimension(min, max) {
                f.push(E_UNIT_DIM, loc.clone(), format!("{} bounds have different dimensions ({} vs {})", env.parameter, min, max));
            } else if inverted {
                f.push(E_ENV_BOUNDS, loc.clone(), format!("{} lower bound {} exceeds upper bound {}", env.parameter, min, max));
            }
        }
    }
}

fn errors_section(f: &mut Findings, card: &ModelCard) {
    let es = &card.errors_section;
    let loc = SourceLocation::root().key("errors");
    for (i, src) in es.error_sources.iter().enumerate() {
        f.require(&src.id, loc.key("error_sources").index(i).key("id"), "error source id");
        f.require(&src.source, loc.key("error_sources").index(i).key("source"), "error source");
    }
    f.unique(
        es.error_sources.iter().enumerate().map(|(i, s)| (s.id.as_str(), loc.key("error_sources").index(i).key("id"))),
        "error source id",
    );

    match &es.fmea_rows {
        Some(rows) => {
            if es.fmea_document_ref.is_none() {
                f.push(E_DOC_REF, loc.key("fmea_document_ref"), "inline FMEA rows require an FMEA supporting document reference");
            }
            f.0.extend(fmea::coverage_check(card, rows));
            for (i, row) in rows.iter().enumerate() {
                if !row.is_consistent() {
                    f.push(
                        E_RPN,
                        loc.key("fmea_rows").index(i),
                        format!("FMEA row {}: {}", row.id, rpn_problem(row.rpn, row.severity, row.occurrence, row.detection)),
                    );
                }
            }
            f.unique(rows.iter().enumerate().map(|(i, r)| (r.id.as_str(), loc.key("fmea_rows").index(i).key("id"))), "FMEA row id");
        }
        // Rows kept in an external document are checked with `fmea-check`.
        None if es.fmea_document_ref.is_some() => {}
        None => f.0.extend(fmea::coverage_check(card, &[])),
    }
}

fn performance(f: &mut Findings, card: &ModelCard) {
    let ploc = SourceLocation::root().key("performance").key("metrics");
    let mut names: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, m) in card.performance.metrics.iter().enumerate() {
        let loc = ploc.index(i);
        f.require(&m.name, loc.key("name"), "metric name");
        if names.insert(m.name.as_str(), i).is_some() {
            f.push(E_DUP_ID, loc.key("name"), format!("metric name \"{}\" is repeated", m.name));
        }
        if let Some(risk) = &m.risk {
            if !risk.is_consistent() {
                f.push(
                    E_RPN,
                    loc.key("risk"),
                    format!("metric {}: {}", m.name, rpn_problem(risk.rpn, risk.severity, risk.occurrence, risk.detection)),
                );
            }
        }
        let declared = Quantity::new(1.0, None, m.definition.unit.clone());
        if !same_dimension(&m.statistics.value, &declared) {
            f.push(
                E_UNIT_DIM,
                loc.key("statistics").key("value"),
                format!(
                    "metric {} value {} does not match declared unit \"{}\" ({} vs {})",
                    m.name,
                    m.statistics.value,
                    m.definition.unit,
                    m.statistics.value.dimension(),
                    declared.dimension()
                ),
            );
        }
        match &m.fundamental_limit {
            None => f.push(W_FUND_LIMIT, loc.key("fundamental_limit"), format!("metric {} has no fundamental limit", m.name)),
            Some(limit) => {
                if let Some(q) = limit.as_quantity() {
                    if !same_dimension(q, &declared) {
                        f.push(
                            E_UNIT_DIM,
                            loc.key("fundamental_limit"),
                            format!("metric {} fundamental limit {q} does not match declared unit \"{}\"", m.name, m.definition.unit),
                        );
                    }
                }
            }
        }
        if m.benchmarks.iter().all(|b| b.trim().is_empty()) {
            f.push(W_BENCH, loc.key("benchmarks"), format!("metric {} lists no benchmarks", m.name));
        }
    }
}

/// Convenience for callers that only care about error-severity findings.
fn rpn_problem(stored: u32, s: u32, o: u32, d: u32) -> String {
    match fmea::rpn(s, o, d) {
        Ok(product) => format!("stored rpn {stored} differs from {s} x {o} x {d} = {product}"),
        Err(e) => e.to_string(),
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}
