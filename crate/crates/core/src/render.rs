//! Markdown and HTML renderings of cards, and text or JSON Lines renderings of
//! diagnostics. Output is a pure function of the inputs.

use std::collections::BTreeMap;
use std::fmt::{Display, Write};

use serde_json::json;

use crate::card_model::*;
use crate::diagnostic::Diagnostic;
use crate::units::Quantity;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RenderFormat {
    #[default]
    Markdown,
    Html,
}

impl std::str::FromStr for RenderFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(RenderFormat::Markdown),
            "html" => Ok(RenderFormat::Html),
            other => Err(format!("unknown render format \"{other}\" (expected markdown or html)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RenderOptions {
    pub format: RenderFormat,
    /// Keep headings and fields that have no content, marked "(none)".
    pub include_empty_sections: bool,
}

const NONE: &str = "(none)";

/// Field labels of a metric table, in row order.
pub const METRIC_FIELDS: [&str; 9] = [
    "Name of metric",
    "Purpose",
    "Use-case",
    "Definition",
    "Risk level",
    "Measurement",
    "Statistics",
    "Benchmarks",
    "Fundamental limit",
];

pub const FMEA_COLUMNS: [&str; 10] =
    ["ID", "Level", "Component", "Failure mode", "Effect", "S", "O", "D", "RPN", "Mitigation"];

#[derive(Debug, Clone, PartialEq)]
enum Block {
    Heading(u8, String),
    Field(String, FieldValue),
    Table(Vec<String>, Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq)]
enum FieldValue {
    Text(String),
    Items(Vec<String>),
}

struct Builder {
    include_empty: bool,
    blocks: Vec<Block>,
}

impl Builder {
    fn text(&mut self, label: &str, value: impl Into<String>) {
        let value = value.into();
        if self.include_empty || !value.trim().is_empty() {
            self.blocks.push(Block::Field(label.to_string(), FieldValue::Text(value)));
        }
    }

    fn items<T: Display>(&mut self, label: &str, items: impl IntoIterator<Item = T>) {
        let items: Vec<String> = items.into_iter().map(|i| i.to_string()).collect();
        if self.include_empty || !items.is_empty() {
            self.blocks.push(Block::Field(label.to_string(), FieldValue::Items(items)));
        }
    }

    fn table(&mut self, header: &[&str], rows: Vec<Vec<String>>) {
        if self.include_empty || !rows.is_empty() {
            self.blocks.push(Block::Table(header.iter().map(|h| h.to_string()).collect(), rows));
        }
    }

    /// Emits a heading followed by whatever `body` adds, dropping the heading
    /// when the body adds nothing and empty sections are suppressed.
    fn section(&mut self, level: u8, title: &str, body: impl FnOnce(&mut Self)) {
        let start = self.blocks.len();
        self.blocks.push(Block::Heading(level, title.to_string()));
        body(self);
        let has_content = self.blocks[start + 1..].iter().any(|b| !matches!(b, Block::Heading(..)));
        if !has_content && !self.include_empty {
            self.blocks.truncate(start);
        }
    }
}

fn params<V: Display>(map: &BTreeMap<String, V>) -> String {
    map.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join("; ")
}

fn joined<T: Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

fn with_suffix(base: String, suffix: &str, value: String) -> String {
    if value.is_empty() {
        base
    } else {
        format!("{base}{suffix}{value}")
    }
}

fn carrier_label(card: &ModelCard, id: u32) -> String {
    match card.quantum_spec.hardware.carrier(id) {
        Some(c) if !c.name.is_empty() => format!("{id} ({})", c.name),
        _ => id.to_string(),
    }
}

fn build(card: &ModelCard, include_empty: bool) -> Vec<Block> {
    let mut b = Builder { include_empty, blocks: Vec::new() };
    let e = &card.entity;
    b.section(2, "Entity Details", |b| {
        b.text("Name", &e.name);
        b.text("Version", &e.version);
        b.text("Type", e.entity_type.as_str());
        b.text("Purpose", &e.purpose.text);
        b.items("Developer", &e.developer);
        b.text("Release Date", e.release_date.format("%Y-%m-%d").to_string());
        b.items(
            "Supporting Documentation",
            e.supporting_documents.iter().map(|d| format!("{}: {} ({}) {}", d.id, d.title, d.kind, d.locator).trim_end().to_string()),
        );
        b.text("Citation Details", &e.citation);
        b.text("License", e.license.clone().unwrap_or_default());
        b.text("Feedback", &e.feedback_contact);
    });

    b.section(2, "Intended Use", |b| {
        for uc in &card.intended_use.use_cases {
            b.section(3, &format!("Use Case {}", uc.id), |b| {
                b.text("Statement", &uc.statement.text);
                b.text("Classification", &uc.taxonomy.classification);
                b.items("Categories", &uc.taxonomy.categories);
                b.items("Family", &uc.taxonomy.family);
                b.items("Users", &uc.users);
                b.items("Classical Alternatives", &uc.classical_alternatives);
                b.items("Quantum Alternatives", &uc.quantum_alternatives);
                b.items("Out-of-scope Uses", &uc.out_of_scope);
                b.items("Limitations", uc.limitations.iter().map(|l| format!("{}: {}", l.id, l.text)));
            });
        }
    });

    b.section(2, "Factors", |b| {
        if let Some(f) = &card.factors {
            b.text("Machine-learning components present", if f.ml_components_present { "yes" } else { "no" });
            b.items(
                "Factors",
                f.factors.iter().map(|x| {
                    let base = with_suffix(x.name.clone(), ": ", x.description.clone());
                    with_suffix(base, "; relevant metrics: ", joined(&x.relevant_metrics))
                }),
            );
        }
    });

    let qs = &card.quantum_spec;
    b.section(2, "Quantum Technology Specifications", |b| {
        let sa = &qs.system_architecture;
        b.section(3, "System Architecture", |b| {
            b.items("Quantum Process/Algorithms", &sa.processes_algorithms);
            let refs = joined(&sa.circuit_design.doc_refs);
            b.text("Circuit Design", with_suffix(sa.circuit_design.text.clone(), "; see ", refs));
            b.text("Physical Entanglement", &sa.physical_entanglement);
        });
        let hw = &qs.hardware;
        b.section(3, "Hardware Specification", |b| {
            b.items(
                "Carriers of Quantum Information",
                hw.carriers.iter().map(|c| {
                    let base = format!("{}. {} [{}] x{}", c.id, c.name, c.kind, c.count);
                    with_suffix(base, ": ", params(&c.circuit_parameters))
                }),
            );
            b.items(
                "Local Quantum Coherence",
                hw.local_coherence.iter().map(|l| {
                    let base = format!("carrier {}: {}", carrier_label(card, l.carrier_ref), l.description);
                    with_suffix(base, "; states: ", joined(&l.states))
                }),
            );
            b.items(
                "Non-local Quantum Coherence",
                hw.nonlocal_coherence.iter().map(|r| {
                    let carriers: Vec<String> = r.carrier_refs.iter().map(|&c| carrier_label(card, c)).collect();
                    let base = format!("{}: {} over carriers {}", r.id, r.kind, carriers.join(", "));
                    with_suffix(base, "; ", params(&r.parameters))
                }),
            );
            b.text("Entanglement Strategy", &hw.entanglement_strategy);
            b.items(
                "Measurement",
                hw.measurement.iter().map(|d| {
                    format!(
                        "{}: {}; efficiency {}; dead time {}; false-positive rate {}",
                        d.id, d.detector_type, d.efficiency, d.dead_time, d.false_positive_rate
                    )
                }),
            );
            b.items(
                "Interconnects",
                hw.interconnects.iter().map(|i| {
                    let base = format!(
                        "{}: {} between carriers {} and {}",
                        i.id,
                        i.medium,
                        carrier_label(card, i.endpoints[0]),
                        carrier_label(card, i.endpoints[1])
                    );
                    with_suffix(base, "; ", params(&i.parameters))
                }),
            );
            b.items(
                "Control",
                hw.control.iter().map(|c| {
                    let base = format!("carrier {}: {}", carrier_label(card, c.carrier_ref), c.mechanism);
                    with_suffix(base, "; decoherence impact: ", c.decoherence_impact.clone())
                }),
            );
            b.text("Control Feedback", &hw.control_feedback);
            b.items(
                "Operational Environment",
                hw.operational_env.iter().map(|c| {
                    let bound = |q: &Option<Quantity>| q.as_ref().map_or("unbounded".to_string(), Quantity::to_string);
                    let base = format!("{}: {} to {}", c.parameter, bound(&c.min), bound(&c.max));
                    with_suffix(base, "; ", c.note.clone())
                }),
            );
            b.items(
                "Non-Operational Environment",
                hw.non_operational_env.iter().map(|h| {
                    let base = with_suffix(h.environment.clone(), ": ", h.mechanism.clone());
                    with_suffix(base, "; ", params(&h.parameters))
                }),
            );
            b.items("Hardware Requirements", &hw.hardware_requirements);
        });
        let ifc = &qs.interface;
        b.section(3, "Interface Specification", |b| {
            b.text("Data Type", &ifc.data_type);
            b.text("Data Handling", &ifc.data_handling);
            b.items("Potential Issues", &ifc.potential_issues);
            b.items("Assumptions", &ifc.assumptions);
            b.items("Requirements", &ifc.requirements);
            b.items("Software Requirements", &ifc.software_requirements);
        });
        b.section(3, "Other Approaches", |b| {
            if let Some(layers) = &qs.layer_model {
                b.items("Layer Model", layers.iter().map(|l| with_suffix(l.layer_name.clone(), ": ", l.description.clone())));
            }
        });
    });

    let es = &card.errors_section;
    b.section(2, "Errors", |b| {
        for s in &es.error_sources {
            b.section(3, &format!("Error Source {}", s.id), |b| {
                b.text("Source Identification", &s.source);
                b.text("Classification", s.classification.as_str());
                b.items("Affected Phenomena", &s.affected_phenomena);
                let estimate = s.impact.estimate.as_ref().map(Quantity::to_string).unwrap_or_default();
                b.text("Impact Estimates", with_suffix(s.impact.text.clone(), "; estimate ", estimate));
                b.items("Mitigation Strategies", &s.mitigation);
                b.text("Residual Errors", &s.residual);
            });
        }
        b.section(3, "FMEA", |b| {
            b.text("FMEA Document", es.fmea_document_ref.clone().unwrap_or_default());
            if let Some(rows) = &es.fmea_rows {
                let rows = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.id.clone(),
                            r.level.to_string(),
                            carrier_label(card, r.component_ref),
                            r.failure_mode.clone(),
                            r.effect.clone(),
                            r.severity.to_string(),
                            r.occurrence.to_string(),
                            r.detection.to_string(),
                            r.rpn.to_string(),
                            r.mitigation.clone(),
                        ]
                    })
                    .collect();
                b.table(&FMEA_COLUMNS, rows);
            }
        });
    });

    let perf = &card.performance;
    b.section(2, "Performance Metrics", |b| {
        for m in &perf.metrics {
            b.section(3, &m.name, |b| {
                b.blocks.push(Block::Table(
                    vec!["Field".into(), "Value".into()],
                    METRIC_FIELDS.iter().zip(metric_cells(m)).map(|(f, v)| vec![f.to_string(), v]).collect(),
                ));
                b.items("Limitations addressed", &m.limitations_addressed);
            });
        }
        b.items("Metrics not reported", &perf.unreported_metrics);
    });

    let eth = &card.ethics;
    b.section(2, "Ethical Considerations", |b| {
        b.text("Impact Assessment", &eth.impact_assessment);
        b.items("Mitigation Strategies", &eth.mitigation_strategies);
    });

    let ev = &card.evaluation;
    b.section(2, "Evaluation Criteria", |b| {
        b.text("Model Validation", &ev.model_validation);
        b.text("Hardware Verification", &ev.hardware_verification);
        b.text("Algorithmic Correctness", &ev.algorithmic_correctness);
        b.text("Operational Stability", &ev.operational_stability);
        b.text("Reproducibility", &ev.reproducibility);
    });

    let a = &card.assurability;
    b.section(2, "Assurability", |b| {
        b.items("Certifications", &a.certifications);
        b.text("Standards Compliance", &a.standards_compliance);
        b.text("Audit Reports", &a.audit_reports);
        b.items("Evaluation Partners", &a.evaluation_partners);
        b.text("Physical Security", &a.physical_security);
        b.text("Cybersecurity", &a.cybersecurity);
        b.text("Fail-Safe Mechanisms", &a.fail_safe);
        b.text("Recovery Protocols", &a.recovery_protocols);
        b.text("Training Programs", &a.training_programs);
        b.text("Support Resources", &a.support_resources);
        b.text("Assurance Case", a.assurance_case_ref.clone().unwrap_or_default());
    });

    let sup = &card.supplementary;
    b.section(2, "Supplementary Materials", |b| {
        b.items("References", &sup.references);
        b.items("Supporting Documents", &sup.supporting_doc_refs);
    });
    b.blocks
}

fn metric_cells(m: &MetricReport) -> [String; 9] {
    let d = &m.definition;
    let mut definition = d.formula_text.clone();
    if !d.unit.is_dimensionless() {
        definition = with_suffix(definition, "; unit ", d.unit.to_string());
    }
    definition = with_suffix(definition, "; inputs: ", joined(&d.inputs));
    let risk = m.risk.map_or(String::new(), |r| {
        format!("RPN {} (severity {}, occurrence {}, detection {})", r.rpn, r.severity, r.occurrence, r.detection)
    });
    let measurement = with_suffix(m.measurement.method.clone(), "; conditions: ", m.measurement.conditions.clone());
    let s = &m.statistics;
    let mut stats = format!("{} ({}", s.value, s.uncertainty_kind);
    if let Some(n) = s.n_samples {
        let _ = write!(stats, ", n = {n}");
    }
    stats.push(')');
    stats = with_suffix(stats, "; ", s.method.clone());
    [
        m.name.clone(),
        m.purpose.clone(),
        joined(&m.use_case_refs),
        definition,
        risk,
        measurement,
        stats,
        m.benchmarks.join("; "),
        m.fundamental_limit.as_ref().map(ToString::to_string).unwrap_or_default(),
    ]
}

pub fn render_card(card: &ModelCard, options: &RenderOptions) -> String {
    let title = format!("{} {}", card.entity.name, card.entity.version);
    let blocks = build(card, options.include_empty_sections);
    match options.format {
        RenderFormat::Markdown => markdown(&title, &blocks),
        RenderFormat::Html => html(&title, &blocks),
    }
}

fn or_none(s: &str) -> &str {
    if s.trim().is_empty() {
        NONE
    } else {
        s
    }
}

fn md_inline(s: &str) -> String {
    or_none(s).replace('\n', "<br>")
}

fn md_cell(s: &str) -> String {
    md_inline(s).replace('|', "\\|")
}

fn markdown(title: &str, blocks: &[Block]) -> String {
    let mut out = format!("# {}\n", md_inline(title));
    let mut prev_field = false;
    for block in blocks {
        let is_field = matches!(block, Block::Field(..));
        if !(is_field && prev_field) {
            out.push('\n');
        }
        prev_field = is_field;
        match block {
            Block::Heading(level, text) => {
                let _ = writeln!(out, "{} {}", "#".repeat(*level as usize), md_inline(text));
            }
            Block::Field(label, FieldValue::Text(v)) => {
                let _ = writeln!(out, "- **{label}:** {}", md_inline(v));
            }
            Block::Field(label, FieldValue::Items(items)) if items.is_empty() => {
                let _ = writeln!(out, "- **{label}:** {NONE}");
            }
            Block::Field(label, FieldValue::Items(items)) => {
                let _ = writeln!(out, "- **{label}:**");
                for item in items {
                    let _ = writeln!(out, "  - {}", md_inline(item));
                }
            }
            Block::Table(header, rows) => {
                let row = |cells: &[String]| format!("| {} |", cells.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | "));
                let _ = writeln!(out, "{}", row(header));
                let _ = writeln!(out, "|{}", " --- |".repeat(header.len()));
                for r in rows {
                    let _ = writeln!(out, "{}", row(r));
                }
            }
        }
    }
    out
}

fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("<br>"),
            c => out.push(c),
        }
    }
    out
}

fn html_text(s: &str) -> String {
    escape_html(or_none(s))
}

fn html(title: &str, blocks: &[Block]) -> String {
    let mut body = format!("<h1>{}</h1>\n", escape_html(title));
    let mut in_list = false;
    for block in blocks {
        let is_field = matches!(block, Block::Field(..));
        if in_list && !is_field {
            body.push_str("</ul>\n");
        }
        if is_field && !in_list {
            body.push_str("<ul>\n");
        }
        in_list = is_field;
        match block {
            Block::Heading(level, text) => {
                let _ = writeln!(body, "<h{level}>{}</h{level}>", escape_html(text));
            }
            Block::Field(label, FieldValue::Text(v)) => {
                let _ = writeln!(body, "<li><strong>{}:</strong> {}</li>", escape_html(label), html_text(v));
            }
            Block::Field(label, FieldValue::Items(items)) if items.is_empty() => {
                let _ = writeln!(body, "<li><strong>{}:</strong> {NONE}</li>", escape_html(label));
            }
            Block::Field(label, FieldValue::Items(items)) => {
                let _ = writeln!(body, "<li><strong>{}:</strong>\n<ul>", escape_html(label));
                for item in items {
                    let _ = writeln!(body, "<li>{}</li>", html_text(item));
                }
                body.push_str("</ul>\n</li>\n");
            }
            Block::Table(header, rows) => {
                body.push_str("<table>\n<thead>\n<tr>");
                for h in header {
                    let _ = write!(body, "<th>{}</th>", escape_html(h));
                }
                body.push_str("</tr>\n</thead>\n<tbody>\n");
                for r in rows {
                    body.push_str("<tr>");
                    for c in r {
                        let _ = write!(body, "<td>{}</td>", html_text(c));
                    }
                    body.push_str("</tr>\n");
                }
                body.push_str("</tbody>\n</table>\n");
            }
        }
    }
    if in_list {
        body.push_str("</ul>\n");
    }
    format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n</head>\n<body>\n{body}</body>\n</html>\n",
        escape_html(title)
    )
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DiagnosticFormat {
    #[default]
    Text,
    Jsonl,
}

impl std::str::FromStr for DiagnosticFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(DiagnosticFormat::Text),
            "jsonl" => Ok(DiagnosticFormat::Jsonl),
            other => Err(format!("unknown diagnostic format \"{other}\" (expected text or jsonl)")),
        }
    }
}

/// One line per finding, in the order given.
pub fn render_diagnostics(diags: &[Diagnostic], format: DiagnosticFormat) -> String {
    render_diagnostics_for(None, diags, format)
}

/// As [`render_diagnostics`], prefixing text lines with `<file>: ` and adding
/// a `file` key to JSON lines when a file name is given.
pub fn render_diagnostics_for(file: Option<&str>, diags: &[Diagnostic], format: DiagnosticFormat) -> String {
    let mut out = String::new();
    for d in diags {
        match format {
            DiagnosticFormat::Text => {
                if let Some(f) = file {
                    let _ = write!(out, "{f}: ");
                }
                let _ = write!(out, "{} {} {}", d.severity, d.rule_id, d.location);
                if let Some(off) = d.location.byte_offset {
                    let _ = write!(out, " (byte {off})");
                }
                let _ = writeln!(out, ": {}", d.message.replace('\n', " "));
            }
            DiagnosticFormat::Jsonl => {
                let mut obj = json!({
                    "severity": d.severity,
                    "rule_id": d.rule_id,
                    "path": d.location.pointer(),
                    "message": d.message,
                });
                if let Some(off) = d.location.byte_offset {
                    obj["byte_offset"] = json!(off);
                }
                if let Some(f) = file {
                    obj["file"] = json!(f);
                }
                let _ = writeln!(out, "{obj}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card_model::sample::golden_card;
    use crate::diagnostic::{Severity, SourceLocation};
    use crate::lint::rules::E_18W;

    fn md(card: &ModelCard, include_empty_sections: bool) -> String {
        render_card(card, &RenderOptions { format: RenderFormat::Markdown, include_empty_sections })
    }

    #[test]
    fn sections_in_order() {
        let out = md(&golden_card(), false);
        let order = [
            "## Entity Details",
            "## Intended Use",
            "## Factors",
            "## Quantum Technology Specifications",
            "### System Architecture",
            "### Hardware Specification",
            "### Interface Specification",
            "### Other Approaches",
            "## Errors",
            "## Performance Metrics",
            "## Ethical Considerations",
            "## Evaluation Criteria",
            "## Assurability",
            "## Supplementary Materials",
        ];
        let pos: Vec<usize> = order.iter().map(|h| out.find(&format!("\n{h}\n")).unwrap_or_else(|| panic!("{h}"))).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(out.starts_with("# Acme QPU One 1.2.0\n"));
        assert!(out.ends_with('\n') && !out.ends_with("\n\n"));
        assert_eq!(out, md(&golden_card(), false));
    }

    #[test]
    fn metric_table_rows() {
        let out = md(&golden_card(), false);
        let start = out.find("### T1\n").unwrap();
        let rows: Vec<&str> = out[start..].lines().skip(4).take(9).collect();
        let labels: Vec<&str> = rows.iter().map(|r| r.split(" | ").next().unwrap().trim_start_matches("| ")).collect();
        assert_eq!(labels, METRIC_FIELDS);
        assert!(rows[6].contains("85 ± 3 µs"));
        assert!(rows[4].contains("RPN 140"));
    }

    #[test]
    fn empty_sections_are_optional() {
        let mut card = golden_card();
        card.ethics = EthicsSection::default();
        assert!(!md(&card, false).contains("Ethical Considerations"));
        let full = md(&card, true);
        assert!(full.contains("## Ethical Considerations\n\n- **Impact Assessment:** (none)\n"));
    }

    #[test]
    fn html_wraps_the_same_structure() {
        let out = render_card(&golden_card(), &RenderOptions { format: RenderFormat::Html, include_empty_sections: false });
        assert!(out.starts_with("<!DOCTYPE html>\n"));
        assert!(out.contains("<h2>Performance Metrics</h2>"));
        assert!(out.contains("<td>Name of metric</td><td>T1</td>"));
        assert_eq!(out.matches("<ul>").count(), out.matches("</ul>").count());
    }

    #[test]
    fn escapes() {
        let mut card = golden_card();
        card.performance.metrics[0].purpose = "a | b <c>".into();
        assert!(md(&card, false).contains("| Purpose | a \\| b <c> |"));
        let out = render_card(&card, &RenderOptions { format: RenderFormat::Html, include_empty_sections: false });
        assert!(out.contains("a | b &lt;c&gt;"));
    }

    #[test]
    fn diagnostics() {
        assert_eq!(render_diagnostics(&[], DiagnosticFormat::Text), "");
        let d = vec![
            Diagnostic::error(E_18W, SourceLocation::at("/entity/purpose"), "19 words"),
            Diagnostic::new("W-BENCH", Severity::Warning, SourceLocation::root(), "x"),
        ];
        let text = render_diagnostics(&d, DiagnosticFormat::Text);
        assert_eq!(text, "error E-18W /entity/purpose: 19 words\nwarning W-BENCH (root): x\n");
        let jsonl = render_diagnostics(&d, DiagnosticFormat::Jsonl);
        assert_eq!(jsonl.lines().count(), text.lines().count());
        let first: serde_json::Value = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
        assert_eq!(first["rule_id"], "E-18W");
        assert_eq!(first["path"], "/entity/purpose");
        let prefixed = render_diagnostics_for(Some("a.qtmc.json"), &d, DiagnosticFormat::Text);
        assert!(prefixed.starts_with("a.qtmc.json: error E-18W"));
    }
}
