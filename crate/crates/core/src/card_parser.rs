//! Reading and writing `.qtmc.json` card documents.
//!
//! Reading never stops at the first problem: every shape, quantity and
//! unknown-field problem is collected with its document location. Fields that
//! carry free text or lists may be omitted and default to empty; ids, enums,
//! dates and quantities are required wherever the schema has them.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::card_model::*;
use crate::diagnostic::{sort_diagnostics, Diagnostic, SourceLocation};
use crate::fmea::{rpn, FmeaLevel, FmeaRow};
use crate::lint::rules::{E_EXT, P_QUANTITY, P_SHAPE, P_SYNTAX};
use crate::units::{Quantity, UnitExpr};

/// Conventional file extension for card documents.
pub const FILE_EXTENSION: &str = ".qtmc.json";

/// Top-level keys in canonical order.
pub const TOP_LEVEL_KEYS: [&str; 11] = [
    "qtmc_version",
    "entity",
    "intended_use",
    "factors",
    "quantum_spec",
    "errors",
    "performance",
    "ethics",
    "evaluation",
    "assurability",
    "supplementary",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ParseReport {
    /// Present iff no problem has error severity.
    pub card: Option<ModelCard>,
    pub problems: Vec<Diagnostic>,
}

impl ParseReport {
    pub fn is_ok(&self) -> bool {
        self.card.is_some()
    }
}

pub fn parse_card(bytes: &[u8]) -> ParseReport {
    let (card, problems) = parse_card_lenient(bytes);
    let card = if problems.iter().any(Diagnostic::is_error) { None } else { card };
    ParseReport { card, problems }
}

/// Like [`parse_card`] but still returns the card when the only problems are
/// unknown fields (which are dropped). The linter uses this so that E-EXT
/// findings respect severity overrides.
pub fn parse_card_lenient(bytes: &[u8]) -> (Option<ModelCard>, Vec<Diagnostic>) {
    let value: Value = match serde_json::from_slice(bytes) {
        Ok(v) => v,
        Err(e) => {
            let mut loc = SourceLocation::root();
            loc.byte_offset = Some(byte_offset(bytes, e.line(), e.column()));
            return (None, vec![Diagnostic::error(P_SYNTAX, loc, format!("malformed JSON: {e}"))]);
        }
    };
    let mut r = Reader { problems: Vec::new() };
    let card = r.card(&value);
    let structural = r.problems.iter().any(|d| d.is_error() && d.rule_id != E_EXT);
    let mut problems = r.problems;
    sort_diagnostics(&mut problems);
    (if structural { None } else { card }, problems)
}

/// Canonical bytes: schema key order, sorted map keys, compact, one trailing
/// newline.
pub fn serialize_card(card: &ModelCard) -> Vec<u8> {
    let mut out = serde_json::to_vec(card).expect("model cards always serialize");
    out.push(b'\n');
    out
}

/// Canonical document tree; used for JSON Pointer resolution.
pub fn card_to_value(card: &ModelCard) -> Value {
    serde_json::to_value(card).expect("model cards always serialize")
}

fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in bytes.split(|&b| b == b'\n').enumerate() {
        if i + 1 == line {
            return (offset + column.saturating_sub(1)).min(bytes.len());
        }
        offset += l.len() + 1;
    }
    bytes.len()
}

struct Reader {
    problems: Vec<Diagnostic>,
}

type Obj = Map<String, Value>;

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

impl Reader {
    fn shape(&mut self, loc: &SourceLocation, msg: impl Into<String>) {
        self.problems.push(Diagnostic::error(P_SHAPE, loc.clone(), msg));
    }

    fn object<'v>(&mut self, v: &'v Value, loc: &SourceLocation, known: &[&str]) -> Option<&'v Obj> {
        let Value::Object(map) = v else {
            self.shape(loc, format!("expected an object, found {}", kind_of(v)));
            return None;
        };
        for key in map.keys() {
            if known.contains(&key.as_str()) {
                continue;
            }
            let msg = if key.starts_with("x-") {
                format!("extension field \"{key}\" is only allowed at the document root")
            } else {
                format!("unknown field \"{key}\"; use \"x-{key}\" for extensions")
            };
            self.problems.push(Diagnostic::error(E_EXT, loc.key(key.as_str()), msg));
        }
        Some(map)
    }

    /// Missing or null fields are `None`; present fields are decoded by `f`.
    fn field<T>(&mut self, m: &Obj, key: &str, loc: &SourceLocation, f: impl FnOnce(&mut Self, &Value, &SourceLocation) -> Option<T>) -> Option<Option<T>> {
        match m.get(key) {
            None | Some(Value::Null) => Some(None),
            Some(v) => f(self, v, &loc.key(key)).map(Some),
        }
    }

    fn required<T>(&mut self, m: &Obj, key: &str, loc: &SourceLocation, f: impl FnOnce(&mut Self, &Value, &SourceLocation) -> Option<T>) -> Option<T> {
        match self.field(m, key, loc, f) {
            Some(Some(v)) => Some(v),
            Some(None) => {
                self.shape(loc, format!("missing required field \"{key}\""));
                None
            }
            None => None,
        }
    }

    fn string_value(&mut self, v: &Value, loc: &SourceLocation) -> Option<String> {
        match v {
            Value::String(s) => Some(s.clone()),
            other => {
                self.shape(loc, format!("expected a string, found {}", kind_of(other)));
                None
            }
        }
    }

    /// Optional text field; absent means empty.
    fn text(&mut self, m: &Obj, key: &str, loc: &SourceLocation) -> String {
        self.field(m, key, loc, Self::string_value).flatten().unwrap_or_default()
    }

    fn opt_text(&mut self, m: &Obj, key: &str, loc: &SourceLocation) -> Option<String> {
        self.field(m, key, loc, Self::string_value).flatten()
    }

    fn boolean(&mut self, m: &Obj, key: &str, loc: &SourceLocation) -> bool {
        self.field(m, key, loc, |r, v, l| match v {
            Value::Bool(b) => Some(*b),
            other => {
                r.shape(l, format!("expected a boolean, found {}", kind_of(other)));
                None
            }
        })
        .flatten()
        .unwrap_or(false)
    }

    fn uint_value(&mut self, v: &Value, loc: &SourceLocation) -> Option<u64> {
        match v.as_u64() {
            Some(n) => Some(n),
            None => {
                self.shape(loc, format!("expected a non-negative integer, found {}", v));
                None
            }
        }
    }

    fn u32_value(&mut self, v: &Value, loc: &SourceLocation) -> Option<u32> {
        let n = self.uint_value(v, loc)?;
        match u32::try_from(n) {
            Ok(n) => Some(n),
            Err(_) => {
                self.shape(loc, format!("integer {n} is too large"));
                None
            }
        }
    }

    fn positive_value(&mut self, v: &Value, loc: &SourceLocation) -> Option<u32> {
        match self.u32_value(v, loc)? {
            0 => {
                self.shape(loc, "expected a positive integer, found 0");
                None
            }
            n => Some(n),
        }
    }

    fn enum_value<E: FromStr<Err = String>>(&mut self, v: &Value, loc: &SourceLocation) -> Option<E> {
        let s = self.string_value(v, loc)?;
        match s.parse() {
            Ok(e) => Some(e),
            Err(msg) => {
                self.shape(loc, format!("\"{s}\": {msg}"));
                None
            }
        }
    }

    fn quantity_value(&mut self, v: &Value, loc: &SourceLocation) -> Option<Quantity> {
        let s = self.string_value(v, loc)?;
        match Quantity::parse(&s) {
            Ok(q) => Some(q),
            Err(e) => {
                self.problems.push(Diagnostic::error(P_QUANTITY, loc.clone(), format!("\"{s}\": {e}")));
                None
            }
        }
    }

    fn unit_value(&mut self, v: &Value, loc: &SourceLocation) -> Option<UnitExpr> {
        let s = self.string_value(v, loc)?;
        match UnitExpr::parse(&s) {
            Ok(u) => Some(u),
            Err(e) => {
                self.problems.push(Diagnostic::error(P_QUANTITY, loc.clone(), format!("\"{s}\": {e}")));
                None
            }
        }
    }

    fn quantity_or_text(&mut self, v: &Value, loc: &SourceLocation) -> Option<QuantityOrText> {
        self.string_value(v, loc).map(|s| QuantityOrText::classify(&s))
    }

    /// Decodes every element; `None` if any element failed.
    fn list_value<T>(&mut self, v: &Value, loc: &SourceLocation, mut f: impl FnMut(&mut Self, &Value, &SourceLocation) -> Option<T>) -> Option<Vec<T>> {
        let Value::Array(items) = v else {
            self.shape(loc, format!("expected an array, found {}", kind_of(v)));
            return None;
        };
        let decoded: Vec<Option<T>> = items.iter().enumerate().map(|(i, item)| f(self, item, &loc.index(i))).collect();
        decoded.into_iter().collect()
    }

    /// Optional list field; absent means empty. `None` on error.
    fn list<T>(&mut self, m: &Obj, key: &str, loc: &SourceLocation, f: impl FnMut(&mut Self, &Value, &SourceLocation) -> Option<T>) -> Option<Vec<T>> {
        self.field(m, key, loc, |r, v, l| r.list_value(v, l, f)).map(Option::unwrap_or_default)
    }

    fn strings(&mut self, m: &Obj, key: &str, loc: &SourceLocation) -> Vec<String> {
        self.list(m, key, loc, Self::string_value).unwrap_or_default()
    }

    fn map<T>(&mut self, m: &Obj, key: &str, loc: &SourceLocation, mut f: impl FnMut(&mut Self, &Value, &SourceLocation) -> Option<T>) -> Option<BTreeMap<String, T>> {
        self.field(m, key, loc, |r, v, l| {
            let Value::Object(entries) = v else {
                r.shape(l, format!("expected an object, found {}", kind_of(v)));
                return None;
            };
            let decoded: Vec<Option<(String, T)>> =
                entries.iter().map(|(k, item)| f(r, item, &l.key(k.as_str())).map(|t| (k.clone(), t))).collect();
            decoded.into_iter().collect::<Option<BTreeMap<_, _>>>()
        })
        .map(Option::unwrap_or_default)
    }

    /// Optional nested object; absent means the default value.
    fn section<T: Default>(&mut self, m: &Obj, key: &str, loc: &SourceLocation, f: impl FnOnce(&mut Self, &Value, &SourceLocation) -> Option<T>) -> Option<T> {
        self.field(m, key, loc, f).map(Option::unwrap_or_default)
    }

    fn card(&mut self, v: &Value) -> Option<ModelCard> {
        let root = SourceLocation::root();
        let Value::Object(m) = v else {
            self.shape(&root, format!("expected a card object, found {}", kind_of(v)));
            return None;
        };
        let mut extensions = BTreeMap::new();
        for (key, value) in m {
            if key.starts_with("x-") {
                extensions.insert(key.clone(), value.clone());
            } else if !TOP_LEVEL_KEYS.contains(&key.as_str()) {
                self.problems.push(Diagnostic::error(
                    E_EXT,
                    root.key(key.as_str()),
                    format!("unknown field \"{key}\"; use \"x-{key}\" for extensions"),
                ));
            }
        }

        let schema_version = self.required(m, "qtmc_version", &root, Self::string_value);
        if let Some(ver) = &schema_version {
            if ver.trim().is_empty() {
                self.shape(&root.key("qtmc_version"), "qtmc_version is empty");
            } else if ver.split('.').next() != SCHEMA_VERSION.split('.').next() {
                self.shape(&root.key("qtmc_version"), format!("unsupported qtmc_version \"{ver}\" (this toolkit reads {SCHEMA_VERSION})"));
            }
        }
        let entity = self.required(m, "entity", &root, Self::entity);
        let intended_use = self.required(m, "intended_use", &root, Self::intended_use);
        let factors = self.field(m, "factors", &root, Self::factors);
        let quantum_spec = self.required(m, "quantum_spec", &root, Self::quantum_spec);
        let errors_section = self.required(m, "errors", &root, Self::errors_section);
        let performance = self.required(m, "performance", &root, Self::performance);
        let ethics = self.required(m, "ethics", &root, Self::ethics);
        let evaluation = self.required(m, "evaluation", &root, Self::evaluation);
        let assurability = self.required(m, "assurability", &root, Self::assurability);
        let supplementary = self.required(m, "supplementary", &root, Self::supplementary);

        Some(ModelCard {
            schema_version: schema_version?,
            entity: entity?,
            intended_use: intended_use?,
            factors: factors?,
            quantum_spec: quantum_spec?,
            errors_section: errors_section?,
            performance: performance?,
            ethics: ethics?,
            evaluation: evaluation?,
            assurability: assurability?,
            supplementary: supplementary?,
            extensions,
        })
    }

    fn entity(&mut self, v: &Value, loc: &SourceLocation) -> Option<EntityDetails> {
        const KEYS: &[&str] = &[
            "name",
            "version",
            "entity_type",
            "purpose",
            "developer",
            "release_date",
            "supporting_documents",
            "citation",
            "license",
            "feedback_contact",
        ];
        let m = self.object(v, loc, KEYS)?;
        let entity_type = self.required(m, "entity_type", loc, Self::enum_value);
        let release_date = self.required(m, "release_date", loc, |r, v, l| {
            let s = r.string_value(v, l)?;
            match parse_release_date(&s) {
                Ok(d) => Some(d),
                Err(e) => {
                    r.shape(l, e.to_string());
                    None
                }
            }
        });
        let supporting_documents = self.list(m, "supporting_documents", loc, |r, v, l| {
            let m = r.object(v, l, &["id", "title", "kind", "locator"])?;
            let kind = r.required(m, "kind", l, Self::enum_value);
            Some(SupportingDocument {
                id: r.text(m, "id", l),
                title: r.text(m, "title", l),
                kind: kind?,
                locator: r.text(m, "locator", l),
            })
        });
        Some(EntityDetails {
            name: self.text(m, "name", loc),
            version: self.text(m, "version", loc),
            entity_type: entity_type?,
            purpose: Statement18::new(self.text(m, "purpose", loc)),
            developer: self.strings(m, "developer", loc),
            release_date: release_date?,
            supporting_documents: supporting_documents?,
            citation: self.text(m, "citation", loc),
            license: self.opt_text(m, "license", loc),
            feedback_contact: self.text(m, "feedback_contact", loc),
        })
    }

    fn intended_use(&mut self, v: &Value, loc: &SourceLocation) -> Option<IntendedUse> {
        let m = self.object(v, loc, &["use_cases"])?;
        let use_cases = self.list(m, "use_cases", loc, Self::use_case)?;
        Some(IntendedUse { use_cases })
    }

    fn use_case(&mut self, v: &Value, loc: &SourceLocation) -> Option<UseCase> {
        const KEYS: &[&str] = &[
            "id",
            "statement",
            "taxonomy",
            "users",
            "classical_alternatives",
            "quantum_alternatives",
            "out_of_scope",
            "limitations",
        ];
        let m = self.object(v, loc, KEYS)?;
        let id = self.required(m, "id", loc, Self::positive_value);
        let taxonomy = self.section(m, "taxonomy", loc, |r, v, l| {
            let m = r.object(v, l, &["classification", "categories", "family"])?;
            Some(Taxonomy {
                classification: r.text(m, "classification", l),
                categories: r.strings(m, "categories", l),
                family: r.strings(m, "family", l),
            })
        });
        let limitations = self.list(m, "limitations", loc, |r, v, l| {
            let m = r.object(v, l, &["id", "text"])?;
            let id = r.required(m, "id", l, Self::string_value);
            Some(Limitation { id: id?, text: r.text(m, "text", l) })
        });
        Some(UseCase {
            id: id?,
            statement: Statement18::new(self.text(m, "statement", loc)),
            taxonomy: taxonomy?,
            users: self.strings(m, "users", loc),
            classical_alternatives: self.strings(m, "classical_alternatives", loc),
            quantum_alternatives: self.strings(m, "quantum_alternatives", loc),
            out_of_scope: self.strings(m, "out_of_scope", loc),
            limitations: limitations?,
        })
    }

    fn factors(&mut self, v: &Value, loc: &SourceLocation) -> Option<FactorsBlock> {
        let m = self.object(v, loc, &["ml_components_present", "factors"])?;
        let factors = self.list(m, "factors", loc, |r, v, l| {
            let m = r.object(v, l, &["name", "description", "relevant_metrics"])?;
            Some(Factor {
                name: r.text(m, "name", l),
                description: r.text(m, "description", l),
                relevant_metrics: r.strings(m, "relevant_metrics", l),
            })
        });
        Some(FactorsBlock { ml_components_present: self.boolean(m, "ml_components_present", loc), factors: factors? })
    }

    fn quantum_spec(&mut self, v: &Value, loc: &SourceLocation) -> Option<QuantumSpec> {
        let m = self.object(v, loc, &["system_architecture", "hardware", "interface", "layer_model"])?;
        let system_architecture = self.section(m, "system_architecture", loc, |r, v, l| {
            let m = r.object(v, l, &["processes_algorithms", "circuit_design", "physical_entanglement"])?;
            let circuit_design = r.section(m, "circuit_design", l, |r, v, l| {
                let m = r.object(v, l, &["text", "doc_refs"])?;
                Some(AnnotatedText { text: r.text(m, "text", l), doc_refs: r.strings(m, "doc_refs", l) })
            });
            Some(SystemArchitecture {
                processes_algorithms: r.strings(m, "processes_algorithms", l),
                circuit_design: circuit_design?,
                physical_entanglement: r.text(m, "physical_entanglement", l),
            })
        });
        let hardware = self.section(m, "hardware", loc, Self::hardware);
        let interface = self.section(m, "interface", loc, |r, v, l| {
            const KEYS: &[&str] =
                &["data_type", "data_handling", "potential_issues", "assumptions", "requirements", "software_requirements"];
            let m = r.object(v, l, KEYS)?;
            Some(InterfaceSpec {
                data_type: r.text(m, "data_type", l),
                data_handling: r.text(m, "data_handling", l),
                potential_issues: r.strings(m, "potential_issues", l),
                assumptions: r.strings(m, "assumptions", l),
                requirements: r.strings(m, "requirements", l),
                software_requirements: r.strings(m, "software_requirements", l),
            })
        });
        let layer_model = self.field(m, "layer_model", loc, |r, v, l| {
            r.list_value(v, l, |r, v, l| {
                let m = r.object(v, l, &["layer_name", "description"])?;
                Some(Layer { layer_name: r.text(m, "layer_name", l), description: r.text(m, "description", l) })
            })
        });
        Some(QuantumSpec {
            system_architecture: system_architecture?,
            hardware: hardware?,
            interface: interface?,
            layer_model: layer_model?,
        })
    }

    fn hardware(&mut self, v: &Value, loc: &SourceLocation) -> Option<HardwareSpec> {
        const KEYS: &[&str] = &[
            "carriers",
            "local_coherence",
            "nonlocal_coherence",
            "entanglement_strategy",
            "measurement",
            "interconnects",
            "control",
            "control_feedback",
            "operational_env",
            "non_operational_env",
            "hardware_requirements",
        ];
        let m = self.object(v, loc, KEYS)?;
        let carriers = self.list(m, "carriers", loc, |r, v, l| {
            let m = r.object(v, l, &["id", "name", "kind", "count", "circuit_parameters"])?;
            let id = r.required(m, "id", l, Self::positive_value);
            let count = r.required(m, "count", l, Self::positive_value);
            let circuit_parameters = r.map(m, "circuit_parameters", l, Self::quantity_value);
            Some(Carrier {
                id: id?,
                name: r.text(m, "name", l),
                kind: r.text(m, "kind", l),
                count: count?,
                circuit_parameters: circuit_parameters?,
            })
        });
        let local_coherence = self.list(m, "local_coherence", loc, |r, v, l| {
            let m = r.object(v, l, &["carrier_ref", "description", "states"])?;
            let carrier_ref = r.required(m, "carrier_ref", l, Self::positive_value);
            Some(LocalCoherence { carrier_ref: carrier_ref?, description: r.text(m, "description", l), states: r.strings(m, "states", l) })
        });
        let nonlocal_coherence = self.list(m, "nonlocal_coherence", loc, |r, v, l| {
            let m = r.object(v, l, &["id", "kind", "carrier_refs", "parameters"])?;
            let id = r.required(m, "id", l, Self::string_value);
            let kind = r.required(m, "kind", l, Self::enum_value);
            let carrier_refs = r.list(m, "carrier_refs", l, Self::positive_value);
            let parameters = r.map(m, "parameters", l, Self::quantity_or_text);
            Some(EntanglementResource { id: id?, kind: kind?, carrier_refs: carrier_refs?, parameters: parameters? })
        });
        let measurement = self.list(m, "measurement", loc, |r, v, l| {
            let m = r.object(v, l, &["id", "detector_type", "efficiency", "dead_time", "false_positive_rate"])?;
            let id = r.required(m, "id", l, Self::string_value);
            let efficiency = r.required(m, "efficiency", l, Self::quantity_value);
            let dead_time = r.required(m, "dead_time", l, Self::quantity_value);
            let false_positive_rate = r.required(m, "false_positive_rate", l, Self::quantity_value);
            Some(Detector {
                id: id?,
                detector_type: r.text(m, "detector_type", l),
                efficiency: efficiency?,
                dead_time: dead_time?,
                false_positive_rate: false_positive_rate?,
            })
        });
        let interconnects = self.list(m, "interconnects", loc, |r, v, l| {
            let m = r.object(v, l, &["id", "medium", "endpoints", "parameters"])?;
            let id = r.required(m, "id", l, Self::string_value);
            let endpoints = r.required(m, "endpoints", l, |r, v, l| {
                let ends = r.list_value(v, l, Self::positive_value)?;
                match <[u32; 2]>::try_from(ends) {
                    Ok(pair) => Some(pair),
                    Err(ends) => {
                        r.shape(l, format!("expected exactly two carrier ids, found {}", ends.len()));
                        None
                    }
                }
            });
            let parameters = r.map(m, "parameters", l, Self::quantity_value);
            Some(Interconnect { id: id?, medium: r.text(m, "medium", l), endpoints: endpoints?, parameters: parameters? })
        });
        let control = self.list(m, "control", loc, |r, v, l| {
            let m = r.object(v, l, &["carrier_ref", "mechanism", "decoherence_impact"])?;
            let carrier_ref = r.required(m, "carrier_ref", l, Self::positive_value);
            Some(ControlChannel {
                carrier_ref: carrier_ref?,
                mechanism: r.text(m, "mechanism", l),
                decoherence_impact: r.text(m, "decoherence_impact", l),
            })
        });
        let operational_env = self.list(m, "operational_env", loc, |r, v, l| {
            let m = r.object(v, l, &["parameter", "min", "max", "note"])?;
            let min = r.field(m, "min", l, Self::quantity_value);
            let max = r.field(m, "max", l, Self::quantity_value);
            Some(EnvCondition { parameter: r.text(m, "parameter", l), min: min?, max: max?, note: r.text(m, "note", l) })
        });
        let non_operational_env = self.list(m, "non_operational_env", loc, |r, v, l| {
            let m = r.object(v, l, &["environment", "mechanism", "parameters"])?;
            let parameters = r.map(m, "parameters", l, Self::quantity_value);
            Some(HazardEnvironment {
                environment: r.text(m, "environment", l),
                mechanism: r.text(m, "mechanism", l),
                parameters: parameters?,
            })
        });
        Some(HardwareSpec {
            carriers: carriers?,
            local_coherence: local_coherence?,
            nonlocal_coherence: nonlocal_coherence?,
            entanglement_strategy: self.text(m, "entanglement_strategy", loc),
            measurement: measurement?,
            interconnects: interconnects?,
            control: control?,
            control_feedback: self.text(m, "control_feedback", loc),
            operational_env: operational_env?,
            non_operational_env: non_operational_env?,
            hardware_requirements: self.strings(m, "hardware_requirements", loc),
        })
    }

    fn errors_section(&mut self, v: &Value, loc: &SourceLocation) -> Option<ErrorsSection> {
        let m = self.object(v, loc, &["error_sources", "fmea_document_ref", "fmea_rows"])?;
        let error_sources = self.list(m, "error_sources", loc, |r, v, l| {
            const KEYS: &[&str] =
                &["id", "source", "classification", "affected_phenomena", "impact", "mitigation", "residual"];
            let m = r.object(v, l, KEYS)?;
            let classification = r.required(m, "classification", l, Self::enum_value);
            let impact = r.section(m, "impact", l, |r, v, l| {
                let m = r.object(v, l, &["text", "estimate"])?;
                let estimate = r.field(m, "estimate", l, Self::quantity_value);
                Some(Impact { text: r.text(m, "text", l), estimate: estimate? })
            });
            Some(ErrorSource {
                id: r.text(m, "id", l),
                source: r.text(m, "source", l),
                classification: classification?,
                affected_phenomena: r.strings(m, "affected_phenomena", l),
                impact: impact?,
                mitigation: r.strings(m, "mitigation", l),
                residual: r.text(m, "residual", l),
            })
        });
        let fmea_rows = self.field(m, "fmea_rows", loc, |r, v, l| r.list_value(v, l, Self::fmea_row));
        Some(ErrorsSection {
            error_sources: error_sources?,
            fmea_document_ref: self.opt_text(m, "fmea_document_ref", loc),
            fmea_rows: fmea_rows?,
        })
    }

    fn fmea_row(&mut self, v: &Value, loc: &SourceLocation) -> Option<FmeaRow> {
        const KEYS: &[&str] = &[
            "id",
            "level",
            "component_ref",
            "failure_mode",
            "effect",
            "severity",
            "occurrence",
            "detection",
            "rpn",
            "mitigation",
        ];
        let m = self.object(v, loc, KEYS)?;
        let id = self.required(m, "id", loc, Self::string_value);
        let level: Option<FmeaLevel> = self.required(m, "level", loc, Self::enum_value);
        let component_ref = self.required(m, "component_ref", loc, Self::positive_value);
        let severity = self.required(m, "severity", loc, Self::u32_value);
        let occurrence = self.required(m, "occurrence", loc, Self::u32_value);
        let detection = self.required(m, "detection", loc, Self::u32_value);
        let stored = self.field(m, "rpn", loc, Self::u32_value)?;
        let (severity, occurrence, detection) = (severity?, occurrence?, detection?);
        let rpn = stored.unwrap_or_else(|| rpn(severity, occurrence, detection).unwrap_or(0));
        Some(FmeaRow {
            id: id?,
            level: level?,
            component_ref: component_ref?,
            failure_mode: self.text(m, "failure_mode", loc),
            effect: self.text(m, "effect", loc),
            severity,
            occurrence,
            detection,
            rpn,
            mitigation: self.text(m, "mitigation", loc),
        })
    }

    fn performance(&mut self, v: &Value, loc: &SourceLocation) -> Option<PerformanceSection> {
        let m = self.object(v, loc, &["metrics", "unreported_metrics"])?;
        let metrics = self.list(m, "metrics", loc, Self::metric);
        Some(PerformanceSection { metrics: metrics?, unreported_metrics: self.strings(m, "unreported_metrics", loc) })
    }

    fn metric(&mut self, v: &Value, loc: &SourceLocation) -> Option<MetricReport> {
        const KEYS: &[&str] = &[
            "name",
            "purpose",
            "use_case_refs",
            "definition",
            "risk",
            "measurement",
            "statistics",
            "benchmarks",
            "fundamental_limit",
            "limitations_addressed",
        ];
        let m = self.object(v, loc, KEYS)?;
        let use_case_refs = self.list(m, "use_case_refs", loc, Self::positive_value);
        let definition = self.section(m, "definition", loc, |r, v, l| {
            let m = r.object(v, l, &["formula_text", "unit", "inputs"])?;
            let unit = r.field(m, "unit", l, Self::unit_value);
            Some(MetricDefinition {
                formula_text: r.text(m, "formula_text", l),
                unit: unit?.unwrap_or_default(),
                inputs: r.strings(m, "inputs", l),
            })
        });
        let risk = self.field(m, "risk", loc, |r, v, l| {
            let m = r.object(v, l, &["severity", "occurrence", "detection", "rpn"])?;
            let severity = r.required(m, "severity", l, Self::u32_value);
            let occurrence = r.required(m, "occurrence", l, Self::u32_value);
            let detection = r.required(m, "detection", l, Self::u32_value);
            let stored = r.field(m, "rpn", l, Self::u32_value)?;
            let (severity, occurrence, detection) = (severity?, occurrence?, detection?);
            let rpn = stored.unwrap_or_else(|| rpn(severity, occurrence, detection).unwrap_or(0));
            Some(RiskScore { severity, occurrence, detection, rpn })
        });
        let measurement = self.section(m, "measurement", loc, |r, v, l| {
            let m = r.object(v, l, &["method", "conditions"])?;
            Some(Measurement { method: r.text(m, "method", l), conditions: r.text(m, "conditions", l) })
        });
        let statistics = self.required(m, "statistics", loc, |r, v, l| {
            let m = r.object(v, l, &["value", "uncertainty_kind", "n_samples", "method"])?;
            let value = r.required(m, "value", l, Self::quantity_value);
            let uncertainty_kind = r.required(m, "uncertainty_kind", l, Self::enum_value);
            let n_samples = r.field(m, "n_samples", l, Self::uint_value);
            Some(Statistics {
                value: value?,
                uncertainty_kind: uncertainty_kind?,
                n_samples: n_samples?,
                method: r.text(m, "method", l),
            })
        });
        let fundamental_limit = self.field(m, "fundamental_limit", loc, Self::quantity_or_text);
        let limitations_addressed = self.strings(m, "limitations_addressed", loc);
        Some(MetricReport {
            name: self.text(m, "name", loc),
            purpose: self.text(m, "purpose", loc),
            use_case_refs: use_case_refs?,
            definition: definition?,
            risk: risk?,
            measurement: measurement?,
            statistics: statistics?,
            benchmarks: self.strings(m, "benchmarks", loc),
            fundamental_limit: fundamental_limit?,
            limitations_addressed,
        })
    }

    fn ethics(&mut self, v: &Value, loc: &SourceLocation) -> Option<EthicsSection> {
        let m = self.object(v, loc, &["impact_assessment", "mitigation_strategies"])?;
        Some(EthicsSection {
            impact_assessment: self.text(m, "impact_assessment", loc),
            mitigation_strategies: self.strings(m, "mitigation_strategies", loc),
        })
    }

    fn evaluation(&mut self, v: &Value, loc: &SourceLocation) -> Option<EvaluationSection> {
        const KEYS: &[&str] =
            &["model_validation", "hardware_verification", "algorithmic_correctness", "operational_stability", "reproducibility"];
        let m = self.object(v, loc, KEYS)?;
        Some(EvaluationSection {
            model_validation: self.text(m, "model_validation", loc),
            hardware_verification: self.text(m, "hardware_verification", loc),
            algorithmic_correctness: self.text(m, "algorithmic_correctness", loc),
            operational_stability: self.text(m, "operational_stability", loc),
            reproducibility: self.text(m, "reproducibility", loc),
        })
    }

    fn assurability(&mut self, v: &Value, loc: &SourceLocation) -> Option<AssurabilitySection> {
        const KEYS: &[&str] = &[
            "certifications",
            "standards_compliance",
            "audit_reports",
            "evaluation_partners",
            "physical_security",
            "cybersecurity",
            "fail_safe",
            "recovery_protocols",
            "training_programs",
            "support_resources",
            "assurance_case_ref",
        ];
        let m = self.object(v, loc, KEYS)?;
        Some(AssurabilitySection {
            certifications: self.strings(m, "certifications", loc),
            standards_compliance: self.text(m, "standards_compliance", loc),
            audit_reports: self.text(m, "audit_reports", loc),
            evaluation_partners: self.strings(m, "evaluation_partners", loc),
            physical_security: self.text(m, "physical_security", loc),
            cybersecurity: self.text(m, "cybersecurity", loc),
            fail_safe: self.text(m, "fail_safe", loc),
            recovery_protocols: self.text(m, "recovery_protocols", loc),
            training_programs: self.text(m, "training_programs", loc),
            support_resources: self.text(m, "support_resources", loc),
            assurance_case_ref: self.opt_text(m, "assurance_case_ref", loc),
        })
    }

    fn supplementary(&mut self, v: &Value, loc: &SourceLocation) -> Option<SupplementarySection> {
        let m = self.object(v, loc, &["references", "supporting_doc_refs"])?;
        Some(SupplementarySection {
            references: self.strings(m, "references", loc),
            supporting_doc_refs: self.strings(m, "supporting_doc_refs", loc),
        })
    }
}
