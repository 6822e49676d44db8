//! Typed model of a quantum technology model card.
//!
//! Struct fields are declared in canonical document order; serializing a
//! [`ModelCard`] with `serde_json` yields the canonical key order directly
//! (sections in fixed order, maps sorted through `BTreeMap`).

mod completeness;
mod refs;
pub mod sample;

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use crate::fmea::{FmeaLevel, FmeaRow};
use crate::units::{Quantity, UnitExpr};
pub use completeness::completeness;
pub use refs::{collect_refs, EdgeKind, RefEdge, RefGraph, RefTarget};

/// Schema version written by this toolkit.
pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardError {
    #[error("invalid entity details: {0}")]
    InvalidEntityDetails(String),
}

macro_rules! string_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!(
                        "expected one of {}",
                        [$($text),+].join(", ")
                    )),
                }
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ::serde::Serialize for $name {
            fn serialize<S: ::serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(self.as_str())
            }
        }
    };
}
pub(crate) use string_enum;

string_enum!(EntityType {
    Computation => "computation",
    Communication => "communication",
    Sensing => "sensing",
    Simulation => "simulation",
    Component => "component",
    Other => "other",
});

string_enum!(DocumentKind {
    Publication => "publication",
    TechnicalReport => "technical_report",
    Drawing => "drawing",
    Patent => "patent",
    Dataset => "dataset",
    Fmea => "fmea",
    AssuranceCase => "assurance_case",
    Other => "other",
});

string_enum!(EntanglementKind {
    Ghz => "GHZ",
    W => "W",
    TwoModeSqueezedVacuum => "two_mode_squeezed_vacuum",
    Bell => "bell",
    Other => "other",
});

string_enum!(ErrorClass {
    Quantum => "quantum",
    Classical => "classical",
});

string_enum!(UncertaintyKind {
    StdDev => "std_dev",
    Variance => "variance",
    ConfidenceInterval => "confidence_interval",
    None => "none",
});

/// A value that is a quantity when its text parses as one, free text otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantityOrText {
    Quantity(Quantity),
    Text(String),
}

impl QuantityOrText {
    pub fn classify(text: &str) -> Self {
        match Quantity::parse(text) {
            Ok(q) => QuantityOrText::Quantity(q),
            Err(_) => QuantityOrText::Text(text.to_string()),
        }
    }

    pub fn as_quantity(&self) -> Option<&Quantity> {
        match self {
            QuantityOrText::Quantity(q) => Some(q),
            QuantityOrText::Text(_) => None,
        }
    }
}

impl fmt::Display for QuantityOrText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantityOrText::Quantity(q) => write!(f, "{q}"),
            QuantityOrText::Text(t) => f.write_str(t),
        }
    }
}

impl Serialize for QuantityOrText {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A short statement subject to the word limit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Statement18 {
    pub text: String,
}

impl Statement18 {
    pub const WORD_LIMIT: usize = 18;

    pub fn new(text: impl Into<String>) -> Self {
        Statement18 { text: text.into() }
    }

    pub fn word_count(&self) -> usize {
        crate::lint::count_words(&self.text)
    }

    pub fn is_compliant(&self) -> bool {
        self.word_count() <= Self::WORD_LIMIT
    }
}

impl Serialize for Statement18 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.text)
    }
}

pub fn parse_release_date(text: &str) -> Result<NaiveDate, CardError> {
    let ok_shape = text.len() == 10
        && text.bytes().enumerate().all(|(i, b)| if i == 4 || i == 7 { b == b'-' } else { b.is_ascii_digit() });
    if !ok_shape {
        return Err(CardError::InvalidEntityDetails(format!("release date \"{text}\" is not YYYY-MM-DD")));
    }
    NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .map_err(|_| CardError::InvalidEntityDetails(format!("release date \"{text}\" is not a calendar date")))
}

fn serialize_date<S: Serializer>(date: &NaiveDate, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(&date.format("%Y-%m-%d"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelCard {
    #[serde(rename = "qtmc_version")]
    pub schema_version: String,
    pub entity: EntityDetails,
    pub intended_use: IntendedUse,
    pub factors: Option<FactorsBlock>,
    pub quantum_spec: QuantumSpec,
    #[serde(rename = "errors")]
    pub errors_section: ErrorsSection,
    pub performance: PerformanceSection,
    pub ethics: EthicsSection,
    pub evaluation: EvaluationSection,
    pub assurability: AssurabilitySection,
    pub supplementary: SupplementarySection,
    /// `x-` prefixed keys carried verbatim at the document root.
    #[serde(flatten)]
    pub extensions: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntityDetails {
    pub name: String,
    pub version: String,
    pub entity_type: EntityType,
    pub purpose: Statement18,
    pub developer: Vec<String>,
    #[serde(serialize_with = "serialize_date")]
    pub release_date: NaiveDate,
    pub supporting_documents: Vec<SupportingDocument>,
    pub citation: String,
    pub license: Option<String>,
    pub feedback_contact: String,
}

impl EntityDetails {
    /// Minimal entity details; remaining fields start empty.
    pub fn new(name: &str, version: &str, entity_type: EntityType, release_date: &str) -> Result<Self, CardError> {
        let entity = EntityDetails {
            name: name.to_string(),
            version: version.to_string(),
            entity_type,
            purpose: Statement18::default(),
            developer: Vec::new(),
            release_date: parse_release_date(release_date)?,
            supporting_documents: Vec::new(),
            citation: String::new(),
            license: None,
            feedback_contact: String::new(),
        };
        entity.validate()?;
        Ok(entity)
    }

    pub fn validate(&self) -> Result<(), CardError> {
        if self.name.trim().is_empty() {
            return Err(CardError::InvalidEntityDetails("name is empty".into()));
        }
        if self.version.trim().is_empty() {
            return Err(CardError::InvalidEntityDetails("version is empty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for doc in &self.supporting_documents {
            if doc.id.is_empty() || !seen.insert(doc.id.as_str()) {
                return Err(CardError::InvalidEntityDetails(format!(
                    "supporting document id \"{}\" is empty or repeated",
                    doc.id
                )));
            }
        }
        Ok(())
    }

    pub fn document(&self, id: &str) -> Option<&SupportingDocument> {
        self.supporting_documents.iter().find(|d| d.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportingDocument {
    pub id: String,
    pub title: String,
    pub kind: DocumentKind,
    pub locator: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IntendedUse {
    pub use_cases: Vec<UseCase>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct UseCase {
    pub id: u32,
    pub statement: Statement18,
    pub taxonomy: Taxonomy,
    pub users: Vec<String>,
    pub classical_alternatives: Vec<String>,
    pub quantum_alternatives: Vec<String>,
    pub out_of_scope: Vec<String>,
    pub limitations: Vec<Limitation>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Taxonomy {
    pub classification: String,
    pub categories: Vec<String>,
    pub family: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Limitation {
    /// `UC<n>-L<m>`.
    pub id: String,
    pub text: String,
}

impl Limitation {
    /// Splits `UC<n>-L<m>` into `(n, m)`.
    pub fn parse_id(id: &str) -> Option<(u32, u32)> {
        let rest = id.strip_prefix("UC")?;
        let (uc, lim) = rest.split_once("-L")?;
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && !s.starts_with('0');
        if !digits(uc) || !digits(lim) {
            return None;
        }
        Some((uc.parse().ok()?, lim.parse().ok()?))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FactorsBlock {
    pub ml_components_present: bool,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub name: String,
    pub description: String,
    pub relevant_metrics: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct QuantumSpec {
    pub system_architecture: SystemArchitecture,
    pub hardware: HardwareSpec,
    pub interface: InterfaceSpec,
    pub layer_model: Option<Vec<Layer>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub layer_name: String,
    pub description: String,
}

/// Free text with optional supporting-document references.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AnnotatedText {
    pub text: String,
    pub doc_refs: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SystemArchitecture {
    pub processes_algorithms: Vec<String>,
    pub circuit_design: AnnotatedText,
    pub physical_entanglement: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct HardwareSpec {
    pub carriers: Vec<Carrier>,
    pub local_coherence: Vec<LocalCoherence>,
    pub nonlocal_coherence: Vec<EntanglementResource>,
    pub entanglement_strategy: String,
    pub measurement: Vec<Detector>,
    pub interconnects: Vec<Interconnect>,
    pub control: Vec<ControlChannel>,
    pub control_feedback: String,
    pub operational_env: Vec<EnvCondition>,
    pub non_operational_env: Vec<HazardEnvironment>,
    pub hardware_requirements: Vec<String>,
}

impl HardwareSpec {
    pub fn carrier(&self, id: u32) -> Option<&Carrier> {
        self.carriers.iter().find(|c| c.id == id)
    }
}

/// A physical component holding functionalised non-classical information.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Carrier {
    pub id: u32,
    pub name: String,
    pub kind: String,
    /// Number of instances of this component.
    pub count: u32,
    pub circuit_parameters: BTreeMap<String, Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LocalCoherence {
    pub carrier_ref: u32,
    pub description: String,
    pub states: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementResource {
    pub id: String,
    pub kind: EntanglementKind,
    pub carrier_refs: Vec<u32>,
    pub parameters: BTreeMap<String, QuantityOrText>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Detector {
    pub id: String,
    pub detector_type: String,
    pub efficiency: Quantity,
    pub dead_time: Quantity,
    pub false_positive_rate: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interconnect {
    pub id: String,
    pub medium: String,
    pub endpoints: [u32; 2],
    pub parameters: BTreeMap<String, Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ControlChannel {
    pub carrier_ref: u32,
    pub mechanism: String,
    pub decoherence_impact: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EnvCondition {
    pub parameter: String,
    pub min: Option<Quantity>,
    pub max: Option<Quantity>,
    pub note: String,
}

/// An environment that can damage the quantum information.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct HazardEnvironment {
    pub environment: String,
    pub mechanism: String,
    pub parameters: BTreeMap<String, Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InterfaceSpec {
    pub data_type: String,
    pub data_handling: String,
    pub potential_issues: Vec<String>,
    pub assumptions: Vec<String>,
    pub requirements: Vec<String>,
    pub software_requirements: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ErrorsSection {
    pub error_sources: Vec<ErrorSource>,
    pub fmea_document_ref: Option<String>,
    pub fmea_rows: Option<Vec<FmeaRow>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorSource {
    pub id: String,
    pub source: String,
    pub classification: ErrorClass,
    pub affected_phenomena: Vec<String>,
    pub impact: Impact,
    pub mitigation: Vec<String>,
    pub residual: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Impact {
    pub text: String,
    pub estimate: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PerformanceSection {
    pub metrics: Vec<MetricReport>,
    pub unreported_metrics: Vec<String>,
}

impl PerformanceSection {
    pub fn metric(&self, name: &str) -> Option<&MetricReport> {
        self.metrics.iter().find(|m| m.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub name: String,
    pub purpose: String,
    pub use_case_refs: Vec<u32>,
    pub definition: MetricDefinition,
    pub risk: Option<RiskScore>,
    pub measurement: Measurement,
    pub statistics: Statistics,
    pub benchmarks: Vec<String>,
    pub fundamental_limit: Option<QuantityOrText>,
    pub limitations_addressed: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MetricDefinition {
    pub formula_text: String,
    pub unit: UnitExpr,
    pub inputs: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Measurement {
    pub method: String,
    pub conditions: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Statistics {
    pub value: Quantity,
    pub uncertainty_kind: UncertaintyKind,
    pub n_samples: Option<u64>,
    pub method: String,
}

/// Severity, occurrence and detection scores with their stored product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RiskScore {
    pub severity: u32,
    pub occurrence: u32,
    pub detection: u32,
    pub rpn: u32,
}

impl RiskScore {
    pub fn new(severity: u32, occurrence: u32, detection: u32) -> Result<Self, crate::fmea::FmeaError> {
        let rpn = crate::fmea::rpn(severity, occurrence, detection)?;
        Ok(RiskScore { severity, occurrence, detection, rpn })
    }

    /// Scores are in range and the stored rpn equals their product.
    pub fn is_consistent(&self) -> bool {
        crate::fmea::rpn(self.severity, self.occurrence, self.detection) == Ok(self.rpn)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EthicsSection {
    pub impact_assessment: String,
    pub mitigation_strategies: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EvaluationSection {
    pub model_validation: String,
    pub hardware_verification: String,
    pub algorithmic_correctness: String,
    pub operational_stability: String,
    pub reproducibility: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AssurabilitySection {
    pub certifications: Vec<String>,
    pub standards_compliance: String,
    pub audit_reports: String,
    pub evaluation_partners: Vec<String>,
    pub physical_security: String,
    pub cybersecurity: String,
    pub fail_safe: String,
    pub recovery_protocols: String,
    pub training_programs: String,
    pub support_resources: String,
    pub assurance_case_ref: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SupplementarySection {
    pub references: Vec<String>,
    pub supporting_doc_refs: Vec<String>,
}

impl ModelCard {
    pub fn carrier_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.quantum_spec.hardware.carriers.iter().map(|c| c.id)
    }
}

/// Scaffolds a card around validated entity details with every other section
/// present and empty.
pub fn new_card(entity: EntityDetails) -> Result<ModelCard, CardError> {
    entity.validate()?;
    Ok(ModelCard {
        schema_version: SCHEMA_VERSION.to_string(),
        entity,
        intended_use: IntendedUse::default(),
        factors: None,
        quantum_spec: QuantumSpec::default(),
        errors_section: ErrorsSection::default(),
        performance: PerformanceSection::default(),
        ethics: EthicsSection::default(),
        evaluation: EvaluationSection::default(),
        assurability: AssurabilitySection::default(),
        supplementary: SupplementarySection::default(),
        extensions: BTreeMap::new(),
    })
}
