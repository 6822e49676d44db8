//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use chrono::NaiveDate;
use qtmc::card_model::sample::golden_card;
use qtmc::card_model::*;
use qtmc::units::{format_number, Quantity, UnitExpr};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde_json::Value;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

const TEXTS: &[&str] = &[
    "",
    " ",
    "plain words",
    "Transmon qubit array",
    "naïve façade über",
    "quote \" and backslash \\",
    "line\nbreak",
    "tab\tseparated",
    "pipes | and <angle> & amps",
    "🧪 lab emoji",
    "  padded  ",
    "x-not-an-extension",
    "ends with punctuation!",
];

const UNITS: &[&str] = &[
    "", "s", "µs", "ns", "ms", "Hz", "kHz", "MHz", "GHz", "mK", "K", "T", "µT", "dB", "kg", "g", "mg", "J", "mN", "W",
    "mW", "V", "Ω", "kΩ", "A", "mol", "cd", "rad", "Pa", "N", "C", "F", "pF", "S", "Wb", "H", "bit", "count",
    "m·s^-1", "1/s", "km/s", "m^2", "kg·m^2", "s^-1·m",
];

pub fn text(r: &mut ChaCha8Rng) -> String {
    TEXTS.choose(r).unwrap().to_string()
}

fn texts(r: &mut ChaCha8Rng) -> Vec<String> {
    (0..r.gen_range(0..3)).map(|_| text(r)).collect()
}

/// Prose that never parses as a quantity.
fn prose(r: &mut ChaCha8Rng) -> String {
    ["Coherence limited", "see DOC-X", "unbounded", "T1-limited fidelity"].choose(r).unwrap().to_string()
}

pub fn number(r: &mut ChaCha8Rng) -> f64 {
    let mantissa: f64 = r.gen_range(-9.99..9.99);
    let exp: i32 = r.gen_range(-20..20);
    let v = mantissa * 10f64.powi(exp);
    // Parse the rendered text so the generated value is one the parser can produce.
    format_number(v).parse().unwrap()
}

pub fn unit_text(r: &mut ChaCha8Rng) -> &'static str {
    UNITS.choose(r).unwrap()
}

pub fn quantity(r: &mut ChaCha8Rng) -> Quantity {
    let unit = UnitExpr::parse(unit_text(r)).unwrap();
    let uncertainty = r.gen_bool(0.5).then(|| number(r).abs());
    Quantity::new(number(r), uncertainty, unit)
}

fn qmap(r: &mut ChaCha8Rng) -> BTreeMap<String, Quantity> {
    (0..r.gen_range(0..3)).map(|i| (format!("{}{i}", text(r).trim()), quantity(r))).collect()
}

fn quantity_or_text(r: &mut ChaCha8Rng) -> QuantityOrText {
    if r.gen_bool(0.5) {
        QuantityOrText::Quantity(quantity(r))
    } else {
        QuantityOrText::Text(prose(r))
    }
}

fn pick<T: Copy>(r: &mut ChaCha8Rng, all: &[T]) -> T {
    *all.choose(r).unwrap()
}

fn ids(r: &mut ChaCha8Rng) -> Vec<u32> {
    (0..r.gen_range(0..3)).map(|_| r.gen_range(1..6)).collect()
}

fn date(r: &mut ChaCha8Rng) -> NaiveDate {
    NaiveDate::from_ymd_opt(r.gen_range(1990..2100), r.gen_range(1..=12), r.gen_range(1..=28)).unwrap()
}

fn json_value(r: &mut ChaCha8Rng, depth: u32) -> Value {
    match r.gen_range(0..if depth == 0 { 4 } else { 6 }) {
        0 => Value::Null,
        1 => Value::Bool(r.gen()),
        2 => Value::from(r.gen_range(-1000i64..1000)),
        3 => Value::String(text(r)),
        4 => Value::Array((0..r.gen_range(0..3)).map(|_| json_value(r, depth - 1)).collect()),
        _ => Value::Object((0..r.gen_range(0..3)).map(|i| (format!("k{i}"), json_value(r, depth - 1))).collect()),
    }
}

/// A schema-conforming card with every field drawn at random. It need not be
/// lint-clean.
pub fn random_card(r: &mut ChaCha8Rng) -> ModelCard {
    let mut c = golden_card();
    let e = &mut c.entity;
    e.name = text(r);
    e.version = format!("{}.{}.{}", r.gen_range(0..4), r.gen_range(0..20), r.gen_range(0..100));
    e.entity_type = pick(r, EntityType::ALL);
    e.purpose = Statement18::new(text(r));
    e.developer = texts(r);
    e.release_date = date(r);
    e.supporting_documents = (0..r.gen_range(0..4))
        .map(|i| SupportingDocument { id: format!("DOC-{i}"), title: text(r), kind: pick(r, DocumentKind::ALL), locator: text(r) })
        .collect();
    e.citation = text(r);
    e.license = r.gen_bool(0.5).then(|| text(r));
    e.feedback_contact = text(r);

    c.intended_use.use_cases = (0..r.gen_range(0..4))
        .map(|i| UseCase {
            id: i + 1,
            statement: Statement18::new(text(r)),
            taxonomy: Taxonomy { classification: text(r), categories: texts(r), family: texts(r) },
            users: texts(r),
            classical_alternatives: texts(r),
            quantum_alternatives: texts(r),
            out_of_scope: texts(r),
            limitations: (0..r.gen_range(0..3)).map(|j| Limitation { id: format!("UC{}-L{}", i + 1, j + 1), text: text(r) }).collect(),
        })
        .collect();

    c.factors = r.gen_bool(0.7).then(|| FactorsBlock {
        ml_components_present: r.gen(),
        factors: (0..r.gen_range(0..3))
            .map(|_| Factor { name: text(r), description: text(r), relevant_metrics: texts(r) })
            .collect(),
    });

    let qs = &mut c.quantum_spec;
    qs.system_architecture = SystemArchitecture {
        processes_algorithms: texts(r),
        circuit_design: AnnotatedText { text: text(r), doc_refs: texts(r) },
        physical_entanglement: text(r),
    };
    let hw = &mut qs.hardware;
    hw.carriers = (0..r.gen_range(0..5))
        .map(|i| Carrier { id: i + 1, name: text(r), kind: text(r), count: r.gen_range(1..100), circuit_parameters: qmap(r) })
        .collect();
    hw.local_coherence = (0..r.gen_range(0..3))
        .map(|_| LocalCoherence { carrier_ref: r.gen_range(1..6), description: text(r), states: texts(r) })
        .collect();
    hw.nonlocal_coherence = (0..r.gen_range(0..3))
        .map(|i| EntanglementResource {
            id: format!("ENT{i}"),
            kind: pick(r, EntanglementKind::ALL),
            carrier_refs: ids(r),
            parameters: (0..r.gen_range(0..3)).map(|k| (format!("p{k}"), quantity_or_text(r))).collect(),
        })
        .collect();
    hw.entanglement_strategy = text(r);
    hw.measurement = (0..r.gen_range(0..3))
        .map(|i| Detector {
            id: format!("DET{i}"),
            detector_type: text(r),
            efficiency: quantity(r),
            dead_time: quantity(r),
            false_positive_rate: quantity(r),
        })
        .collect();
    hw.interconnects = (0..r.gen_range(0..3))
        .map(|i| Interconnect {
            id: format!("IC{i}"),
            medium: text(r),
            endpoints: [r.gen_range(1..6), r.gen_range(1..6)],
            parameters: qmap(r),
        })
        .collect();
    hw.control = (0..r.gen_range(0..3))
        .map(|_| ControlChannel { carrier_ref: r.gen_range(1..6), mechanism: text(r), decoherence_impact: text(r) })
        .collect();
    hw.control_feedback = text(r);
    hw.operational_env = (0..r.gen_range(0..3))
        .map(|_| EnvCondition {
            parameter: text(r),
            min: r.gen_bool(0.5).then(|| quantity(r)),
            max: r.gen_bool(0.5).then(|| quantity(r)),
            note: text(r),
        })
        .collect();
    hw.non_operational_env = (0..r.gen_range(0..2))
        .map(|_| HazardEnvironment { environment: text(r), mechanism: text(r), parameters: qmap(r) })
        .collect();
    hw.hardware_requirements = texts(r);
    qs.interface = InterfaceSpec {
        data_type: text(r),
        data_handling: text(r),
        potential_issues: texts(r),
        assumptions: texts(r),
        requirements: texts(r),
        software_requirements: texts(r),
    };
    qs.layer_model = r.gen_bool(0.5).then(|| {
        (0..r.gen_range(0..3)).map(|_| Layer { layer_name: text(r), description: text(r) }).collect()
    });

    let es = &mut c.errors_section;
    es.error_sources = (0..r.gen_range(0..3))
        .map(|i| ErrorSource {
            id: format!("ERR{i}"),
            source: text(r),
            classification: pick(r, ErrorClass::ALL),
            affected_phenomena: texts(r),
            impact: Impact { text: text(r), estimate: r.gen_bool(0.5).then(|| quantity(r)) },
            mitigation: texts(r),
            residual: text(r),
        })
        .collect();
    es.fmea_document_ref = r.gen_bool(0.5).then(|| format!("DOC-{}", r.gen_range(0..4)));
    es.fmea_rows = r.gen_bool(0.6).then(|| {
        (0..r.gen_range(0..5))
            .map(|i| FmeaRow {
                id: format!("F{i}"),
                level: pick(r, FmeaLevel::ALL),
                component_ref: r.gen_range(1..6),
                failure_mode: text(r),
                effect: text(r),
                severity: r.gen_range(0..12),
                occurrence: r.gen_range(0..12),
                detection: r.gen_range(0..12),
                rpn: r.gen_range(0..1500),
                mitigation: text(r),
            })
            .collect()
    });

    c.performance.metrics = (0..r.gen_range(0..3))
        .map(|i| MetricReport {
            name: format!("metric {i}"),
            purpose: text(r),
            use_case_refs: ids(r),
            definition: MetricDefinition {
                formula_text: text(r),
                unit: UnitExpr::parse(unit_text(r)).unwrap(),
                inputs: texts(r),
            },
            risk: r.gen_bool(0.5).then(|| RiskScore {
                severity: r.gen_range(0..12),
                occurrence: r.gen_range(0..12),
                detection: r.gen_range(0..12),
                rpn: r.gen_range(0..1500),
            }),
            measurement: Measurement { method: text(r), conditions: text(r) },
            statistics: Statistics {
                value: quantity(r),
                uncertainty_kind: pick(r, UncertaintyKind::ALL),
                n_samples: r.gen_bool(0.5).then(|| r.gen_range(0..100_000)),
                method: text(r),
            },
            benchmarks: texts(r),
            fundamental_limit: r.gen_bool(0.5).then(|| quantity_or_text(r)),
            limitations_addressed: texts(r),
        })
        .collect();
    c.performance.unreported_metrics = texts(r);

    c.ethics = EthicsSection { impact_assessment: text(r), mitigation_strategies: texts(r) };
    c.evaluation = EvaluationSection {
        model_validation: text(r),
        hardware_verification: text(r),
        algorithmic_correctness: text(r),
        operational_stability: text(r),
        reproducibility: text(r),
    };
    let a = &mut c.assurability;
    a.certifications = texts(r);
    a.standards_compliance = text(r);
    a.evaluation_partners = texts(r);
    a.cybersecurity = text(r);
    a.assurance_case_ref = r.gen_bool(0.5).then(|| text(r));
    c.supplementary = SupplementarySection { references: texts(r), supporting_doc_refs: texts(r) };
    c.extensions = (0..r.gen_range(0..3)).map(|i| (format!("x-ext{i}"), json_value(r, 2))).collect();
    c
}

/// Writes `value` as JSON with every object's keys in a random order and
/// random insignificant whitespace.
pub fn shuffled_json(value: &Value, r: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    write_shuffled(value, r, &mut out);
    out
}

fn ws(r: &mut ChaCha8Rng, out: &mut String) {
    out.push_str([" ", "", "\n  ", "\t"].choose(r).unwrap());
}

fn write_shuffled(value: &Value, r: &mut ChaCha8Rng, out: &mut String) {
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.shuffle(r);
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                ws(r, out);
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push(':');
                ws(r, out);
                write_shuffled(&map[k], r, out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                ws(r, out);
                write_shuffled(v, r, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Time-like units with their factor to seconds, written out by hand.
pub const TIME_UNITS: &[(&str, f64)] = &[("s", 1.0), ("ms", 1e-3), ("µs", 1e-6), ("us", 1e-6), ("ns", 1e-9), ("ks", 1e3)];
/// Frequency units with their factor to s^-1.
pub const RATE_UNITS: &[(&str, f64)] = &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6)];

/// A lint-clean card for registry tests. The first metric ("T1" or "T2")
/// reports `value unit`, with the declared unit adjusted to match.
pub fn registry_card(r: &mut ChaCha8Rng, name: &str, version: &str) -> (ModelCard, Option<(String, f64, bool)>) {
    let mut c = golden_card();
    c.entity.name = name.to_string();
    c.entity.version = version.to_string();
    c.entity.entity_type = pick(r, EntityType::ALL);
    c.entity.purpose = Statement18::new(format!("Purpose of {name}"));
    let classes = ["gate-based quantum computing", "Single-photon detection", "quantum sensing"];
    let categories = ["simulation", "optimisation", "secure communication", "range-estimation"];
    for uc in &mut c.intended_use.use_cases {
        uc.taxonomy.classification = classes.choose(r).unwrap().to_string();
        let k = r.gen_range(0..3);
        uc.taxonomy.categories = categories.choose_multiple(r, k).map(|s| s.to_string()).collect();
    }
    let m = &mut c.performance.metrics[0];
    if r.gen_bool(0.2) {
        m.name = "T2".into();
        return (c, None);
    }
    let rate = r.gen_bool(0.15);
    let (unit, factor) = *if rate { RATE_UNITS } else { TIME_UNITS }.choose(r).unwrap();
    let value = (r.gen_range(1..100_000) as f64) / 100.0;
    m.statistics.value = Quantity::parse(&format!("{value} {unit}")).unwrap();
    m.definition.unit = UnitExpr::parse(unit).unwrap();
    m.fundamental_limit = Some(QuantityOrText::classify(&format!("1 {unit}")));
    let name = m.name.clone();
    (c, Some((name, value * factor, rate)))
}
