use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde_json::Value;

use super::{sample, ModelCard};

/// Object-valued fields whose keys are user data rather than schema.
const MAP_FIELDS: [&str; 2] = ["circuit_parameters", "parameters"];

/// Fraction of schema leaf fields that hold a non-empty value somewhere in the
/// card. List elements share one schema path, so the denominator is fixed and
/// filling an empty field can never lower the score.
pub fn completeness(card: &ModelCard) -> f64 {
    let schema = schema_leaves();
    let filled = leaf_paths(card, true);
    let hit = filled.iter().filter(|p| schema.contains(*p)).count();
    hit as f64 / schema.len() as f64
}

pub(crate) fn schema_leaves() -> &'static BTreeSet<String> {
    static LEAVES: OnceLock<BTreeSet<String>> = OnceLock::new();
    LEAVES.get_or_init(|| leaf_paths(&sample::golden_card(), false))
}

fn leaf_paths(card: &ModelCard, only_filled: bool) -> BTreeSet<String> {
    let value = serde_json::to_value(card).expect("model cards always serialize");
    let mut out = BTreeSet::new();
    let Value::Object(root) = &value else { unreachable!() };
    for (key, v) in root {
        if key.starts_with("x-") {
            out.insert("x-*".to_string());
        } else {
            walk(v, key.clone(), only_filled, &mut out);
        }
    }
    out
}

fn walk(value: &Value, path: String, only_filled: bool, out: &mut BTreeSet<String>) {
    let leaf_name = path.rsplit('/').next().unwrap_or("");
    match value {
        Value::Object(map) if MAP_FIELDS.contains(&leaf_name) => {
            if !only_filled || !map.is_empty() {
                out.insert(path);
            }
        }
        Value::Object(map) => {
            for (k, v) in map {
                walk(v, format!("{path}/{k}"), only_filled, out);
            }
        }
        Value::Array(items) => {
            for v in items {
                walk(v, format!("{path}/*"), only_filled, out);
            }
        }
        Value::Null => {
            if !only_filled {
                out.insert(path);
            }
        }
        // An empty metric unit states that the metric is dimensionless.
        Value::String(s) => {
            if !only_filled || !s.trim().is_empty() || leaf_name == "unit" {
                out.insert(path);
            }
        }
        Value::Bool(_) | Value::Number(_) => {
            out.insert(path);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card_model::{new_card, EntityDetails, EntityType};

    fn scaffold() -> ModelCard {
        let e = EntityDetails::new("Acme QPU One", "1.2.0", EntityType::Computation, "2025-03-14").unwrap();
        new_card(e).unwrap()
    }

    #[test]
    fn golden_card_populates_every_leaf() {
        fn assert_full(v: &Value, path: &str) {
            match v {
                Value::Null => panic!("{path} is null"),
                Value::String(s) => assert!(!s.trim().is_empty() || path.ends_with("/unit"), "{path} is empty"),
                Value::Array(a) => {
                    assert!(!a.is_empty(), "{path} is an empty list");
                    a.iter().enumerate().for_each(|(i, x)| assert_full(x, &format!("{path}/{i}")));
                }
                Value::Object(m) => {
                    assert!(!m.is_empty(), "{path} is an empty map");
                    m.iter().for_each(|(k, x)| assert_full(x, &format!("{path}/{k}")));
                }
                _ => {}
            }
        }
        let card = sample::golden_card();
        assert_full(&serde_json::to_value(&card).unwrap(), "");
        assert_eq!(completeness(&card), 1.0);
    }

    #[test]
    fn scaffold_is_partial() {
        let card = scaffold();
        let c = completeness(&card);
        assert!(c > 0.0 && c < 1.0, "{c}");
        // name, version, entity_type, release_date, qtmc_version
        assert_eq!(c, 5.0 / schema_leaves().len() as f64);
        assert_eq!(completeness(&card.clone()), c);
    }

    #[test]
    fn filling_a_leaf_never_lowers_the_score() {
        let mut card = scaffold();
        let before = completeness(&card);
        card.ethics.impact_assessment = "No personal data is processed".into();
        let mid = completeness(&card);
        assert!(mid > before);
        card.entity.developer.push("Acme".into());
        assert!(completeness(&card) > mid);
    }
}
