mod common;

use common::{quantity, random_card, rng, shuffled_json, unit_text};
use proptest::prelude::*;
use qtmc::card_model::sample::golden_card;
use qtmc::card_parser::{card_to_value, parse_card, parse_card_lenient, serialize_card};
use qtmc::fmea::{rpn, top_risks, FmeaLevel, FmeaRow};
use qtmc::identity::{content_hash, slug, Pid};
use qtmc::lint::{lint, LintConfig};
use qtmc::units::{normalize, Quantity, UnitExpr};

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn fmea_row() -> impl Strategy<Value = FmeaRow> {
    (0u32..6, 0usize..3, 1u32..=10, 1u32..=10, 1u32..=10).prop_map(|(id, level, s, o, d)| {
        let level = FmeaLevel::ALL[level % FmeaLevel::ALL.len()];
        FmeaRow::new(format!("F{id}"), level, 1, "mode", "effect", (s, o, d), "mitigation").unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quantity_text_round_trips(seed in any::<u64>()) {
        let q = quantity(&mut rng(seed));
        prop_assert_eq!(Quantity::parse(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let n = normalize(&quantity(&mut rng(seed)));
        let again = normalize(&n);
        prop_assert_eq!(again.dimension(), n.dimension());
        prop_assert!(close(again.value, n.value));
    }

    #[test]
    fn normalize_preserves_dimension(seed in any::<u64>()) {
        let q = quantity(&mut rng(seed));
        prop_assert_eq!(normalize(&q).dimension(), q.dimension());
    }

    #[test]
    fn dimension_is_a_homomorphism(a in 0u64..1000, b in 0u64..1000) {
        let ua = UnitExpr::parse(unit_text(&mut rng(a))).unwrap();
        let ub = UnitExpr::parse(unit_text(&mut rng(b.wrapping_add(7919)))).unwrap();
        if let Ok(p) = ua.product(&ub) {
            prop_assert_eq!(p.dimension(), ua.dimension() + ub.dimension());
        }
    }

    #[test]
    fn rpn_is_the_product(s in 1u32..=10, o in 1u32..=10, d in 1u32..=10) {
        prop_assert_eq!(rpn(s, o, d), Ok(s * o * d));
    }

    #[test]
    fn rpn_rejects_out_of_range(s in 11u32..100, o in 1u32..=10) {
        prop_assert!(rpn(s, o, 1).is_err());
        prop_assert!(rpn(o, 0, 1).is_err());
    }

    #[test]
    fn top_risks_matches_a_full_sort(rows in proptest::collection::vec(fmea_row(), 0..12), n in 0usize..15) {
        let top = top_risks(&rows, n);
        let mut oracle = rows.clone();
        oracle.sort_by(|a, b| b.rpn.cmp(&a.rpn).then(b.severity.cmp(&a.severity)).then(a.id.cmp(&b.id)).then(a.cmp(b)));
        oracle.truncate(n);
        prop_assert_eq!(top, oracle);
    }

    #[test]
    fn lint_is_deterministic_and_sorted(seed in any::<u64>()) {
        let card = random_card(&mut rng(seed));
        let first = lint(&card, &LintConfig::default()).unwrap();
        prop_assert_eq!(&first, &lint(&card, &LintConfig::default()).unwrap());
        for w in first.windows(2) {
            prop_assert!((&w[0].location.path, w[0].rule_id) <= (&w[1].location.path, w[1].rule_id));
        }
    }

    #[test]
    fn key_order_changes_nothing(seed in any::<u64>()) {
        let mut r = rng(seed);
        let card = random_card(&mut r);
        let text = shuffled_json(&card_to_value(&card), &mut r);
        let parsed = parse_card(text.as_bytes()).card.unwrap();
        prop_assert_eq!(content_hash(&parsed), content_hash(&card));
        prop_assert_eq!(
            lint(&parsed, &LintConfig::default()).unwrap(),
            lint(&card, &LintConfig::default()).unwrap()
        );
    }

    #[test]
    fn parser_never_panics_on_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
        let _ = parse_card_lenient(&bytes);
    }

    #[test]
    fn parser_never_panics_on_truncation(cut in 0usize..4000) {
        let bytes = serialize_card(&golden_card());
        let report = parse_card(&bytes[..cut.min(bytes.len())]);
        prop_assert!(report.card.is_some() || !report.problems.is_empty());
    }

    #[test]
    fn slug_is_idempotent_and_ascii(text in "\\PC{0,40}") {
        if let Ok(s) = slug(&text) {
            prop_assert!(s.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-'));
            prop_assert!(!s.starts_with('-') && !s.ends_with('-') && !s.contains("--"));
            prop_assert_eq!(slug(&s).unwrap(), s);
        }
    }

    #[test]
    fn pid_text_round_trips(name in "[a-z][a-z0-9]{0,8}", major in 0u32..5, minor in 0u32..20, frag in proptest::option::of("(/[a-z0-9_]{1,6}){1,3}")) {
        let text = match &frag {
            Some(f) => format!("{name}@{major}.{minor}.0#{f}"),
            None => format!("{name}@{major}.{minor}.0"),
        };
        let pid: Pid = text.parse().unwrap();
        prop_assert_eq!(pid.to_string(), text);
    }
}
