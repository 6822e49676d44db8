//! Two-level FMEA tables: risk priority numbers, CSV ingest and carrier
//! coverage.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::card_model::{string_enum, ModelCard};
use crate::diagnostic::{Diagnostic, SourceLocation};
use crate::lint::rules;

/// Lowest and highest admissible score on each FMEA scale.
pub const SCORE_RANGE: std::ops::RangeInclusive<u32> = 1..=10;

/// Exact header line of an FMEA CSV file.
pub const CSV_HEADER: [&str; 9] =
    ["id", "level", "component_ref", "failure_mode", "effect", "severity", "occurrence", "detection", "mitigation"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FmeaError {
    #[error("{name} score {value} is outside 1..10")]
    ScoreOutOfRange { name: &'static str, value: u32 },
    #[error("FMEA header mismatch: expected \"{}\", found \"{found}\"", CSV_HEADER.join(","))]
    HeaderMismatch { found: String },
    #[error("FMEA CSV is not valid UTF-8 CSV: {0}")]
    Malformed(String),
}

/// A row-level problem; the remaining rows are still returned.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct RowError {
    pub line: u64,
    pub reason: String,
}

string_enum!(FmeaLevel {
    Entity => "entity",
    System => "system",
});

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FmeaRow {
    pub id: String,
    pub level: FmeaLevel,
    /// Carrier id the failure mode belongs to.
    pub component_ref: u32,
    pub failure_mode: String,
    pub effect: String,
    pub severity: u32,
    pub occurrence: u32,
    pub detection: u32,
    pub rpn: u32,
    pub mitigation: String,
}

impl FmeaRow {
    /// Builds a row, computing its rpn from the three scores.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: impl Into<String>,
        level: FmeaLevel,
        component_ref: u32,
        failure_mode: impl Into<String>,
        effect: impl Into<String>,
        scores: (u32, u32, u32),
        mitigation: impl Into<String>,
    ) -> Result<Self, FmeaError> {
        let (severity, occurrence, detection) = scores;
        Ok(FmeaRow {
            id: id.into(),
            level,
            component_ref,
            failure_mode: failure_mode.into(),
            effect: effect.into(),
            severity,
            occurrence,
            detection,
            rpn: rpn(severity, occurrence, detection)?,
            mitigation: mitigation.into(),
        })
    }

    pub fn is_consistent(&self) -> bool {
        rpn(self.severity, self.occurrence, self.detection) == Ok(self.rpn)
    }
}

/// Risk priority number `severity × occurrence × detection`.
pub fn rpn(severity: u32, occurrence: u32, detection: u32) -> Result<u32, FmeaError> {
    for (name, value) in [("severity", severity), ("occurrence", occurrence), ("detection", detection)] {
        if !SCORE_RANGE.contains(&value) {
            return Err(FmeaError::ScoreOutOfRange { name, value });
        }
    }
    Ok(severity * occurrence * detection)
}

/// Rows parsed from an FMEA CSV along with the rows that were rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FmeaTable {
    pub rows: Vec<FmeaRow>,
    pub errors: Vec<RowError>,
}

pub fn parse_fmea_csv(bytes: &[u8]) -> Result<FmeaTable, FmeaError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(bytes);
    let header = reader.headers().map_err(|e| FmeaError::Malformed(e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(FmeaError::HeaderMismatch { found: header.iter().collect::<Vec<_>>().join(",") });
    }

    let mut table = FmeaTable::default();
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                table.errors.push(RowError { line, reason: e.to_string() });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        match row_from_record(&record) {
            Ok(row) => table.rows.push(row),
            Err(reason) => table.errors.push(RowError { line, reason }),
        }
    }
    Ok(table)
}

fn row_from_record(record: &csv::StringRecord) -> Result<FmeaRow, String> {
    if record.len() != CSV_HEADER.len() {
        return Err(format!("expected {} fields, found {}", CSV_HEADER.len(), record.len()));
    }
    let field = |i: usize| record[i].trim();
    let id = field(0);
    if id.is_empty() {
        return Err("empty id".into());
    }
    let level: FmeaLevel = field(1).parse().map_err(|e| format!("unknown level \"{}\": {e}", field(1)))?;
    let component_ref = match field(2).parse::<u32>() {
        Ok(n) if n > 0 => n,
        _ => return Err(format!("component_ref \"{}\" is not a positive integer", field(2))),
    };
    let score = |i: usize| -> Result<u32, String> {
        field(i).parse::<u32>().map_err(|_| format!("{} \"{}\" is not an integer", CSV_HEADER[i], field(i)))
    };
    let scores = (score(5)?, score(6)?, score(7)?);
    FmeaRow::new(id, level, component_ref, field(3), field(4), scores, field(8)).map_err(|e| match e {
        FmeaError::ScoreOutOfRange { name, value } => format!("score out of range: {name} {value} is outside 1..10"),
        other => other.to_string(),
    })
}

/// One E-FMEA-COVERAGE finding per (carrier, level) pair without a row and
/// one E-CARRIER-REF finding per row naming an unknown carrier.
pub fn coverage_check(card: &ModelCard, rows: &[FmeaRow]) -> Vec<Diagnostic> {
    let covered: BTreeSet<(u32, FmeaLevel)> = rows.iter().map(|r| (r.component_ref, r.level)).collect();
    let carriers: BTreeSet<u32> = card.carrier_ids().collect();
    let mut out = Vec::new();

    let carriers_loc = SourceLocation::root().key("quantum_spec").key("hardware").key("carriers");
    for (i, carrier) in card.quantum_spec.hardware.carriers.iter().enumerate() {
        for level in FmeaLevel::ALL {
            if !covered.contains(&(carrier.id, *level)) {
                out.push(Diagnostic::error(
                    rules::E_FMEA_COVERAGE,
                    carriers_loc.index(i),
                    format!("carrier {} has no {}-level FMEA row", carrier.id, level),
                ));
            }
        }
    }

    let rows_loc = SourceLocation::root().key("errors").key("fmea_rows");
    for (i, row) in rows.iter().enumerate() {
        if !carriers.contains(&row.component_ref) {
            out.push(Diagnostic::error(
                rules::E_CARRIER_REF,
                rows_loc.index(i).key("component_ref"),
                format!("FMEA row {} references carrier {} which is not declared", row.id, row.component_ref),
            ));
        }
    }
    out
}

/// The `n` highest-risk rows: rpn descending, then severity descending, then
/// id. Remaining ties fall back to full row order so the result depends only
/// on the multiset of rows.
pub fn top_risks(rows: &[FmeaRow], n: usize) -> Vec<FmeaRow> {
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| {
        (Reverse(a.rpn), Reverse(a.severity), &a.id, a).cmp(&(Reverse(b.rpn), Reverse(b.severity), &b.id, b))
    });
    sorted.truncate(n);
    sorted
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "id,level,component_ref,failure_mode,effect,severity,occurrence,detection,mitigation\n";

    #[test]
    fn rpn_examples() {
        assert_eq!(rpn(7, 5, 4), Ok(140));
        assert_eq!(rpn(1, 1, 1), Ok(1));
        assert_eq!(rpn(10, 10, 10), Ok(1000));
        assert_eq!(rpn(11, 1, 1), Err(FmeaError::ScoreOutOfRange { name: "severity", value: 11 }));
        assert!(rpn(1, 0, 1).is_err());
    }

    #[test]
    fn parses_a_row() {
        let csv = format!("{HEADER}F1,entity,1,flux trapping,offset drift,7,5,4,shielding\n");
        let table = parse_fmea_csv(csv.as_bytes()).unwrap();
        assert!(table.errors.is_empty());
        assert_eq!(table.rows.len(), 1);
        let row = &table.rows[0];
        assert_eq!((row.rpn, row.level, row.component_ref), (140, FmeaLevel::Entity, 1));
        assert_eq!(row.mitigation, "shielding");
    }

    #[test]
    fn quoted_fields() {
        let csv = format!("{HEADER}F1,system,2,\"loss, thermal\",\"drift \"\"slow\"\"\",2,3,4,none\n");
        let table = parse_fmea_csv(csv.as_bytes()).unwrap();
        assert_eq!(table.rows[0].failure_mode, "loss, thermal");
        assert_eq!(table.rows[0].effect, "drift \"slow\"");
    }

    #[test]
    fn row_errors_accumulate() {
        let csv = format!(
            "{HEADER}F1,board,1,a,b,7,5,4,m\nF2,entity,1,a,b,0,5,4,m\nF3,system,1,a,b,2,2,2,m\nF4,entity,x,a,b,1,1,1,m\n"
        );
        let table = parse_fmea_csv(csv.as_bytes()).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.errors.len(), 3);
        assert_eq!(table.errors[0].line, 2);
        assert!(table.errors[0].reason.contains("unknown level"));
        assert_eq!(table.errors[1].line, 3);
        assert!(table.errors[1].reason.contains("score out of range"));
    }

    #[test]
    fn header_must_match() {
        let err = parse_fmea_csv(b"id,level,component\nF1,entity,1\n").unwrap_err();
        assert!(matches!(err, FmeaError::HeaderMismatch { .. }));
    }

    fn row(id: &str, level: FmeaLevel, component: u32, scores: (u32, u32, u32)) -> FmeaRow {
        FmeaRow::new(id, level, component, "mode", "effect", scores, "mitigation").unwrap()
    }

    #[test]
    fn coverage_examples() {
        let mut card = crate::card_model::sample::golden_card();
        card.quantum_spec.hardware.carriers.truncate(2);
        let rows = vec![
            row("F1", FmeaLevel::Entity, 1, (1, 1, 1)),
            row("F2", FmeaLevel::System, 1, (1, 1, 1)),
            row("F3", FmeaLevel::Entity, 2, (1, 1, 1)),
        ];
        let d = coverage_check(&card, &rows);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rule_id, rules::E_FMEA_COVERAGE);
        assert!(d[0].message.contains("carrier 2 has no system-level"));

        let mut full = rows.clone();
        full.push(row("F4", FmeaLevel::System, 2, (1, 1, 1)));
        assert!(coverage_check(&card, &full).is_empty());

        full.push(row("F5", FmeaLevel::System, 9, (1, 1, 1)));
        let d = coverage_check(&card, &full);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rule_id, rules::E_CARRIER_REF);
    }

    #[test]
    fn top_risks_ordering() {
        let rows = vec![
            row("B", FmeaLevel::Entity, 1, (7, 5, 4)),
            row("C", FmeaLevel::Entity, 1, (10, 6, 5)),
            row("A", FmeaLevel::Entity, 1, (4, 5, 7)),
        ];
        let top = top_risks(&rows, 3);
        let ids: Vec<_> = top.iter().map(|r| r.id.as_str()).collect();
        // 300 first; the two 140s tie on rpn and B wins on severity.
        assert_eq!(ids, ["C", "B", "A"]);
        assert_eq!(top_risks(&rows, 10).len(), 3);
        assert_eq!(top_risks(&rows, 1)[0].id, "C");
    }
}
