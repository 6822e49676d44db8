//! Persistent identifiers, content hashes and FAIR metadata records.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;
use unicode_normalization::{char::is_combining_mark, UnicodeNormalization};

use crate::card_model::ModelCard;
use crate::card_parser::{card_to_value, serialize_card, FILE_EXTENSION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("\"{0}\" has no letters or digits to build an identifier from")]
    Unsluggable(String),
    #[error("pointer \"{0}\" does not resolve in the card")]
    PointerUnresolved(String),
    #[error("\"{0}\" is not a card identifier of the form <slug>@<version>[#<pointer>]")]
    MalformedPid(String),
}

/// Lowercase ASCII slug: compatibility-folded, accents stripped, every run of
/// other characters collapsed to a single `-`.
pub fn slug(text: &str) -> Result<String, IdentityError> {
    let mut out = String::new();
    let mut pending_dash = false;
    for c in text.nfkd().filter(|c| !is_combining_mark(*c)).flat_map(char::to_lowercase) {
        if c.is_ascii_lowercase() || c.is_ascii_digit() {
            if pending_dash && !out.is_empty() {
                out.push('-');
            }
            pending_dash = false;
            out.push(c);
        } else {
            pending_dash = true;
        }
    }
    if out.is_empty() {
        Err(IdentityError::Unsluggable(text.to_string()))
    } else {
        Ok(out)
    }
}

/// `<slug>@<version>` optionally followed by `#<JSON Pointer>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pid {
    pub slug: String,
    pub version: String,
    pub fragment: Option<String>,
}

impl Pid {
    /// The card-level identifier with any fragment removed.
    pub fn card(&self) -> Pid {
        Pid { fragment: None, ..self.clone() }
    }

    /// Registry file name for the card.
    pub fn file_name(&self) -> String {
        format!("{}@{}{FILE_EXTENSION}", self.slug, self.version)
    }
}

impl fmt::Display for Pid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.slug, self.version)?;
        if let Some(frag) = &self.fragment {
            write!(f, "#{frag}")?;
        }
        Ok(())
    }
}

impl FromStr for Pid {
    type Err = IdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IdentityError::MalformedPid(s.to_string());
        let (card, fragment) = match s.split_once('#') {
            Some((c, f)) => (c, Some(f.to_string())),
            None => (s, None),
        };
        let (slug_part, version) = card.split_once('@').ok_or_else(bad)?;
        if version.is_empty() || slug(slug_part).ok().as_deref() != Some(slug_part) {
            return Err(bad());
        }
        if fragment.as_deref().is_some_and(|f| !f.starts_with('/')) {
            return Err(bad());
        }
        Ok(Pid { slug: slug_part.to_string(), version: version.to_string(), fragment })
    }
}

impl Serialize for Pid {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn card_pid(card: &ModelCard) -> Result<Pid, IdentityError> {
    Ok(Pid { slug: slug(&card.entity.name)?, version: card.entity.version.clone(), fragment: None })
}

/// Identifier of the element at `pointer` in the canonical document. The
/// empty pointer names the whole card.
pub fn element_pid(card: &ModelCard, pointer: &str) -> Result<Pid, IdentityError> {
    let pid = card_pid(card)?;
    if pointer.is_empty() {
        return Ok(pid);
    }
    if !pointer.starts_with('/') || card_to_value(card).pointer(pointer).is_none() {
        return Err(IdentityError::PointerUnresolved(pointer.to_string()));
    }
    Ok(Pid { fragment: Some(pointer.to_string()), ..pid })
}

/// Lowercase hex SHA-256.
pub fn hash_bytes(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Hash of the card's canonical serialization.
pub fn content_hash(card: &ModelCard) -> String {
    hash_bytes(&serialize_card(card))
}

/// Metadata record exported as `<pid>.fair.json`. Field order is the export
/// key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FairRecord {
    pub identifier: Pid,
    pub title: String,
    pub description: String,
    pub creators: Vec<String>,
    pub license: String,
    pub release_date: String,
    pub content_hash: String,
    pub source_locator: String,
    pub provenance_note: String,
}

impl FairRecord {
    pub fn file_name(&self) -> String {
        format!("{}.fair.json", self.identifier)
    }

    /// Compact JSON with a trailing newline.
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec(self).expect("records always serialize");
        out.push(b'\n');
        out
    }
}

pub fn fair_record(card: &ModelCard) -> Result<FairRecord, IdentityError> {
    let e = &card.entity;
    let identifier = card_pid(card)?;
    let release_date = e.release_date.format("%Y-%m-%d").to_string();
    let developers = if e.developer.is_empty() { "unspecified developer".to_string() } else { e.developer.join(", ") };
    let mut provenance_note = format!("Developed by {developers}; released {release_date}");
    if !e.citation.trim().is_empty() {
        provenance_note.push_str("; cite as: ");
        provenance_note.push_str(e.citation.trim());
    }
    Ok(FairRecord {
        source_locator: identifier.file_name(),
        identifier,
        title: e.name.clone(),
        description: e.purpose.text.clone(),
        creators: e.developer.clone(),
        license: e.license.clone().unwrap_or_default(),
        release_date,
        content_hash: content_hash(card),
        provenance_note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card_model::{new_card, sample::golden_card, EntityDetails, EntityType};

    #[test]
    fn slugs() {
        assert_eq!(slug("Acme QPU One").unwrap(), "acme-qpu-one");
        assert_eq!(slug("BB84 (fibre)").unwrap(), "bb84-fibre");
        assert_eq!(slug("  Ångström–Sensor² ").unwrap(), "angstrom-sensor2");
        assert_eq!(slug("ＱＰＵ").unwrap(), "qpu");
        assert_eq!(slug("!!!"), Err(IdentityError::Unsluggable("!!!".into())));
        assert!(slug("").is_err());
    }

    #[test]
    fn pids() {
        let card = golden_card();
        let pid = card_pid(&card).unwrap();
        assert_eq!(pid.to_string(), "acme-qpu-one@1.2.0");
        let el = element_pid(&card, "/performance/metrics/0").unwrap();
        assert_eq!(el.to_string(), "acme-qpu-one@1.2.0#/performance/metrics/0");
        assert_eq!(el.card(), pid);
        assert_eq!(element_pid(&card, "/nope"), Err(IdentityError::PointerUnresolved("/nope".into())));
        assert_eq!(element_pid(&card, "x-vendor"), Err(IdentityError::PointerUnresolved("x-vendor".into())));
        assert_eq!(element_pid(&card, "/x-vendor/tier").unwrap().fragment.as_deref(), Some("/x-vendor/tier"));
        assert_eq!(el.to_string().parse::<Pid>().unwrap(), el);
        assert!("Acme@1".parse::<Pid>().is_err());
        assert!("acme@".parse::<Pid>().is_err());
    }

    #[test]
    fn hash_oracle() {
        // Computed independently with sha256sum.
        assert_eq!(hash_bytes(b"{}"), "44136fa355b3678a1146ad16f7e8649e94fb4fc21fe77e8310c060f61caaff8a");
        let card = golden_card();
        let mut changed = card.clone();
        changed.entity.purpose.text.push('s');
        assert_ne!(content_hash(&card), content_hash(&changed));
        assert_eq!(content_hash(&card), hash_bytes(&serialize_card(&card)));
    }

    #[test]
    fn fair_records() {
        let e = EntityDetails::new("Acme QPU One", "0.1.0", EntityType::Computation, "2025-01-02").unwrap();
        let card = new_card(e).unwrap();
        let r = fair_record(&card).unwrap();
        assert_eq!(r.license, "");
        assert_eq!(r.identifier, card_pid(&card).unwrap());
        assert_eq!(r.content_hash, content_hash(&card));
        assert_eq!(r.source_locator, "acme-qpu-one@0.1.0.qtmc.json");
        assert_eq!(r.file_name(), "acme-qpu-one@0.1.0.fair.json");

        let mut card = golden_card();
        card.entity.license = Some("CC-BY-4.0".into());
        let r = fair_record(&card).unwrap();
        assert_eq!(r.license, "CC-BY-4.0");
        let json = String::from_utf8(r.to_json()).unwrap();
        let keys = ["identifier", "title", "description", "creators", "license", "release_date", "content_hash", "source_locator", "provenance_note"];
        let positions: Vec<_> = keys.iter().map(|k| json.find(&format!("\"{k}\":")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert!(r.provenance_note.contains("2025-03-14"));
        assert!(r.provenance_note.contains(&card.entity.developer[0]));
    }
}
