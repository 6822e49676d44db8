//! Structured model cards for quantum technologies: schema, parsing, linting,
//! FMEA, persistent identifiers, a card registry and rendering.

pub mod card_model;
pub mod card_parser;
pub mod cli;
pub mod diagnostic;
pub mod fmea;
pub mod identity;
pub mod lint;
pub mod registry;
pub mod render;
pub mod units;
