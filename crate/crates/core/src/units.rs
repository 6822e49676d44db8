//! SI quantities: parsing, normalization to base units and dimensional analysis.
//!
//! Quantity text follows `<number> [("±"|"+/-") <number>] <unit-expr>` where a
//! unit expression is a product (`·` or `*`) or quotient (`/`) of optionally
//! prefixed symbols with optional integer exponents (`m/s^2`, `µs`, `bit/s`).
//! Canonical rendering uses `±`, a single space before the unit, `·` between
//! factors and `^` for exponents.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Number of tracked dimensions.
pub const DIMENSIONS: usize = 9;

/// Base unit symbols in dimension-vector order.
pub const BASE_SYMBOLS: [&str; DIMENSIONS] = ["s", "m", "kg", "A", "K", "mol", "cd", "bit", "count"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("unknown unit symbol \"{0}\"")]
    UnknownSymbol(String),
    #[error("malformed exponent in \"{0}\"")]
    MalformedExponent(String),
    #[error("empty unit factor in \"{0}\"")]
    EmptyFactor(String),
    #[error("the logarithmic unit dB does not take a prefix (\"{0}\")")]
    PrefixOnLogUnit(String),
    #[error("the logarithmic unit dB must stand alone with exponent 1")]
    LogUnitCombined,
    #[error("offset unit \"{0}\" is not supported; express temperatures in K")]
    OffsetUnit(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantityError {
    #[error("empty quantity")]
    Empty,
    #[error("malformed number \"{0}\"")]
    Number(String),
    #[error(transparent)]
    Unit(#[from] UnitError),
}

/// Integer exponents over (time, length, mass, current, temperature, amount,
/// luminosity, information, count).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimensionVector(pub [i32; DIMENSIONS]);

impl DimensionVector {
    pub const TIME: usize = 0;
    pub const LENGTH: usize = 1;
    pub const MASS: usize = 2;
    pub const CURRENT: usize = 3;
    pub const TEMPERATURE: usize = 4;
    pub const AMOUNT: usize = 5;
    pub const LUMINOSITY: usize = 6;
    pub const INFORMATION: usize = 7;
    pub const COUNT: usize = 8;

    pub const DIMENSIONLESS: DimensionVector = DimensionVector([0; DIMENSIONS]);

    pub fn is_dimensionless(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn scaled(self, k: i32) -> Self {
        let mut out = self.0;
        for e in &mut out {
            *e *= k;
        }
        DimensionVector(out)
    }
}

impl Add for DimensionVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (e, r) in out.iter_mut().zip(rhs.0) {
            *e += r;
        }
        DimensionVector(out)
    }
}

impl Sub for DimensionVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for DimensionVector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scaled(-1)
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dimensionless() {
            return f.write_str("1");
        }
        f.write_str(&UnitExpr::from_dimension(*self).to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prefix {
    Quetta,
    Ronna,
    Yotta,
    Zetta,
    Exa,
    Peta,
    Tera,
    Giga,
    Mega,
    Kilo,
    Hecto,
    Deca,
    Deci,
    Centi,
    Milli,
    Micro,
    Nano,
    Pico,
    Femto,
    Atto,
    Zepto,
    Yocto,
    Ronto,
    Quecto,
}

// Longest symbols first so "da" wins over "d".
const PREFIXES: [(&str, Prefix); 26] = [
    ("da", Prefix::Deca),
    ("Q", Prefix::Quetta),
    ("R", Prefix::Ronna),
    ("Y", Prefix::Yotta),
    ("Z", Prefix::Zetta),
    ("E", Prefix::Exa),
    ("P", Prefix::Peta),
    ("T", Prefix::Tera),
    ("G", Prefix::Giga),
    ("M", Prefix::Mega),
    ("k", Prefix::Kilo),
    ("h", Prefix::Hecto),
    ("d", Prefix::Deci),
    ("c", Prefix::Centi),
    ("m", Prefix::Milli),
    ("\u{b5}", Prefix::Micro),
    ("\u{3bc}", Prefix::Micro),
    ("u", Prefix::Micro),
    ("n", Prefix::Nano),
    ("p", Prefix::Pico),
    ("f", Prefix::Femto),
    ("a", Prefix::Atto),
    ("z", Prefix::Zepto),
    ("y", Prefix::Yocto),
    ("r", Prefix::Ronto),
    ("q", Prefix::Quecto),
];

impl Prefix {
    pub fn symbol(self) -> &'static str {
        match self {
            Prefix::Quetta => "Q",
            Prefix::Ronna => "R",
            Prefix::Yotta => "Y",
            Prefix::Zetta => "Z",
            Prefix::Exa => "E",
            Prefix::Peta => "P",
            Prefix::Tera => "T",
            Prefix::Giga => "G",
            Prefix::Mega => "M",
            Prefix::Kilo => "k",
            Prefix::Hecto => "h",
            Prefix::Deca => "da",
            Prefix::Deci => "d",
            Prefix::Centi => "c",
            Prefix::Milli => "m",
            Prefix::Micro => "\u{b5}",
            Prefix::Nano => "n",
            Prefix::Pico => "p",
            Prefix::Femto => "f",
            Prefix::Atto => "a",
            Prefix::Zepto => "z",
            Prefix::Yocto => "y",
            Prefix::Ronto => "r",
            Prefix::Quecto => "q",
        }
    }

    /// Power of ten this prefix stands for.
    pub fn exponent(self) -> i32 {
        match self {
            Prefix::Quetta => 30,
            Prefix::Ronna => 27,
            Prefix::Yotta => 24,
            Prefix::Zetta => 21,
            Prefix::Exa => 18,
            Prefix::Peta => 15,
            Prefix::Tera => 12,
            Prefix::Giga => 9,
            Prefix::Mega => 6,
            Prefix::Kilo => 3,
            Prefix::Hecto => 2,
            Prefix::Deca => 1,
            Prefix::Deci => -1,
            Prefix::Centi => -2,
            Prefix::Milli => -3,
            Prefix::Micro => -6,
            Prefix::Nano => -9,
            Prefix::Pico => -12,
            Prefix::Femto => -15,
            Prefix::Atto => -18,
            Prefix::Zepto => -21,
            Prefix::Yocto => -24,
            Prefix::Ronto => -27,
            Prefix::Quecto => -30,
        }
    }

    fn lookup(text: &str) -> Option<(Prefix, &str)> {
        PREFIXES
            .iter()
            .find_map(|(sym, p)| text.strip_prefix(sym).map(|rest| (*p, rest)))
    }
}

struct UnitDef {
    symbol: &'static str,
    /// Power of ten relative to the coherent SI unit (only the gram differs).
    decade: i32,
    // s, m, kg, A, K, mol, cd, bit, count
    dim: [i32; DIMENSIONS],
    log: bool,
}

const fn unit(symbol: &'static str, decade: i32, dim: [i32; DIMENSIONS]) -> UnitDef {
    UnitDef { symbol, decade, dim, log: false }
}

static UNITS: &[UnitDef] = &[
    unit("s", 0, [1, 0, 0, 0, 0, 0, 0, 0, 0]),
    unit("m", 0, [0, 1, 0, 0, 0, 0, 0, 0, 0]),
    unit("g", -3, [0, 0, 1, 0, 0, 0, 0, 0, 0]),
    unit("A", 0, [0, 0, 0, 1, 0, 0, 0, 0, 0]),
    unit("K", 0, [0, 0, 0, 0, 1, 0, 0, 0, 0]),
    unit("mol", 0, [0, 0, 0, 0, 0, 1, 0, 0, 0]),
    unit("cd", 0, [0, 0, 0, 0, 0, 0, 1, 0, 0]),
    unit("bit", 0, [0, 0, 0, 0, 0, 0, 0, 1, 0]),
    unit("count", 0, [0, 0, 0, 0, 0, 0, 0, 0, 1]),
    unit("Hz", 0, [-1, 0, 0, 0, 0, 0, 0, 0, 0]),
    unit("N", 0, [-2, 1, 1, 0, 0, 0, 0, 0, 0]),
    unit("Pa", 0, [-2, -1, 1, 0, 0, 0, 0, 0, 0]),
    unit("J", 0, [-2, 2, 1, 0, 0, 0, 0, 0, 0]),
    unit("W", 0, [-3, 2, 1, 0, 0, 0, 0, 0, 0]),
    unit("C", 0, [1, 0, 0, 1, 0, 0, 0, 0, 0]),
    unit("V", 0, [-3, 2, 1, -1, 0, 0, 0, 0, 0]),
    unit("F", 0, [4, -2, -1, 2, 0, 0, 0, 0, 0]),
    unit("\u{3a9}", 0, [-3, 2, 1, -2, 0, 0, 0, 0, 0]),
    unit("S", 0, [3, -2, -1, 2, 0, 0, 0, 0, 0]),
    unit("Wb", 0, [-2, 2, 1, -1, 0, 0, 0, 0, 0]),
    unit("T", 0, [-2, 0, 1, -1, 0, 0, 0, 0, 0]),
    unit("H", 0, [-2, 2, 1, -2, 0, 0, 0, 0, 0]),
    unit("rad", 0, [0; DIMENSIONS]),
    UnitDef { symbol: "dB", decade: 0, dim: [0; DIMENSIONS], log: true },
];

fn find_unit(symbol: &str) -> Option<&'static UnitDef> {
    let symbol = match symbol {
        "Ohm" | "ohm" | "\u{2126}" => "\u{3a9}",
        other => other,
    };
    UNITS.iter().find(|u| u.symbol == symbol)
}

/// One `prefix symbol ^ exponent` term of a unit expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitFactor {
    pub prefix: Option<Prefix>,
    pub symbol: &'static str,
    pub exponent: i32,
}

impl UnitFactor {
    fn def(&self) -> &'static UnitDef {
        find_unit(self.symbol).expect("unit factors are built from the symbol table")
    }

    fn decade(&self) -> i32 {
        let prefix = self.prefix.map_or(0, Prefix::exponent);
        (prefix + self.def().decade) * self.exponent
    }

    pub fn dimension(&self) -> DimensionVector {
        DimensionVector(self.def().dim).scaled(self.exponent)
    }
}

impl fmt::Display for UnitFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.prefix {
            f.write_str(p.symbol())?;
        }
        f.write_str(self.symbol)?;
        if self.exponent != 1 {
            write!(f, "^{}", self.exponent)?;
        }
        Ok(())
    }
}

/// A product of prefixed unit symbols. An empty factor list is dimensionless.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct UnitExpr {
    pub factors: Vec<UnitFactor>,
    pub is_log_unit: bool,
}

impl UnitExpr {
    pub fn dimensionless() -> Self {
        UnitExpr::default()
    }

    /// Expresses a dimension vector in base units, in [`BASE_SYMBOLS`] order.
    pub fn from_dimension(dim: DimensionVector) -> Self {
        let factors = BASE_SYMBOLS
            .iter()
            .zip(dim.0)
            .filter(|(_, e)| *e != 0)
            .map(|(sym, exponent)| {
                if *sym == "kg" {
                    UnitFactor { prefix: Some(Prefix::Kilo), symbol: "g", exponent }
                } else {
                    UnitFactor { prefix: None, symbol: find_unit(sym).unwrap().symbol, exponent }
                }
            })
            .collect();
        UnitExpr { factors, is_log_unit: false }
    }

    pub fn parse(text: &str) -> Result<Self, UnitError> {
        parse_unit_expr(text)
    }

    pub fn dimension(&self) -> DimensionVector {
        dimension_of(self)
    }

    /// Power of ten converting a value in this unit to coherent base units.
    fn decade(&self) -> i32 {
        self.factors.iter().map(UnitFactor::decade).sum()
    }

    pub fn is_dimensionless(&self) -> bool {
        !self.is_log_unit && self.dimension().is_dimensionless()
    }

    /// Concatenates the factors of two non-logarithmic expressions.
    pub fn product(&self, other: &UnitExpr) -> Result<UnitExpr, UnitError> {
        if self.is_log_unit || other.is_log_unit {
            return Err(UnitError::LogUnitCombined);
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(UnitExpr { factors, is_log_unit: false })
    }
}

impl fmt::Display for UnitExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("\u{b7}")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl FromStr for UnitExpr {
    type Err = UnitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_unit_expr(s)
    }
}

impl Serialize for UnitExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Dimension vector of a unit expression; exponents add across factors.
pub fn dimension_of(unit: &UnitExpr) -> DimensionVector {
    unit.factors.iter().map(UnitFactor::dimension).fold(DimensionVector::DIMENSIONLESS, Add::add)
}

fn is_product_sep(c: char) -> bool {
    matches!(c, '\u{b7}' | '\u{22c5}' | '*')
}

fn parse_unit_expr(text: &str) -> Result<UnitExpr, UnitError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(UnitExpr::dimensionless());
    }
    let mut factors = Vec::new();
    let mut saw_log = false;
    let mut sign = 1;
    let mut rest = text;
    let mut first = true;
    loop {
        let end = rest.find(|c: char| c == '/' || is_product_sep(c)).unwrap_or(rest.len());
        let token = rest[..end].trim();
        if first && token == "1" && rest[end..].starts_with('/') {
            // "1/s"
        } else {
            let (factor, log) = parse_factor(token, text)?;
            saw_log |= log;
            factors.push(UnitFactor { exponent: factor.exponent * sign, ..factor });
        }
        first = false;
        if end == rest.len() {
            break;
        }
        let sep = rest[end..].chars().next().unwrap();
        sign = if sep == '/' { -1 } else { 1 };
        rest = &rest[end + sep.len_utf8()..];
    }
    if saw_log && (factors.len() != 1 || factors[0].exponent != 1) {
        return Err(UnitError::LogUnitCombined);
    }
    Ok(UnitExpr { factors, is_log_unit: saw_log })
}

fn parse_factor(token: &str, whole: &str) -> Result<(UnitFactor, bool), UnitError> {
    if token.is_empty() {
        return Err(UnitError::EmptyFactor(whole.to_string()));
    }
    let (symbol, exponent) = match token.split_once('^') {
        Some((sym, exp)) => {
            let exp = exp.trim();
            let ok_shape = {
                let digits = exp.strip_prefix('-').or_else(|| exp.strip_prefix('+')).unwrap_or(exp);
                !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
            };
            let value = if ok_shape { exp.parse::<i32>().ok() } else { None };
            match value {
                Some(v) if v != 0 => (sym.trim(), v),
                _ => return Err(UnitError::MalformedExponent(token.to_string())),
            }
        }
        None => (token, 1),
    };
    if symbol.is_empty() {
        return Err(UnitError::EmptyFactor(whole.to_string()));
    }
    if matches!(symbol, "\u{b0}C" | "degC" | "\u{2103}" | "\u{b0}F" | "degF") {
        return Err(UnitError::OffsetUnit(symbol.to_string()));
    }
    if let Some(def) = find_unit(symbol) {
        return Ok((UnitFactor { prefix: None, symbol: def.symbol, exponent }, def.log));
    }
    if let Some((prefix, rest)) = Prefix::lookup(symbol) {
        if let Some(def) = find_unit(rest) {
            if def.log {
                return Err(UnitError::PrefixOnLogUnit(symbol.to_string()));
            }
            return Ok((UnitFactor { prefix: Some(prefix), symbol: def.symbol, exponent }, false));
        }
    }
    Err(UnitError::UnknownSymbol(symbol.to_string()))
}

/// A measured value with optional symmetric uncertainty half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub uncertainty: Option<f64>,
    pub unit: UnitExpr,
}

impl Quantity {
    pub fn new(value: f64, uncertainty: Option<f64>, unit: UnitExpr) -> Self {
        Quantity { value, uncertainty, unit }
    }

    pub fn dimensionless(value: f64) -> Self {
        Quantity::new(value, None, UnitExpr::dimensionless())
    }

    pub fn parse(text: &str) -> Result<Self, QuantityError> {
        parse_quantity(text)
    }

    pub fn dimension(&self) -> DimensionVector {
        dimension_of(&self.unit)
    }

    pub fn normalized(&self) -> Quantity {
        normalize(self)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_number(self.value))?;
        if let Some(u) = self.uncertainty {
            write!(f, " \u{b1} {}", format_number(u))?;
        }
        if !self.unit.factors.is_empty() {
            write!(f, " {}", self.unit)?;
        }
        Ok(())
    }
}

impl FromStr for Quantity {
    type Err = QuantityError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_quantity(s)
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Shortest decimal text that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Length of the leading `[+-]digits[.digits][(e|E)[+-]digits]` run.
fn scan_number(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        let frac_start = i + 1;
        let mut j = frac_start;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        if digits > 0 || j > frac_start {
            digits += j - frac_start;
            i = j;
        }
    }
    if digits == 0 {
        return 0;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            i = j;
        }
    }
    i
}

fn take_number(s: &str) -> Result<(f64, &str), QuantityError> {
    let n = scan_number(s);
    let token_end = s.find(char::is_whitespace).unwrap_or(s.len());
    if n == 0 {
        return Err(QuantityError::Number(s[..token_end].to_string()));
    }
    let value: f64 = s[..n].parse().map_err(|_| QuantityError::Number(s[..n].to_string()))?;
    if !value.is_finite() {
        return Err(QuantityError::Number(s[..n].to_string()));
    }
    Ok((value, &s[n..]))
}

pub fn parse_quantity(text: &str) -> Result<Quantity, QuantityError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(QuantityError::Empty);
    }
    let (value, rest) = take_number(text)?;
    let mut rest = rest.trim_start();
    let mut uncertainty = None;
    let pm = rest.strip_prefix('\u{b1}').or_else(|| rest.strip_prefix("+/-"));
    if let Some(after) = pm {
        let after = after.trim_start();
        if after.starts_with(['+', '-']) {
            return Err(QuantityError::Number(after.split_whitespace().next().unwrap_or("").to_string()));
        }
        let (u, r) = take_number(after)?;
        uncertainty = Some(u);
        rest = r.trim_start();
    }
    let unit = parse_unit_expr(rest)?;
    Ok(Quantity { value, uncertainty, unit })
}

fn scale_by_decade(v: f64, decade: i32) -> f64 {
    if decade == 0 {
        return v;
    }
    // Exact powers of ten up to 1e22 keep this a single rounding step.
    let p: f64 = format!("1e{}", decade.abs()).parse().unwrap();
    if decade > 0 {
        v * p
    } else {
        v / p
    }
}

/// Rewrites a quantity in coherent base units with prefix factors folded into
/// the value. Logarithmic quantities are returned unchanged.
pub fn normalize(q: &Quantity) -> Quantity {
    if q.unit.is_log_unit {
        return q.clone();
    }
    let decade = q.unit.decade();
    Quantity {
        value: scale_by_decade(q.value, decade),
        uncertainty: q.uncertainty.map(|u| scale_by_decade(u, decade)),
        unit: UnitExpr::from_dimension(q.dimension()),
    }
}

/// Equal dimension vectors; a logarithmic unit only matches another one.
pub fn same_dimension(a: &Quantity, b: &Quantity) -> bool {
    a.unit.is_log_unit == b.unit.is_log_unit && a.dimension() == b.dimension()
}
