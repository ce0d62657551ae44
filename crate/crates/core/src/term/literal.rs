use alloc::collections::BTreeMap;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Identifier of an intent, tool, slot, channel or error type.
pub type Ident = String;

/// Parameter bindings keyed by slot / property name.
///
/// A `BTreeMap` keeps keys sorted, so the map doubles as its own canonical
/// JSON encoding.
pub type Params = BTreeMap<Ident, Literal>;

/// A finite decimal value with a total order so it can live inside LTS states.
#[derive(Clone, Copy, Debug)]
pub struct Decimal(f64);

impl Decimal {
    pub fn new(value: f64) -> Self {
        // -0.0 and 0.0 must be the same state.
        if value == 0.0 {
            Decimal(0.0)
        } else {
            Decimal(value)
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl PartialEq for Decimal {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for Decimal {}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Hash for Decimal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Decimal::new)
    }
}

/// The value universe carried by bindings, results and collected slots.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Literal {
    Text(String),
    Integer(i64),
    Decimal(Decimal),
    Boolean(bool),
    Date(String),
    /// A name used as data: an unfilled slot `?x`, or a channel such as a
    /// restricted credential.
    Var(Ident),
}

impl Literal {
    pub fn text(s: impl Into<String>) -> Self {
        Literal::Text(s.into())
    }

    pub fn var(s: impl Into<String>) -> Self {
        Literal::Var(s.into())
    }

    /// The bare value as it would appear in an enum list.
    pub fn enum_form(&self) -> String {
        use alloc::string::ToString;
        match self {
            Literal::Text(s) | Literal::Date(s) => s.clone(),
            Literal::Integer(i) => i.to_string(),
            Literal::Decimal(d) => alloc::format!("{}", d.get()),
            Literal::Boolean(b) => b.to_string(),
            Literal::Var(v) => alloc::format!("?{v}"),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Text(s) => write_quoted(f, s),
            Literal::Integer(i) => write!(f, "{i}"),
            Literal::Decimal(d) => {
                let v = d.get();
                if v.is_finite() && (v.abs() >= 9.007_199_254_740_992e15 || v == (v as i64) as f64) {
                    write!(f, "{v:.1}")
                } else {
                    write!(f, "{v}")
                }
            }
            Literal::Boolean(b) => write!(f, "{b}"),
            Literal::Date(s) => {
                f.write_str("date ")?;
                write_quoted(f, s)
            }
            Literal::Var(v) => write!(f, "?{}", super::print::Name(v)),
        }
    }
}

pub(crate) fn write_quoted(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_str("\"")?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            '\r' => f.write_str("\\r")?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}
