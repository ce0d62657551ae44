//! SGD service schema files to and from [`SgdRegistry`].
//!
//! The file shape follows the public SGD dataset: a service object with a
//! `slots` table and `intents` that reference slots by name. Two optional
//! per-intent arrays, `failure_modes` and `dependencies`, carry the
//! annotations the metadata-preserving mapping needs. A slot may carry a
//! `type` key (default `string`), since the dataset itself is untyped.

use std::collections::BTreeMap;

use protocheck_core::term::{Dependency, FailureMode, SlotType};
use protocheck_core::{Intent, SgdRegistry, SlotDef, TriBool};
use serde_json::{json, Map, Value};

use crate::json;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SgdError {
    #[error("malformed schema at {path}: {reason}")]
    MalformedSchema { path: String, reason: String },
    #[error("intent `{intent}` references unknown slot `{slot}`")]
    UnresolvedSlotReference { intent: String, slot: String },
    #[error("slot `{0}` is defined differently by two intents")]
    ConflictingSlot(String),
}

fn malformed(path: impl Into<String>, reason: impl Into<String>) -> SgdError {
    SgdError::MalformedSchema {
        path: path.into(),
        reason: reason.into(),
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, SgdError> {
    v.as_object().ok_or_else(|| malformed(path, "expected an object"))
}

fn text(obj: &Map<String, Value>, key: &str, path: &str) -> Result<String, SgdError> {
    match obj.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        None => Err(malformed(path, format!("missing `{key}`"))),
        Some(_) => Err(malformed(format!("{path}.{key}"), "expected a string")),
    }
}

fn array<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a [Value], SgdError> {
    match obj.get(key) {
        Some(Value::Array(a)) => Ok(a),
        None => Err(malformed(path, format!("missing `{key}`"))),
        Some(_) => Err(malformed(format!("{path}.{key}"), "expected an array")),
    }
}

fn names(v: &[Value], path: &str) -> Result<Vec<String>, SgdError> {
    v.iter()
        .map(|s| s.as_str().map(String::from).ok_or_else(|| malformed(path, "expected slot names")))
        .collect()
}

fn slot(v: &Value, i: usize) -> Result<SlotDef, SgdError> {
    let path = format!("slots[{i}]");
    let obj = object(v, &path)?;
    let name = text(obj, "name", &path)?;
    let description = match obj.get("description") {
        None => String::new(),
        Some(_) => text(obj, "description", &path)?,
    };
    let type_name = match obj.get("type") {
        None => SlotType::String,
        Some(Value::String(s)) => {
            SlotType::from_name(s).ok_or_else(|| malformed(format!("{path}.type"), format!("unknown type `{s}`")))?
        }
        Some(_) => return Err(malformed(format!("{path}.type"), "expected a string")),
    };
    let possible_values = match obj.get("possible_values") {
        None => Vec::new(),
        Some(Value::Array(a)) => names(a, &format!("{path}.possible_values"))?,
        Some(_) => return Err(malformed(format!("{path}.possible_values"), "expected an array")),
    };
    Ok(SlotDef {
        name,
        type_name,
        description,
        possible_values,
    })
}

fn annotations<T: serde::de::DeserializeOwned>(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Vec<T>, SgdError> {
    match obj.get(key) {
        None => Ok(Vec::new()),
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| malformed(format!("{path}.{key}"), e.to_string())),
    }
}

fn intent(v: &Value, i: usize, slots: &BTreeMap<String, SlotDef>, warnings: &mut Vec<String>) -> Result<Intent, SgdError> {
    let path = format!("intents[{i}]");
    let obj = object(v, &path)?;
    let name = text(obj, "name", &path)?;
    let description = match obj.get("description") {
        None => String::new(),
        Some(_) => text(obj, "description", &path)?,
    };
    let transactional = match obj.get("is_transactional") {
        Some(Value::Bool(b)) => TriBool::from_bool(*b),
        None => {
            warnings.push(format!("intent `{name}` has no is_transactional flag; treated as unknown"));
            TriBool::Unknown
        }
        Some(_) => return Err(malformed(format!("{path}.is_transactional"), "expected a boolean")),
    };
    let required_names = match obj.get("required_slots") {
        None => Vec::new(),
        Some(Value::Array(a)) => names(a, &format!("{path}.required_slots"))?,
        Some(_) => return Err(malformed(format!("{path}.required_slots"), "expected an array")),
    };
    // The dataset stores optional slots as {name: default}; defaults are not modelled.
    let optional_names = match obj.get("optional_slots") {
        None => Vec::new(),
        Some(Value::Array(a)) => names(a, &format!("{path}.optional_slots"))?,
        Some(Value::Object(m)) => {
            if m.values().any(|d| d.as_str().is_some_and(|s| s != "dontcare")) {
                warnings.push(format!("intent `{name}`: optional slot defaults are ignored"));
            }
            m.keys().cloned().collect()
        }
        Some(_) => return Err(malformed(format!("{path}.optional_slots"), "expected an array or object")),
    };
    let resolve = |n: &String| {
        slots.get(n).cloned().ok_or_else(|| SgdError::UnresolvedSlotReference {
            intent: name.clone(),
            slot: n.clone(),
        })
    };
    Ok(Intent {
        required: required_names.iter().map(resolve).collect::<Result<_, _>>()?,
        optional: optional_names.iter().map(resolve).collect::<Result<_, _>>()?,
        failure_modes: annotations::<FailureMode>(obj, "failure_modes", &path)?,
        dependencies: annotations::<Dependency>(obj, "dependencies", &path)?,
        name,
        description,
        transactional,
    })
}

pub fn parse_sgd_value(value: &Value) -> Result<SgdRegistry, SgdError> {
    let doc = object(value, "$")?;
    let service_name = text(doc, "service_name", "$")?;
    let mut slots = BTreeMap::new();
    for (i, v) in array(doc, "slots", "$")?.iter().enumerate() {
        let s = slot(v, i)?;
        slots.insert(s.name.clone(), s);
    }
    let mut warnings = Vec::new();
    let mut intents: Vec<Intent> = Vec::new();
    for (i, v) in array(doc, "intents", "$")?.iter().enumerate() {
        let it = intent(v, i, &slots, &mut warnings)?;
        if intents.iter().any(|x| x.name == it.name) {
            return Err(malformed(format!("intents[{i}]"), format!("duplicate intent `{}`", it.name)));
        }
        intents.push(it);
    }
    Ok(SgdRegistry {
        service_name,
        intents,
        warnings,
    })
}

/// Parse one service schema object.
pub fn parse_sgd_schema(text: &str) -> Result<SgdRegistry, SgdError> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed("$", e.to_string()))?;
    parse_sgd_value(&value)
}

fn slot_value(s: &SlotDef) -> Value {
    let mut o = Map::new();
    o.insert("name".into(), json!(s.name));
    o.insert("description".into(), json!(s.description));
    o.insert("is_categorical".into(), json!(!s.possible_values.is_empty()));
    o.insert("possible_values".into(), json!(s.possible_values));
    if s.type_name != SlotType::String {
        o.insert("type".into(), json!(s.type_name.as_str()));
    }
    Value::Object(o)
}

pub fn schema_value(reg: &SgdRegistry) -> Result<Value, SgdError> {
    let mut slots: Vec<&SlotDef> = Vec::new();
    for s in reg.intents.iter().flat_map(|i| i.slots()) {
        match slots.iter().find(|x| x.name == s.name) {
            Some(prev) if *prev != s => return Err(SgdError::ConflictingSlot(s.name.clone())),
            Some(_) => {}
            None => slots.push(s),
        }
    }
    let intents: Vec<Value> = reg
        .intents
        .iter()
        .map(|i| {
            let mut o = Map::new();
            o.insert("name".into(), json!(i.name));
            o.insert("description".into(), json!(i.description));
            if let Some(b) = i.transactional.as_bool() {
                o.insert("is_transactional".into(), json!(b));
            }
            let slot_names = |v: &[SlotDef]| v.iter().map(|s| s.name.clone()).collect::<Vec<_>>();
            o.insert("required_slots".into(), json!(slot_names(&i.required)));
            o.insert("optional_slots".into(), json!(slot_names(&i.optional)));
            if !i.failure_modes.is_empty() {
                o.insert("failure_modes".into(), serde_json::to_value(&i.failure_modes).expect("serialises"));
            }
            if !i.dependencies.is_empty() {
                o.insert("dependencies".into(), serde_json::to_value(&i.dependencies).expect("serialises"));
            }
            Value::Object(o)
        })
        .collect();
    Ok(json!({
        "service_name": reg.service_name,
        "slots": slots.into_iter().map(slot_value).collect::<Vec<_>>(),
        "intents": intents,
    }))
}

/// Canonical schema text. Fails only when two intents disagree on a slot.
pub fn emit_sgd_schema(reg: &SgdRegistry) -> Result<String, SgdError> {
    Ok(json::canonical(&schema_value(reg)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use protocheck_core::fixtures;

    fn flights() -> SgdRegistry {
        SgdRegistry {
            service_name: "Flights_1".into(),
            intents: vec![fixtures::book_flight(), fixtures::create_order_intent(TriBool::False)],
            warnings: Vec::new(),
        }
    }

    #[test]
    fn round_trip() {
        let reg = flights();
        let text = emit_sgd_schema(&reg).unwrap();
        let back = parse_sgd_schema(&text).unwrap();
        assert_eq!(back, reg);
        assert_eq!(back.intent("BookFlight").unwrap().optional[0].possible_values, ["economy", "business"]);
    }

    #[test]
    fn dataset_shape() {
        let text = r#"{"service_name": "Svc", "description": "x",
          "slots": [{"name": "city", "description": "City", "is_categorical": false, "possible_values": []},
                    {"name": "n", "description": "", "is_categorical": true, "possible_values": ["1", "2"]}],
          "intents": [{"name": "Find", "description": "Find", "required_slots": [],
                       "optional_slots": {"city": "dontcare"}, "result_slots": ["city"]},
                      {"name": "Book", "is_transactional": true, "required_slots": ["city", "n"]}]}"#;
        let reg = parse_sgd_schema(text).unwrap();
        assert_eq!(reg.intents[0].transactional, TriBool::Unknown);
        assert!(reg.intents[0].required.is_empty());
        assert_eq!(reg.intents[0].optional[0].name, "city");
        assert_eq!(reg.warnings.len(), 1);
        assert_eq!(reg.intents[1].required.len(), 2);
    }

    #[test]
    fn unresolved_and_malformed() {
        let text = r#"{"service_name": "S", "slots": [], "intents": [{"name": "I", "is_transactional": false, "required_slots": ["x"]}]}"#;
        assert_eq!(
            parse_sgd_schema(text),
            Err(SgdError::UnresolvedSlotReference { intent: "I".into(), slot: "x".into() })
        );
        assert!(matches!(parse_sgd_schema(r#"{"slots": []}"#), Err(SgdError::MalformedSchema { .. })));
    }

    #[test]
    fn conflicting_slots_are_refused() {
        let mut reg = flights();
        let mut other = fixtures::sgd_flight();
        other.name = "Other".into();
        reg.intents.push(other);
        assert_eq!(emit_sgd_schema(&reg), Err(SgdError::ConflictingSlot("origin".into())));
    }
}
