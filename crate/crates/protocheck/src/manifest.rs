//! MCP tool manifests (the `tools/list` result shape) to and from [`McpRegistry`].
//!
//! MCP⁺ metadata rides in an `x-mcp-plus` object on each tool. Keys this
//! module does not model are kept as raw JSON text in
//! [`McpRegistry::extensions`] and written back on emit. Tool-level keys are
//! stored under the tool name with paths such as `inputSchema.$schema`,
//! `inputSchema.properties.q.format` or `x-mcp-plus.owner`; document-level
//! keys are stored under `""`.

use std::collections::{BTreeMap, BTreeSet};

use protocheck_core::registry::{PromptDef, ResourceDef};
use protocheck_core::term::{Dependency, FailureMode, PropertySpec, SideEffects, SlotType};
use protocheck_core::{JsonSchema, McpRegistry, Tool, ToolMetadata};
use serde_json::{json, Map, Value};

use crate::json;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ManifestError {
    #[error("malformed manifest at {path}: {reason}")]
    Malformed { path: String, reason: String },
    #[error("duplicate tool name `{0}`")]
    DuplicateToolName(String),
    #[error("tool `{tool}` uses unsupported schema feature `{feature}`")]
    UnsupportedSchemaFeature { tool: String, feature: String },
}

fn malformed(path: impl Into<String>, reason: impl Into<String>) -> ManifestError {
    ManifestError::Malformed {
        path: path.into(),
        reason: reason.into(),
    }
}

/// Schema keywords outside the modelled subset.
const UNSUPPORTED: [&str; 12] = [
    "allOf", "anyOf", "oneOf", "not", "$ref", "items", "if", "then", "else", "patternProperties",
    "dependentRequired", "dependentSchemas",
];

type Extensions = BTreeMap<String, String>;

fn raw(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values always serialise")
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ManifestError> {
    v.as_object().ok_or_else(|| malformed(path, "expected an object"))
}

fn string_at(obj: &Map<String, Value>, key: &str, path: &str) -> Result<String, ManifestError> {
    match obj.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(_) => Err(malformed(format!("{path}.{key}"), "expected a string")),
        None => Err(malformed(path, format!("missing `{key}`"))),
    }
}

fn strings(v: &Value, path: &str) -> Result<Vec<String>, ManifestError> {
    let items = v.as_array().ok_or_else(|| malformed(path, "expected an array of strings"))?;
    items
        .iter()
        .map(|s| s.as_str().map(String::from).ok_or_else(|| malformed(path, "expected an array of strings")))
        .collect()
}

fn property(
    tool: &str,
    name: &str,
    v: &Value,
    ext: &mut Extensions,
) -> Result<PropertySpec, ManifestError> {
    let path = format!("{tool}.inputSchema.properties.{name}");
    let obj = as_object(v, &path)?;
    for k in UNSUPPORTED.iter().chain(["properties", "additionalProperties"].iter()) {
        if obj.contains_key(*k) {
            return Err(ManifestError::UnsupportedSchemaFeature {
                tool: tool.into(),
                feature: format!("properties.{name}.{k}"),
            });
        }
    }
    let type_text = string_at(obj, "type", &path)?;
    let is_date = obj.get("format").and_then(Value::as_str) == Some("date");
    let type_name = match (type_text.as_str(), is_date) {
        ("string", true) => SlotType::Date,
        ("string", false) => SlotType::String,
        ("integer", _) => SlotType::Integer,
        ("number", _) => SlotType::Number,
        ("boolean", _) => SlotType::Boolean,
        (other, _) => {
            return Err(ManifestError::UnsupportedSchemaFeature {
                tool: tool.into(),
                feature: format!("properties.{name}.type={other}"),
            })
        }
    };
    let description = match obj.get("description") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(malformed(format!("{path}.description"), "expected a string")),
    };
    let enum_values = match obj.get("enum") {
        None => None,
        Some(v) => Some(strings(v, &format!("{path}.enum")).map_err(|_| ManifestError::UnsupportedSchemaFeature {
            tool: tool.into(),
            feature: format!("properties.{name}.enum with non-string members"),
        })?),
    };
    for (k, v) in obj {
        let known = matches!(k.as_str(), "type" | "description" | "enum") || (k == "format" && is_date);
        if !known {
            ext.insert(format!("inputSchema.properties.{name}.{k}"), raw(v));
        }
    }
    Ok(PropertySpec {
        type_name,
        description,
        enum_values,
    })
}

fn input_schema(tool: &str, v: &Value, ext: &mut Extensions) -> Result<JsonSchema, ManifestError> {
    let path = format!("{tool}.inputSchema");
    let obj = as_object(v, &path)?;
    for k in UNSUPPORTED {
        if obj.contains_key(k) {
            return Err(ManifestError::UnsupportedSchemaFeature {
                tool: tool.into(),
                feature: k.into(),
            });
        }
    }
    match obj.get("type") {
        None => {}
        Some(Value::String(s)) if s == "object" => {}
        Some(other) => {
            return Err(ManifestError::UnsupportedSchemaFeature {
                tool: tool.into(),
                feature: format!("type={other}"),
            })
        }
    }
    let required = match obj.get("required") {
        None => Vec::new(),
        Some(v) => strings(v, &format!("{path}.required"))?,
    };
    let mut properties = BTreeMap::new();
    if let Some(props) = obj.get("properties") {
        for (name, p) in as_object(props, &format!("{path}.properties"))? {
            properties.insert(name.clone(), property(tool, name, p, ext)?);
        }
    }
    for (k, v) in obj {
        if !matches!(k.as_str(), "type" | "required" | "properties") {
            ext.insert(format!("inputSchema.{k}"), raw(v));
        }
    }
    Ok(JsonSchema { required, properties })
}

fn metadata(tool: &str, v: &Value, ext: &mut Extensions) -> Result<ToolMetadata, ManifestError> {
    let path = format!("{tool}.x-mcp-plus");
    let obj = as_object(v, &path)?;
    let mut meta = ToolMetadata::default();
    for (k, v) in obj {
        let at = || format!("{path}.{k}");
        match k.as_str() {
            "side_effects" => {
                let s = v.as_str().ok_or_else(|| malformed(at(), "expected a string"))?;
                meta.side_effects =
                    Some(SideEffects::from_name(s).ok_or_else(|| malformed(at(), format!("unknown side effect `{s}`")))?);
            }
            "requires_approval" => {
                meta.requires_approval = Some(v.as_bool().ok_or_else(|| malformed(at(), "expected a boolean"))?);
            }
            "summary" => meta.summary = Some(v.as_str().ok_or_else(|| malformed(at(), "expected a string"))?.into()),
            "failure_modes" => {
                meta.failure_modes = Some(
                    serde_json::from_value::<Vec<FailureMode>>(v.clone()).map_err(|e| malformed(at(), e.to_string()))?,
                );
            }
            "dependencies" => {
                meta.dependencies =
                    Some(serde_json::from_value::<Vec<Dependency>>(v.clone()).map_err(|e| malformed(at(), e.to_string()))?);
            }
            _ => {
                ext.insert(format!("x-mcp-plus.{k}"), raw(v));
            }
        }
    }
    Ok(meta)
}

fn tool(index: usize, v: &Value, ext: &mut Extensions) -> Result<Tool, ManifestError> {
    let obj = as_object(v, &format!("tools[{index}]"))?;
    let name = string_at(obj, "name", &format!("tools[{index}]"))?;
    let description = string_at(obj, "description", &name)?;
    let schema = input_schema(&name, obj.get("inputSchema").ok_or_else(|| malformed(&name, "missing `inputSchema`"))?, ext)?;
    let meta = obj.get("x-mcp-plus").map(|m| metadata(&name, m, ext)).transpose()?;
    for (k, v) in obj {
        if !matches!(k.as_str(), "name" | "description" | "inputSchema" | "x-mcp-plus") {
            ext.insert(k.clone(), raw(v));
        }
    }
    let mut t = Tool::new(name, description, schema);
    t.metadata = meta;
    Ok(t)
}

fn resource(i: usize, v: &Value, ext: &mut Extensions) -> Result<ResourceDef, ManifestError> {
    let path = format!("resources[{i}]");
    let obj = as_object(v, &path)?;
    for (k, v) in obj {
        if !matches!(k.as_str(), "uri" | "content") {
            ext.insert(format!("resources.{i}.{k}"), raw(v));
        }
    }
    Ok(ResourceDef {
        uri: string_at(obj, "uri", &path)?,
        content: string_at(obj, "content", &path)?,
    })
}

fn prompt(i: usize, v: &Value, ext: &mut Extensions) -> Result<PromptDef, ManifestError> {
    let path = format!("prompts[{i}]");
    let obj = as_object(v, &path)?;
    for (k, v) in obj {
        if !matches!(k.as_str(), "template" | "arguments") {
            ext.insert(format!("prompts.{i}.{k}"), raw(v));
        }
    }
    Ok(PromptDef {
        template: string_at(obj, "template", &path)?,
        args: match obj.get("arguments") {
            None => Vec::new(),
            Some(a) => strings(a, &format!("{path}.arguments"))?,
        },
    })
}

fn items<'a>(doc: &'a Map<String, Value>, key: &str) -> Result<&'a [Value], ManifestError> {
    match doc.get(key) {
        None => Ok(&[]),
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(malformed(key, "expected an array")),
    }
}

/// Parse a manifest document.
pub fn parse_mcp_manifest(text: &str) -> Result<McpRegistry, ManifestError> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed("$", e.to_string()))?;
    parse_mcp_value(&value)
}

pub fn parse_mcp_value(value: &Value) -> Result<McpRegistry, ManifestError> {
    let doc = as_object(value, "$")?;
    let Some(Value::Array(tool_values)) = doc.get("tools") else {
        return Err(malformed("$", "missing `tools` array"));
    };
    let mut reg = McpRegistry::default();
    let mut top = Extensions::new();
    for (i, v) in tool_values.iter().enumerate() {
        let mut ext = Extensions::new();
        let t = tool(i, v, &mut ext)?;
        if reg.tool(&t.name).is_some() {
            return Err(ManifestError::DuplicateToolName(t.name));
        }
        if !ext.is_empty() {
            reg.extensions.insert(t.name.clone(), ext);
        }
        reg.tools.push(t);
    }
    for (i, v) in items(doc, "resources")?.iter().enumerate() {
        reg.resources.push(resource(i, v, &mut top)?);
    }
    for (i, v) in items(doc, "prompts")?.iter().enumerate() {
        reg.prompts.push(prompt(i, v, &mut top)?);
    }
    if let Some(caps) = doc.get("capabilities") {
        reg.server_caps = strings(caps, "capabilities")?.into_iter().collect::<BTreeSet<_>>();
    }
    for (k, v) in doc {
        if !matches!(k.as_str(), "tools" | "resources" | "prompts" | "capabilities") {
            top.insert(k.clone(), raw(v));
        }
    }
    if !top.is_empty() {
        reg.extensions.insert(String::new(), top);
    }
    Ok(reg)
}

/// Insert `value` at a dotted path of object keys, creating objects on the way.
/// Property names may themselves contain dots, so `inputSchema.properties.*`
/// paths are split by hand.
fn insert_path(root: &mut Map<String, Value>, path: &[&str], value: Value) {
    let (last, init) = path.split_last().expect("extension paths are never empty");
    let mut cur = root;
    for seg in init {
        let entry = cur.entry(String::from(*seg)).or_insert_with(|| Value::Object(Map::new()));
        if !entry.is_object() {
            *entry = Value::Object(Map::new());
        }
        cur = entry.as_object_mut().expect("just ensured");
    }
    cur.insert(String::from(*last), value);
}

fn split_ext_key(key: &str) -> Vec<&str> {
    if let Some(rest) = key.strip_prefix("inputSchema.properties.") {
        // `<prop>.<k>`: the keyword never contains a dot.
        if let Some((prop, k)) = rest.rsplit_once('.') {
            return vec!["inputSchema", "properties", prop, k];
        }
    }
    match key.split_once('.') {
        Some((head, tail)) if head == "inputSchema" || head == "x-mcp-plus" => vec![head, tail],
        _ => vec![key],
    }
}

fn parse_raw(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.into()))
}

fn tool_value(t: &Tool, ext: Option<&Extensions>) -> Value {
    let mut props = Map::new();
    for (name, p) in &t.schema.properties {
        let mut o = Map::new();
        let type_text = match p.type_name {
            SlotType::Date => {
                o.insert("format".into(), json!("date"));
                "string"
            }
            other => other.as_str(),
        };
        o.insert("type".into(), json!(type_text));
        if let Some(d) = &p.description {
            o.insert("description".into(), json!(d));
        }
        if let Some(e) = &p.enum_values {
            o.insert("enum".into(), json!(e));
        }
        props.insert(name.clone(), Value::Object(o));
    }
    let mut obj = Map::new();
    obj.insert("name".into(), json!(t.name));
    obj.insert("description".into(), json!(t.description));
    obj.insert(
        "inputSchema".into(),
        json!({"type": "object", "required": t.schema.required, "properties": props}),
    );
    if let Some(m) = &t.metadata {
        obj.insert("x-mcp-plus".into(), serde_json::to_value(m).expect("metadata serialises"));
    }
    for (k, v) in ext.into_iter().flatten() {
        insert_path(&mut obj, &split_ext_key(k), parse_raw(v));
    }
    Value::Object(obj)
}

/// The registry as a manifest value.
pub fn manifest_value(reg: &McpRegistry) -> Value {
    let mut doc = Map::new();
    let tools: Vec<Value> = reg.tools.iter().map(|t| tool_value(t, reg.extensions.get(&t.name))).collect();
    doc.insert("tools".into(), Value::Array(tools));
    let mut resources: Vec<Value> = reg.resources.iter().map(|r| json!({"uri": r.uri, "content": r.content})).collect();
    let mut prompts: Vec<Value> = reg
        .prompts
        .iter()
        .map(|p| json!({"template": p.template, "arguments": p.args}))
        .collect();
    if !reg.server_caps.is_empty() {
        doc.insert("capabilities".into(), json!(reg.server_caps));
    }
    for (k, v) in reg.extensions.get("").into_iter().flatten() {
        let indexed = |prefix: &str| {
            let rest = k.strip_prefix(prefix)?;
            let (i, key) = rest.split_once('.')?;
            Some((i.parse::<usize>().ok()?, key))
        };
        if let Some((i, key)) = indexed("resources.").filter(|(i, _)| *i < resources.len()) {
            resources[i].as_object_mut().expect("object").insert(key.into(), parse_raw(v));
        } else if let Some((i, key)) = indexed("prompts.").filter(|(i, _)| *i < prompts.len()) {
            prompts[i].as_object_mut().expect("object").insert(key.into(), parse_raw(v));
        } else {
            doc.insert(k.clone(), parse_raw(v));
        }
    }
    if !resources.is_empty() {
        doc.insert("resources".into(), Value::Array(resources));
    }
    if !prompts.is_empty() {
        doc.insert("prompts".into(), Value::Array(prompts));
    }
    Value::Object(doc)
}

/// Canonical manifest text: sorted keys, two-space indent.
pub fn emit_manifest(reg: &McpRegistry) -> String {
    json::canonical(&manifest_value(reg))
}
