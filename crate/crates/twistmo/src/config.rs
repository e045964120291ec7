//! Layered run configuration: built-in defaults, then a JSON file, then
//! command-line flags. Each layer is a JSON object merged key by key into
//! the previous one; the result must deserialize into the command's
//! parameter struct, which rejects unknown keys.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

/// Recursive object merge; non-object values in `patch` replace.
pub fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

pub fn read_config_file(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::ConfigInvalid(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::ConfigInvalid(format!("{}: {e}", path.display())))?;
    if !v.is_object() {
        return Err(CliError::ConfigInvalid(format!("{}: expected a JSON object", path.display())));
    }
    Ok(v)
}

/// `defaults < file < flags`.
pub fn resolve<P: Serialize + DeserializeOwned>(defaults: &P, file: Option<Value>, flags: Map<String, Value>) -> Result<P, CliError> {
    let mut v = serde_json::to_value(defaults).map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    if let Some(f) = file {
        merge(&mut v, f);
    }
    merge(&mut v, Value::Object(flags));
    serde_json::from_value(v).map_err(|e| CliError::ConfigInvalid(e.to_string()))
}

/// Flag patch under construction; `set` ignores absent options and
/// splits dotted keys into nested objects.
#[derive(Debug, Default)]
pub struct Patch(pub Map<String, Value>);

impl Patch {
    pub fn set<T: Serialize>(&mut self, key: &str, value: Option<T>) -> &mut Self {
        if let Some(v) = value {
            let v = serde_json::to_value(v).expect("flag values serialize");
            let mut parts: Vec<&str> = key.split('.').collect();
            let last = parts.pop().expect("non-empty key");
            let mut node = &mut self.0;
            for p in parts {
                node = node.entry(p.to_string()).or_insert_with(|| Value::Object(Map::new())).as_object_mut().expect("nested flag object");
            }
            node.insert(last.to_string(), v);
        }
        self
    }
}
