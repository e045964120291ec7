//! Report files. JSON goes through `serde_json::Value`, whose maps are
//! ordered, so keys come out sorted and identical runs give identical
//! bytes. CSV files carry a header row and end with a newline.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(report).map_err(|e| CliError::NumericFailure(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::NumericFailure(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// CSV text for `rows`; the header comes from the row type's field names.
pub fn to_csv<R: Serialize>(rows: &[R]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(std::io::Error::other(e)))
}

/// Removes every `wall_time` entry, for comparing reports across runs.
pub fn strip_wall_time(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_time");
            map.values_mut().for_each(strip_wall_time);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_wall_time),
        _ => {}
    }
}
