use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

/// Replaces fields of `args` with those present in the JSON file at `path`.
///
/// Keys are the long flag names with `_` for `-`; unknown keys are rejected.
pub fn overlay<A: Serialize + DeserializeOwned>(args: A, path: &Path) -> Result<A> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let file: Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing config file {}", path.display()))?;
    let Value::Object(fields) = file else {
        bail!("config file {} must hold a JSON object", path.display());
    };
    let mut merged = serde_json::to_value(args)?;
    let target = merged
        .as_object_mut()
        .expect("argument structs serialize to objects");
    for (key, value) in fields {
        target.insert(key.replace('-', "_"), value);
    }
    serde_json::from_value(merged)
        .with_context(|| format!("applying config file {}", path.display()))
}
