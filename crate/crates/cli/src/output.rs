//! Rendering and run manifests.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Fields of a manifest that legitimately differ between identical runs.
pub const TIMESTAMP_FIELDS: [&str; 2] = ["started_at_unix_ms", "wall_clock_seconds"];

/// What produced an output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub seed: u64,
    pub version: &'static str,
    pub started_at_unix_ms: u128,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub args: Vec<String>,
    pub exit_code: i32,
    pub output: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, args: &[String], seed: u64, started: SystemTime) -> Self {
        RunManifest {
            command: command.to_string(),
            args: args.to_vec(),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            started_at_unix_ms: started.duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0),
            wall_clock_seconds: started.elapsed().map(|d| d.as_secs_f64()).unwrap_or(0.0),
            outputs: vec![],
            steps: vec![],
        }
    }

    pub fn finish(&mut self, started: SystemTime) {
        self.wall_clock_seconds = started.elapsed().map(|d| d.as_secs_f64()).unwrap_or(0.0);
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_file(path, &(serde_json::to_string_pretty(self)? + "\n"))
    }
}

/// Sidecar manifest path for an output file: `out.json` -> `out.json.manifest.json`.
pub fn manifest_path(out: &Path) -> std::path::PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    s.into()
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(seqlearn_core::Error::from)?;
    }
    std::fs::write(path, contents).map_err(seqlearn_core::Error::from)?;
    Ok(())
}

pub fn render<T: Serialize>(value: &T, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Table => table(&serde_json::to_value(value)?),
    })
}

fn cell(v: &Value) -> String {
    let s = match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    };
    if s.chars().count() > 60 {
        s.chars().take(57).collect::<String>() + "..."
    } else {
        s
    }
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Objects become key/value tables, arrays of objects become one row per
/// element. Nested values are shown as compact JSON.
pub fn table(v: &Value) -> String {
    match v {
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            let mut keys: Vec<String> = vec![];
            for item in items {
                for k in item.as_object().unwrap().keys() {
                    if !keys.contains(k) {
                        keys.push(k.clone());
                    }
                }
            }
            let mut rows = vec![keys.clone()];
            for item in items {
                rows.push(keys.iter().map(|k| cell(item.get(k).unwrap_or(&Value::Null))).collect());
            }
            aligned(&rows)
        }
        Value::Object(map) => {
            let rows: Vec<Vec<String>> = map.iter().map(|(k, v)| vec![k.clone(), cell(v)]).collect();
            aligned(&rows)
        }
        other => cell(other) + "\n",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tables_align() {
        let t = table(&json!({"n": 10, "bipartite": false}));
        assert_eq!(t, "bipartite  false\nn          10\n");
        let t = table(&json!([{"a": 1, "bb": "x"}, {"a": 22, "bb": null}]));
        assert_eq!(t, "a   bb\n1   x\n22  -\n");
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(manifest_path(Path::new("out/r.json")), Path::new("out/r.json.manifest.json"));
    }
}
