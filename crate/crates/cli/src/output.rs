//! Run manifests and output sinks.

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Manifest {
    command: &'static str,
    params: Value,
    seed: Option<u64>,
    workers: usize,
    started: String,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl Manifest {
    pub fn start<P: Serialize>(command: &'static str, params: &P, seed: Option<u64>) -> Self {
        Manifest {
            command,
            params: serde_json::to_value(params).unwrap_or(Value::Null),
            seed,
            workers: rayon::current_num_threads(),
            started: now(),
        }
    }

    /// The finished manifest with any extra summary fields merged in.
    pub fn finish(&self, summary: Value) -> Value {
        let mut m = json!({
            "tool": "brickwork",
            "version": VERSION,
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "workers": self.workers,
            "started": self.started,
            "finished": now(),
        });
        if let (Value::Object(m), Value::Object(extra)) = (&mut m, summary) {
            m.extend(extra);
        }
        m
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(CliError::Io)
        }
    }
}

/// A manifest that cannot be embedded goes next to the output file, or to
/// stderr when writing to stdout.
pub fn emit_side_manifest(path: Option<&Path>, manifest: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(manifest).map_err(CliError::json)?;
    match path {
        Some(p) => {
            let mut side = PathBuf::from(p).into_os_string();
            side.push(".manifest.json");
            let side = PathBuf::from(side);
            fs::write(&side, text + "\n").map_err(|e| CliError::io(&side, e))
        }
        None => {
            eprintln!("{}", serde_json::to_string(manifest).map_err(CliError::json)?);
            Ok(())
        }
    }
}

/// CSV rows preceded by a `# {manifest}` line.
pub fn csv_with_manifest<R: Serialize>(manifest: &Value, rows: &[R]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(CliError::csv)?;
    }
    let body = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    let mut text = format!("# {}\n", serde_json::to_string(manifest).map_err(CliError::json)?);
    text.push_str(&String::from_utf8_lossy(&body));
    Ok(text)
}

pub fn json_text(value: &Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value).map_err(CliError::json)? + "\n")
}
