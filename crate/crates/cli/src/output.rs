//! Artifact writing. Files are pretty JSON with a trailing newline; the
//! stdout summary is a single compact JSON line.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<PathBuf> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Runtime(format!("serializing {name}: {e}")))?;
    text.push('\n');
    std::fs::write(&path, text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// What a command hands back to `main`.
#[derive(Debug)]
pub struct Outcome {
    /// `false` maps to exit code 1.
    pub ok: bool,
    pub summary: serde_json::Map<String, serde_json::Value>,
}

impl Outcome {
    pub fn new(ok: bool) -> Self {
        Self {
            ok,
            summary: serde_json::Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.summary.insert(key.to_owned(), v);
        self
    }

    pub fn with_files(self, files: &[PathBuf]) -> Self {
        let names: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
        self.with("files", names)
    }
}

pub fn print_summary(
    command: &str,
    status: &str,
    fields: serde_json::Map<String, serde_json::Value>,
) {
    let mut line = serde_json::Map::new();
    line.insert("command".into(), command.into());
    line.insert("status".into(), status.into());
    line.extend(fields);
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::Value::Object(line));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_files_end_with_newline() {
        let dir = std::env::temp_dir().join(format!("clock-out-{}", std::process::id()));
        ensure_dir(&dir).unwrap();
        let p = write_json(&dir, "x.json", &serde_json::json!({"a": 1.5})).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "{\n  \"a\": 1.5\n}\n");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
