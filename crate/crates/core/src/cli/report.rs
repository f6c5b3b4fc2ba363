use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{CliError, RunConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

/// The JSON document written by every command. Object keys are sorted, so
/// equal runs give byte-identical files.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            command: config.command.name().to_string(),
            config: config.clone(),
            results: Map::new(),
            checks: Vec::new(),
        }
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("results serialize to JSON");
        self.results.insert(key.into(), value);
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Serialize) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: serde_json::to_value(detail).expect("details serialize to JSON"),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes to a sibling temporary file and renames it into place.
    pub fn write_atomic(&self, path: &Path) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let name = path
            .file_name()
            .ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?;
        let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
        let mut f = std::fs::File::create(&tmp).map_err(io)?;
        f.write_all(self.to_json().as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        drop(f);
        std::fs::rename(&tmp, path).map_err(|e| {
            let _ = std::fs::remove_file(&tmp);
            io(e)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::Command;

    #[test]
    fn empty_report_passes() {
        let r = Report::new(&RunConfig::new(Command::Enumerate));
        assert!(r.passed());
        assert!(r.to_json().contains("\"checks\": []"));
    }

    #[test]
    fn failed_check_carries_its_detail() {
        let mut r = Report::new(&RunConfig::new(Command::Sder));
        r.check("dims", false, serde_json::json!({ "expected": 3, "found": 2 }));
        assert!(!r.passed());
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"][0]["pass"], Value::Bool(false));
        assert_eq!(v["checks"][0]["detail"]["found"], 2);
    }

    #[test]
    fn write_to_missing_directory_is_an_error() {
        let r = Report::new(&RunConfig::new(Command::Sder));
        let e = r.write_atomic(Path::new("/nonexistent-dir/x/report.json")).unwrap_err();
        assert!(matches!(e, CliError::Io { .. }));
    }
}
