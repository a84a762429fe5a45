//! `key = value` experiment manifests. `#` starts a comment; keys are the
//! long flag names without dashes in front.

use std::fs;
use std::path::Path;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub source: String,
    pub line: usize,
}

impl Entry {
    pub fn origin(&self) -> String {
        format!("{}:{}", self.source, self.line)
    }

    pub fn invalid(&self, value: &str) -> CliError {
        CliError::Usage(format!("{}: invalid value '{value}' for '{}'", self.origin(), self.key))
    }
}

pub fn parse(text: &str, source: &str) -> Result<Vec<Entry>> {
    let mut entries: Vec<Entry> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{source}:{}: expected 'key = value'", n + 1)))?;
        let key = key.trim().replace('_', "-");
        if entries.iter().any(|e| e.key == key) {
            return Err(CliError::Usage(format!("{source}:{}: duplicate key '{key}'", n + 1)));
        }
        entries.push(Entry { key, value: value.trim().to_string(), source: source.to_string(), line: n + 1 });
    }
    Ok(entries)
}

pub fn load(path: &Path) -> Result<Vec<Entry>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--config: cannot read {}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}
