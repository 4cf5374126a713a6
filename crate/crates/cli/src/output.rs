//! Output files.  Every command first checks all of its targets, so a
//! refusal to overwrite leaves nothing half-written.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn new() -> Self {
        Outputs { files: Vec::new() }
    }

    pub fn add(&mut self, path: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.files.push((path.into(), contents.into()));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    /// Writes everything, or nothing if some target exists and `force` is off.
    pub fn commit(self, force: bool) -> Result<Vec<PathBuf>, CliError> {
        if !force {
            if let Some(p) = self.paths().find(|p| p.exists()) {
                return Err(CliError::Exists(p.to_path_buf()));
            }
        }
        let mut written = Vec::with_capacity(self.files.len());
        for (path, contents) in self.files {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|source| CliError::Write { path: parent.to_path_buf(), source })?;
            }
            fs::write(&path, contents).map_err(|source| CliError::Write { path: path.clone(), source })?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Fixed-precision number formatting for CSV cells.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        v.to_string()
    }
}

/// Quotes a CSV field when needed.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// File-name-safe form of a label.
pub fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}
