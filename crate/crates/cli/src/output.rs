//! Deterministic CSV/JSON emission.
//!
//! Numeric cells are written in scientific notation with 17 significant
//! digits so identical configurations produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

/// 17-significant-digit scientific notation.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with a fixed header; every row carries the config hash in its
/// last column.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    hash: String,
}

impl CsvTable {
    pub fn new(columns: &[&str], config_hash: &str) -> Self {
        let mut header: Vec<String> = columns.iter().map(|s| s.to_string()).collect();
        header.push("config_hash".to_string());
        Self {
            header,
            rows: Vec::new(),
            hash: config_hash.to_string(),
        }
    }

    pub fn push(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len() + 1, self.header.len(), "column count mismatch");
        let mut row = cells;
        row.push(self.hash.clone());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
        let mut text = String::new();
        text.push_str(&self.header.join(","));
        text.push('\n');
        for row in &self.rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

/// Write pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &serde_json::Value) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Output path helper.
pub fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
