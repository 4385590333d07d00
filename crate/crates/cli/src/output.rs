//! Artifact writing: CSV files and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use wavesource::io::{csv_line, format_f64, parse_column, parse_matrix};
use wavesource::{Error, GridSpec, SpaceTimeSamples};

use crate::config::RunConfig;

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(cfg: &RunConfig) -> Result<Self> {
        let root = cfg.out_dir().to_path_buf();
        fs::create_dir_all(&root).with_context(|| format!("creating output directory {}", root.display()))?;
        let out = Self { root };
        out.manifest(cfg)?;
        Ok(out)
    }

    pub fn write(&self, name: &str, text: &str) -> Result<()> {
        let path = self.root.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn write_bytes(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
    }

    fn manifest(&self, cfg: &RunConfig) -> Result<()> {
        #[derive(Serialize)]
        struct Manifest<'a> {
            tool: &'static str,
            version: &'static str,
            command: &'static str,
            config: &'a RunConfig,
        }
        let m = Manifest {
            tool: "wavesource",
            version: env!("CARGO_PKG_VERSION"),
            command: cfg.command,
            config: cfg,
        };
        let mut text = serde_json::to_string_pretty(&m)?;
        text.push('\n');
        self.write("manifest.json", &text)
    }
}

/// Rows of numbers under an optional header.
pub fn table(header: Option<&str>, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = String::new();
    if let Some(h) = header {
        s.push_str(h);
        s.push('\n');
    }
    for row in rows {
        s.push_str(&csv_line(&row));
        s.push('\n');
    }
    s
}

/// `name,value` pairs for metrics files.
pub fn key_values(pairs: &[(&str, String)]) -> String {
    let mut s = String::from("metric,value\n");
    for (k, v) in pairs {
        s.push_str(&format!("{k},{v}\n"));
    }
    s
}

pub fn num(v: f64) -> String {
    format_f64(v)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_column(path: &Path) -> Result<Vec<f64>> {
    parse_column(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// `M+1` rows (space) of `N+1` values (time).
pub fn read_space_time(path: &Path, grid: &GridSpec) -> Result<SpaceTimeSamples> {
    let rows = parse_matrix(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let (m, n) = (grid.m() + 1, grid.n() + 1);
    if rows.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            what: "space-time samples (M+1 rows of N+1 values)",
            expected: m * n,
            found: rows.iter().map(Vec::len).sum(),
        })
        .with_context(|| format!("reading {}", path.display()));
    }
    Ok(SpaceTimeSamples::from_fn(m, n, |i, j| rows[i][j]))
}
