use super::config::RunConfig;
use crate::error::{Error, Result};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Float(x) if x.is_nan() => "nan".into(),
            Cell::Float(x) => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReportBody {
    Table { header: Vec<String>, rows: Vec<Vec<Cell>> },
    Tree(Value),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub id: String,
    pub config: RunConfig,
    pub body: ReportBody,
    /// Additional JSON documents written as `<id>.<name>.json`.
    pub extras: Vec<(String, Value)>,
}

fn git_hash() -> String {
    std::process::Command::new("git")
        .args(["rev-parse", "HEAD"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|o| String::from_utf8_lossy(&o.stdout).trim().to_string())
        .unwrap_or_else(|| "unknown".into())
}

impl ExperimentReport {
    pub fn table(id: &str, config: &RunConfig, header: &[&str], rows: Vec<Vec<Cell>>) -> Self {
        ExperimentReport {
            id: id.into(),
            config: config.clone(),
            body: ReportBody::Table { header: header.iter().map(|s| s.to_string()).collect(), rows },
            extras: Vec::new(),
        }
    }

    pub fn tree(id: &str, config: &RunConfig, v: Value) -> Self {
        ExperimentReport { id: id.into(), config: config.clone(), body: ReportBody::Tree(v), extras: Vec::new() }
    }

    /// The CSV (or JSON) body; deterministic for a given report.
    pub fn body_bytes(&self) -> Result<Vec<u8>> {
        match &self.body {
            ReportBody::Table { header, rows } => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(header).map_err(|e| Error::Io(e.to_string()))?;
                for r in rows {
                    w.write_record(r.iter().map(Cell::render)).map_err(|e| Error::Io(e.to_string()))?;
                }
                w.into_inner().map_err(|e| Error::Io(e.to_string()))
            }
            ReportBody::Tree(v) => {
                let mut s = serde_json::to_vec_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
                s.push(b'\n');
                Ok(s)
            }
        }
    }

    pub fn extension(&self) -> &'static str {
        match self.body {
            ReportBody::Table { .. } => "csv",
            ReportBody::Tree(_) => "json",
        }
    }

    pub fn provenance(&self) -> Value {
        let ts = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        json!({
            "experiment": self.id,
            "config": self.config.serialize(),
            "git": git_hash(),
            "timestamp": ts,
            "seed": self.config.seed,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    /// Writes `<id>.<ext>`, the extras and `<id>.meta.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let json = |v: &Value| serde_json::to_vec_pretty(v).map_err(|e| Error::Io(e.to_string()));
        let body = dir.join(format!("{}.{}", self.id, self.extension()));
        std::fs::write(&body, self.body_bytes()?)?;
        let mut out = vec![body];
        for (name, v) in &self.extras {
            let p = dir.join(format!("{}.{name}.json", self.id));
            std::fs::write(&p, json(v)?)?;
            out.push(p);
        }
        let meta = dir.join(format!("{}.meta.json", self.id));
        std::fs::write(&meta, json(&self.provenance())?)?;
        out.push(meta);
        Ok(out)
    }
}
