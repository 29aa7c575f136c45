//! Result files: table CSV, run report and reference file.

use std::fs::File;
use std::path::Path;

use anyhow::{Context, Result};
use qpgf_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Column order of the results table.
pub const CSV_HEADER: [&str; 12] = [
    "k", "unknowns", "A", "iters", "eps1", "eps", "p", "d", "bc", "b00_re", "b00_im", "error",
];

/// One row of the results table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Row {
    pub k: f64,
    pub n: usize,
    pub m: usize,
    pub a: f64,
    pub p: usize,
    pub d: f64,
    pub bc: String,
    pub iters: Option<usize>,
    pub eps1: Option<f64>,
    pub eps: Option<f64>,
    pub b00: Option<Complex64>,
    pub error: Option<String>,
}

fn sci(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

fn plain(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

impl Row {
    fn record(&self) -> Vec<String> {
        vec![
            format!("{}", self.k),
            format!("{}x{}", self.n, self.m),
            format!("{}", self.a),
            self.iters.map(|i| i.to_string()).unwrap_or_default(),
            sci(self.eps1),
            sci(self.eps),
            self.p.to_string(),
            format!("{}", self.d),
            self.bc.clone(),
            plain(self.b00.map(|b| b.re)),
            plain(self.b00.map(|b| b.im)),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// CSV writer that flushes after every row.
pub struct TableWriter {
    inner: csv::Writer<File>,
}

impl TableWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut inner = csv::Writer::from_writer(file);
        inner.write_record(CSV_HEADER)?;
        inner.flush()?;
        Ok(TableWriter { inner })
    }

    pub fn push(&mut self, row: &Row) -> Result<()> {
        self.inner.write_record(row.record())?;
        self.inner.flush()?;
        Ok(())
    }
}

/// Stored `B00` of a reference solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    /// `[re, im]`.
    pub b00: [f64; 2],
    pub eps: f64,
    pub iterations: usize,
    pub config: RunConfig,
}

impl Reference {
    pub fn b00(&self) -> Complex64 {
        Complex64::new(self.b00[0], self.b00[1])
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading reference {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing reference {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, toml::to_string_pretty(self)?).with_context(|| format!("writing {}", path.display()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub k: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b00: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution_warning: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSummary {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Machine-readable record of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: String,
    pub total_seconds: f64,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<RateSummary>,
    pub points: Vec<PointReport>,
}

impl RunReport {
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, toml::to_string_pretty(self)?).with_context(|| format!("writing {}", path.display()))
    }
}
