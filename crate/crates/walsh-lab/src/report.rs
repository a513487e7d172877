//! Tabular experiment reports with lossless CSV and JSON renderings.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single table entry. Floats are kept finite; `Cell::float` maps
/// non-finite values to the text "nan" so both renderings stay parseable.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn float(v: f64) -> Cell {
        if v.is_finite() {
            Cell::Float(v)
        } else {
            Cell::Text("nan".into())
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            Cell::Text(t) => t.parse().ok(),
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // 17 significant digits: enough to reproduce the exact bits.
            Cell::Float(v) => format!("{:.16e}", v),
            Cell::Text(t) => t.clone(),
        }
    }
}

/// Where a report came from: enough to rerun it.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub resolution: Option<u32>,
    /// Unix seconds. Honors SOURCE_DATE_EPOCH so archived outputs can be
    /// byte-identical across reruns.
    pub timestamp: u64,
}

impl Provenance {
    pub fn new(seed: Option<u64>, resolution: Option<u32>) -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
            .unwrap_or_else(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        Self {
            seed,
            resolution,
            timestamp,
        }
    }
}

/// A named table plus the configuration that produced it.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentReport {
    pub id: String,
    pub config: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn new(id: impl Into<String>, columns: Vec<String>, resolution: Option<u32>) -> Self {
        Self {
            id: id.into(),
            config: Vec::new(),
            columns,
            rows: Vec::new(),
            provenance: Provenance::new(None, resolution),
        }
    }

    pub fn with_config(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.set_config(key, value);
        self
    }

    pub fn set_config(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.config.push((key.into(), value.into()));
    }

    pub fn config_value(&self, key: &str) -> Option<&str> {
        self.config
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.provenance.seed = Some(seed);
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match column count"
        );
        self.rows.push(row);
    }

    /// CSV rendering of the rows: a header line, then one line per row.
    /// Text cells go through standard CSV quoting. Float cells carry 17
    /// significant digits, so parsing them back reproduces the exact bits.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("write to Vec");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .expect("write to Vec");
        }
        String::from_utf8(w.into_inner().expect("no partial flush")).expect("CSV is UTF-8")
    }

    /// Full JSON rendering (config and provenance included). serde_json
    /// prints floats in shortest round-trip form, so this is lossless too.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedData(format!("report JSON: {e}")))
    }
}
