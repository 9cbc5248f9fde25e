use serde::Serialize;
use serde_json::{Map, Value};

use ordcalc_core::fock::SeriesReport;
use ordcalc_core::scalar::format_float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct Convergence {
    pub converged: bool,
    pub diverged: bool,
    pub last_term: f64,
    pub terms: usize,
}

impl From<&SeriesReport> for Convergence {
    fn from(r: &SeriesReport) -> Self {
        Convergence {
            converged: r.converged(),
            diverged: r.diverged(),
            last_term: r.last_term,
            terms: r.terms,
        }
    }
}

/// Machine-readable result of one command. Exact values are carried as
/// decimal strings inside `result`.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    pub exact: bool,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Convergence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
}

/// Everything a command produces, in all three renderings.
pub struct Output {
    pub record: OutputRecord,
    pub text: String,
    /// Header first.
    pub csv: Vec<Vec<String>>,
    pub exit_code: i32,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.record).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.csv {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
            }
        }
    }
}

pub fn float_cell(x: f64) -> String {
    format_float(x)
}

pub fn params(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
