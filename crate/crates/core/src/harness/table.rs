//! Result tables and their markdown / CSV / JSON renderings.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cell value recorded when a method failed on a dataset.
pub const FAIL_SENTINEL: f64 = -1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    /// Generalization error in percent, one per method.
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub methods: Vec<String>,
    pub rows: Vec<ResultRow>,
    pub average: Vec<f64>,
}

impl ResultTable {
    /// Builds the table and its average row. Failed cells are left out of the
    /// column mean; a column with no successful cell averages to the sentinel.
    pub fn new(methods: Vec<String>, rows: Vec<ResultRow>) -> Result<Self> {
        if rows.iter().any(|r| r.errors.len() != methods.len()) {
            return Err(Error::invalid("result row width differs from method count"));
        }
        let average = column_means(&methods, &rows);
        Ok(ResultTable { methods, rows, average })
    }

    pub fn recompute_average(&self) -> Vec<f64> {
        column_means(&self.methods, &self.rows)
    }

    pub fn column(&self, method: &str) -> Option<Vec<f64>> {
        let j = self.methods.iter().position(|m| m == method)?;
        Some(self.rows.iter().map(|r| r.errors[j]).collect())
    }

    pub fn average_of(&self, method: &str) -> Option<f64> {
        let j = self.methods.iter().position(|m| m == method)?;
        Some(self.average[j])
    }
}

pub fn is_failed(v: f64) -> bool {
    v == FAIL_SENTINEL
}

fn column_means(methods: &[String], rows: &[ResultRow]) -> Vec<f64> {
    (0..methods.len())
        .map(|j| {
            let ok: Vec<f64> = rows.iter().map(|r| r.errors[j]).filter(|&v| !is_failed(v)).collect();
            if ok.is_empty() {
                FAIL_SENTINEL
            } else {
                ok.iter().sum::<f64>() / ok.len() as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    #[default]
    Md,
    Csv,
    Json,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" | "markdown" => Ok(TableFormat::Md),
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::Config(format!("unknown table format {other:?}"))),
        }
    }
}

fn cell(v: f64) -> String {
    if is_failed(v) {
        "FAIL".to_string()
    } else {
        format!("{v:.2}")
    }
}

pub fn format_table(t: &ResultTable, format: TableFormat) -> String {
    match format {
        TableFormat::Md => {
            let mut out = String::new();
            let _ = writeln!(out, "| Dataset | {} |", t.methods.join(" | "));
            let _ = writeln!(out, "|---|{}", "---:|".repeat(t.methods.len()));
            let mut line = |name: &str, values: &[f64]| {
                let cells: Vec<String> = values.iter().map(|&v| cell(v)).collect();
                let _ = writeln!(out, "| {name} | {} |", cells.join(" | "));
            };
            for r in &t.rows {
                line(&r.dataset, &r.errors);
            }
            line("Average", &t.average);
            out
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["dataset".to_string()];
            header.extend(t.methods.iter().cloned());
            w.write_record(&header).expect("writing to memory");
            let named = t
                .rows
                .iter()
                .map(|r| (r.dataset.as_str(), &r.errors))
                .chain(std::iter::once(("Average", &t.average)));
            for (name, values) in named {
                let mut rec = vec![name.to_string()];
                rec.extend(values.iter().map(|&v| cell(v)));
                w.write_record(&rec).expect("writing to memory");
            }
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
        }
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(t).expect("table serialization");
            s.push('\n');
            s
        }
    }
}

pub fn parse_json_table(text: &str) -> Result<ResultTable> {
    serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))
}
