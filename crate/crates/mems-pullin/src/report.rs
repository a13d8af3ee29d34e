//! Output plumbing: a small CSV dialect and the JSON run report.
//!
//! The CSV layer exists for one contract: parsing an emitted file and
//! re-emitting it reproduces the bytes exactly. Numbers are written with
//! Rust's shortest round-trip `Display`, cells never contain separators or
//! quotes, and trailing `#`-prefixed note lines carry free-form metadata
//! (outcome, stats) without disturbing the tabular part.

use serde::Serialize;

use crate::{Error, Result};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
    Empty,
}

impl Field {
    fn emit(&self) -> String {
        match self {
            Field::Num(v) => format!("{v}"),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }

    fn parse(s: &str) -> Field {
        if s.is_empty() {
            return Field::Empty;
        }
        if let Ok(v) = s.parse::<f64>() {
            // Only classify as numeric when re-emission is byte-identical;
            // anything else stays text and round-trips verbatim.
            if format!("{v}") == s {
                return Field::Num(v);
            }
        }
        Field::Text(s.to_string())
    }
}

/// A column-labeled table plus trailing note lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// # Panics
    /// If the row width does not match the header.
    pub fn push_row(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn note<S: Into<String>>(&mut self, line: S) {
        self.notes.push(line.into());
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Field::emit).collect();
            for c in &cells {
                debug_assert!(
                    !c.contains(',') && !c.contains('\n') && !c.contains('"'),
                    "cell needs quoting, which this dialect does not do: {c:?}"
                );
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str("# ");
            out.push_str(n);
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Table> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty CSV input".into()))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut table = Table { columns, rows: Vec::new(), notes: Vec::new() };
        for line in lines {
            if let Some(rest) = line.strip_prefix('#') {
                table.notes.push(rest.strip_prefix(' ').unwrap_or(rest).to_string());
                continue;
            }
            if !table.notes.is_empty() {
                return Err(Error::InvalidInput(
                    "data row after note lines; notes must trail the table".into(),
                ));
            }
            let row: Vec<Field> = line.split(',').map(Field::parse).collect();
            if row.len() != table.columns.len() {
                return Err(Error::InvalidInput(format!(
                    "row has {} cells, header has {}",
                    row.len(),
                    table.columns.len()
                )));
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}

/// Timing and provenance attached to every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunStats {
    pub wall_ms: u128,
    pub version: &'static str,
    pub failures: Vec<String>,
}

/// Top-level JSON payload: the echoed configuration, the results, and run
/// statistics. The `results` field is the deterministic part; `wall_ms`
/// naturally varies between runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: serde_json::Value,
    pub results: serde_json::Value,
    pub stats: RunStats,
}

impl RunReport {
    pub fn new(config: serde_json::Value, results: serde_json::Value, wall_ms: u128) -> Self {
        RunReport {
            config,
            results,
            stats: RunStats {
                wall_ms,
                version: env!("CARGO_PKG_VERSION"),
                failures: Vec::new(),
            },
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serializable");
        s.push('\n');
        s
    }
}
