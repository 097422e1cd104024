//! Result rows and their table, CSV and JSON renderings. Column order is
//! fixed: scenario, family, protocol, fidelity, bound, expected, status, ms.

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const COLUMNS: [&str; 8] = ["scenario", "family", "protocol", "fidelity", "bound", "expected", "status", "ms"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// A numeric value or a short annotation such as `n/a (perfect)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => sig12(*x),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scenario: String,
    pub family: String,
    pub protocol: String,
    /// Achieved fidelity, or the quantity the protocol column names.
    pub fidelity: Cell,
    pub bound: Cell,
    pub expected: Cell,
    pub status: Status,
    pub ms: u128,
}

impl Row {
    fn fields(&self, timing: bool) -> [String; 8] {
        [
            self.scenario.clone(),
            self.family.clone(),
            self.protocol.clone(),
            self.fidelity.render(),
            self.bound.render(),
            self.expected.render(),
            match self.status {
                Status::Pass => "pass".into(),
                Status::Fail => "fail".into(),
            },
            if timing { self.ms.to_string() } else { "-".into() },
        ]
    }
}

/// Twelve significant digits; scientific notation outside `[1e-5, 1e12)`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    // exponent after rounding, so 9.9999999999996 counts as 1e1
    let e: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("exponent");
    if x == 0.0 {
        format!("{:.11}", 0.0)
    } else if (-5..12).contains(&e) {
        format!("{:.*}", (11 - e) as usize, x)
    } else {
        sci
    }
}

pub fn emit(format: Format, rows: &[Row], timing: bool) -> Result<String, CliError> {
    match format {
        Format::Table => Ok(table(rows, timing)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS)?;
            for r in rows {
                w.write_record(r.fields(timing))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| {
                    COLUMNS
                        .iter()
                        .zip(r.fields(timing))
                        .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
                        .collect()
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&objects)?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn table(rows: &[Row], timing: bool) -> String {
    let body: Vec<[String; 8]> = rows.iter().map(|r| r.fields(timing)).collect();
    let mut widths = COLUMNS.map(str::len);
    for f in &body {
        for (w, s) in widths.iter_mut().zip(f) {
            *w = (*w).max(s.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&COLUMNS.map(String::from));
    for f in &body {
        out.push_str(&line(f));
    }
    out
}
