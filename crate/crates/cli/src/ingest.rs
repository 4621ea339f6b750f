//! CSV ingestion with gap handling.
//!
//! Missing observations (an empty cell, `nan` or `NA`, any case) become
//! weight-zero samples with a `0.0` placeholder value.

use std::fs::File;
use std::io::{self, Read};
use std::path::PathBuf;

use whittaker_core::Signal;

use crate::error::{CliError, IngestError, Result};

pub const MIN_ROWS: usize = 4;
/// Relative tolerance on the sample step for the uniform-spacing check.
pub const SPACING_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Path(PathBuf),
    Stdin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestSpec {
    pub source: Source,
    /// `None` means the sample index is the abscissa.
    pub t_column: Option<String>,
    pub y_column: String,
    pub w_column: Option<String>,
    pub delimiter: u8,
}

impl Default for IngestSpec {
    fn default() -> Self {
        Self {
            source: Source::Stdin,
            t_column: Some("t".into()),
            y_column: "y".into(),
            w_column: None,
            delimiter: b',',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub signal: Signal,
    pub uniform_spacing: bool,
}

pub fn is_missing(token: &str) -> bool {
    token.is_empty() || token.eq_ignore_ascii_case("nan") || token.eq_ignore_ascii_case("na")
}

fn resolve(headers: &csv::StringRecord, name: &str) -> Result<usize, IngestError> {
    if let Some(i) = headers.iter().position(|h| h == name) {
        return Ok(i);
    }
    // A bare number selects a column by zero-based position.
    match name.parse::<usize>() {
        Ok(i) if i < headers.len() => Ok(i),
        _ => Err(IngestError::MissingColumn(name.to_string())),
    }
}

fn parse_number(raw: &str, line: u64, column: &str) -> Result<f64, IngestError> {
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| IngestError::Parse {
            line,
            column: column.to_string(),
            value: raw.to_string(),
        })
}

struct Row {
    line: u64,
    t: f64,
    y: f64,
    w: f64,
}

pub fn ingest_csv(spec: &IngestSpec) -> Result<Ingested> {
    let reader: Box<dyn Read> = match &spec.source {
        Source::Path(p) => Box::new(File::open(p).map_err(|e| {
            IngestError::Io(io::Error::new(e.kind(), format!("{}: {e}", p.display())))
        })?),
        Source::Stdin => Box::new(io::stdin()),
    };
    ingest_reader(reader, spec)
}

pub fn ingest_reader<R: Read>(reader: R, spec: &IngestSpec) -> Result<Ingested> {
    let mut csv = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(reader);
    let malformed = |e: csv::Error| {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        IngestError::Malformed {
            line,
            message: e.to_string(),
        }
    };
    let headers = csv.headers().map_err(malformed)?.clone();
    let t_idx = spec
        .t_column
        .as_deref()
        .map(|name| resolve(&headers, name))
        .transpose()?;
    let y_idx = resolve(&headers, &spec.y_column)?;
    let w_idx = spec
        .w_column
        .as_deref()
        .map(|name| resolve(&headers, name))
        .transpose()?;
    let t_name = spec.t_column.as_deref().unwrap_or("t");
    let w_name = spec.w_column.as_deref().unwrap_or("w");

    let mut rows = Vec::new();
    for (k, record) in csv.records().enumerate() {
        let record = record.map_err(malformed)?;
        let line = record.position().map(|p| p.line()).unwrap_or(k as u64 + 2);
        let field = |i: usize| record.get(i).unwrap_or("");
        let t = match t_idx {
            Some(i) => parse_number(field(i), line, t_name)?,
            None => k as f64,
        };
        let y_raw = field(y_idx);
        let (y, mut w) = if is_missing(y_raw) {
            (0.0, 0.0)
        } else {
            (parse_number(y_raw, line, &spec.y_column)?, 1.0)
        };
        if let Some(i) = w_idx {
            let raw = field(i);
            let given = if is_missing(raw) { 0.0 } else { parse_number(raw, line, w_name)? };
            if !(0.0..=1.0).contains(&given) {
                return Err(IngestError::WeightOutOfRange { line, value: given }.into());
            }
            if w > 0.0 {
                w = given;
            }
        }
        rows.push(Row { line, t, y, w });
    }
    if rows.len() < MIN_ROWS {
        return Err(IngestError::TooFewRows {
            needed: MIN_ROWS,
            found: rows.len(),
        }
        .into());
    }
    rows.sort_by(|a, b| a.t.total_cmp(&b.t));
    if let Some(pair) = rows.windows(2).find(|p| p[0].t == p[1].t) {
        let (first, second) = (pair[0].line.min(pair[1].line), pair[0].line.max(pair[1].line));
        return Err(IngestError::DuplicateAbscissa {
            t: pair[0].t,
            first,
            second,
        }
        .into());
    }
    let t = rows.iter().map(|r| r.t).collect();
    let y = rows.iter().map(|r| r.y).collect();
    let w = rows.iter().map(|r| r.w).collect();
    let signal = Signal::new(t, y, w).map_err(CliError::Data)?;
    let uniform_spacing = signal.is_uniformly_spaced(SPACING_TOLERANCE);
    Ok(Ingested {
        signal,
        uniform_spacing,
    })
}
