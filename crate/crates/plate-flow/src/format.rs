//! CSV and JSON renderings of sweep results.

use std::fmt::Write as _;

use plate_flow_core::analytic::{FieldKind, Profile};
use plate_flow_core::oracle::OracleSolution;
use plate_flow_core::sweep::{SweepResult, SweepSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Significant digits in CSV cells.
pub const CSV_DIGITS: usize = 9;
/// Significant digits for scalars printed by `eval`.
pub const SCALAR_DIGITS: usize = 12;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("profiles do not share a Y grid")]
    RaggedProfiles,
}

/// `v` with `digits` significant digits, like C's `%.{digits}g`.
pub fn sig(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn table(header: Vec<String>, ys: &[f64], columns: &[&[f64]]) -> Result<String, FormatError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&header)?;
    for (i, &y) in ys.iter().enumerate() {
        let mut row = Vec::with_capacity(columns.len() + 1);
        row.push(sig(y, CSV_DIGITS));
        row.extend(columns.iter().map(|c| sig(c[i], CSV_DIGITS)));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

/// `Y,<label(v1)>,...` then one row per sample point.
pub fn sweep_csv(r: &SweepResult) -> Result<String, FormatError> {
    if r.profiles.iter().any(|p| p.ys != r.spec.ys) {
        return Err(FormatError::RaggedProfiles);
    }
    let mut header = vec!["Y".to_string()];
    header.extend(r.spec.column_labels());
    let columns: Vec<&[f64]> = r.profiles.iter().map(|p| p.values.as_slice()).collect();
    table(header, &r.spec.ys, &columns)
}

/// One oracle field in the same layout as a profile column.
pub fn solution_csv(sol: &OracleSolution, kind: FieldKind, label: &str) -> Result<String, FormatError> {
    table(vec!["Y".to_string(), label.to_string()], &sol.ys, &[sol.field(kind)])
}

/// Spec and profiles, full precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDocument {
    pub spec: SweepSpec,
    pub profiles: Vec<Profile>,
}

impl From<&SweepResult> for SweepDocument {
    fn from(r: &SweepResult) -> Self {
        Self {
            spec: r.spec.clone(),
            profiles: r.profiles.clone(),
        }
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, FormatError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn sweep_json(r: &SweepResult) -> Result<String, FormatError> {
    to_json(&SweepDocument::from(r))
}

pub fn parse_sweep_json(text: &str) -> Result<SweepDocument, FormatError> {
    Ok(serde_json::from_str(text)?)
}

/// Fixed-width text table.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}
