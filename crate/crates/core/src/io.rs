//! Serialization: density JSON, plot-ready CSV profiles, scan tables,
//! certificates, discrepancy reports and sample dumps.
//!
//! Exact values always travel as strings (`"4/3"`, `"approx:…"`) in JSON;
//! CSV carries decimals rounded to a caller-chosen number of digits.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circle::CircleDensity;
use crate::density::{Linear, PiecewiseDensity};
use crate::diagnostics::DiscrepancyReport;
use crate::error::{Error, Result};
use crate::oracle::ScanReport;
use crate::scalar::Scalar;

pub const DEFAULT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceJson {
    pub c0: String,
    pub c1: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityJson {
    pub breakpoints: Vec<String>,
    pub pieces: Vec<PieceJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub circle: bool,
}

fn to_json(breakpoints: &[Scalar], pieces: &[Linear], circle: bool) -> DensityJson {
    DensityJson {
        breakpoints: breakpoints.iter().map(Scalar::to_string).collect(),
        pieces: pieces.iter().map(|f| PieceJson { c0: f.c0.to_string(), c1: f.c1.to_string() }).collect(),
        circle,
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}

pub fn density_to_json(mu: &PiecewiseDensity) -> String {
    pretty(&to_json(mu.breakpoints(), mu.pieces(), false))
}

pub fn circle_to_json(cd: &CircleDensity) -> String {
    pretty(&to_json(cd.breakpoints(), cd.pieces(), true))
}

fn parse_parts(doc: &DensityJson, bits: u32) -> Result<(Vec<Scalar>, Vec<Linear>)> {
    let parse = |s: &String| Scalar::parse_with_precision(s, bits);
    let breaks = doc.breakpoints.iter().map(parse).collect::<Result<Vec<_>>>()?;
    let pieces =
        doc.pieces.iter().map(|p| Ok(Linear::new(parse(&p.c0)?, parse(&p.c1)?))).collect::<Result<Vec<_>>>()?;
    Ok((breaks, pieces))
}

fn parse_doc(text: &str) -> Result<DensityJson> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("density JSON: {e}")))
}

/// A line density; circle documents are rejected.
pub fn density_from_json(text: &str, bits: u32) -> Result<PiecewiseDensity> {
    let doc = parse_doc(text)?;
    if doc.circle {
        return Err(Error::InvalidArgument("expected a line density, got a circle density".into()));
    }
    let (b, p) = parse_parts(&doc, bits)?;
    PiecewiseDensity::new(b, p)
}

pub fn circle_from_json(text: &str, bits: u32) -> Result<CircleDensity> {
    let doc = parse_doc(text)?;
    let (b, p) = parse_parts(&doc, bits)?;
    CircleDensity::from_parts(b, p)
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Io(format!("csv: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(csv_err)?;
    String::from_utf8(bytes).map_err(csv_err)
}

/// `(t, ρ(t))` at the ends and midpoint of every piece, with zero ends, so
/// that connecting the points draws the graph (jumps appear as vertical
/// segments).
fn profile_rows<'a>(
    intervals: impl Iterator<Item = (&'a Scalar, &'a Scalar, &'a Linear)>,
    pad_zero: bool,
    digits: usize,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "rho"]).map_err(csv_err)?;
    let half = Scalar::ratio(1, 2);
    let mut rows: Vec<(Scalar, Scalar)> = Vec::new();
    for (a, b, f) in intervals {
        let mid = &(a + b) * &half;
        rows.push((a.clone(), f.eval(a)));
        rows.push((mid.clone(), f.eval(&mid)));
        rows.push((b.clone(), f.eval(b)));
    }
    if pad_zero {
        if let (Some(first), Some(last)) = (rows.first().cloned(), rows.last().cloned()) {
            rows.insert(0, (first.0, Scalar::zero()));
            rows.push((last.0, Scalar::zero()));
        }
    }
    for (t, v) in rows {
        w.write_record([t.to_decimal(digits), v.to_decimal(digits)]).map_err(csv_err)?;
    }
    finish(w)
}

pub fn profile_csv(mu: &PiecewiseDensity, digits: usize) -> Result<String> {
    profile_rows(mu.intervals(), true, digits)
}

pub fn circle_profile_csv(cd: &CircleDensity, digits: usize) -> Result<String> {
    profile_rows(cd.intervals(), false, digits)
}

pub fn scan_csv(report: &ScanReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["c", "status", "unique", "evidence", "certificate_hash"]).map_err(csv_err)?;
    for e in &report.entries {
        let unique = match e.unique {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        w.write_record([&e.c.to_string(), ScanReport::label(e), unique, &e.evidence, &e.certificate_hash])
            .map_err(csv_err)?;
    }
    finish(w)
}

pub fn certificates_json(report: &ScanReport) -> String {
    pretty(report)
}

pub fn report_json(report: &DiscrepancyReport) -> String {
    pretty(report)
}

/// One `(statistic, value)` row per number in the report.
pub fn report_csv(report: &DiscrepancyReport, digits: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["statistic", "value"]).map_err(csv_err)?;
    let mut rows: Vec<(String, String)> = vec![
        ("n".into(), report.n.to_string()),
        ("driver".into(), report.driver.clone()),
        ("ks_raw".into(), report.ks_raw.to_decimal(digits)),
        ("ks_image".into(), report.ks_image.to_decimal(digits)),
    ];
    for (h, (a, b)) in report.weyl_raw.iter().zip(&report.weyl_image).enumerate() {
        rows.push((format!("weyl_raw_{}", h + 1), format!("{a:.e$}", e = digits)));
        rows.push((format!("weyl_image_{}", h + 1), format!("{b:.e$}", e = digits)));
    }
    rows.push(("weyl_error_bound".into(), format!("{:e}", report.weyl_error_bound)));
    for (k, v) in rows {
        w.write_record([k, v]).map_err(csv_err)?;
    }
    finish(w)
}

pub fn samples_text(points: &[Scalar], digits: usize) -> String {
    let mut out = String::with_capacity(points.len() * (digits + 4));
    for p in points {
        out.push_str(&p.to_decimal(digits));
        out.push('\n');
    }
    out
}

/// Writes to `path`, or to `out` when no path is given.
pub fn emit(path: Option<&Path>, content: &str, out: &mut dyn Write) -> Result<()> {
    let mut text = content.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}
