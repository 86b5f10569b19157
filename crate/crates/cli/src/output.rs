use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsOut {
    pub m: i64,
    pub k: i64,
    pub c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TolerancesOut {
    pub radius_rel: f64,
    pub residual: f64,
    pub degenerate_band: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub tolerances: TolerancesOut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<R, X = ThresholdRow> {
    pub params: ParamsOut,
    pub results: Vec<R>,
    pub meta: Meta,
    /// Closed-form critical values, present for sweeps only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<X>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayRow {
    pub j: i64,
    pub angle: f64,
    pub residue: i64,
    pub parity: String,
    pub alpha: f64,
    pub alpha_sign: String,
    pub case: String,
    pub zeros: usize,
    pub degenerate: bool,
    pub r0: Option<f64>,
    pub c0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub source: String,
    pub min_count: u64,
    pub max_count: u64,
    pub direction: String,
    pub count_at_c: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub j: i64,
    pub r: f64,
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub c0: f64,
    pub alpha_class: i64,
    /// Ray indices separated by `;`.
    pub rays: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub count: u64,
    /// Critical values in `(previous c, c]`, separated by `;`.
    pub crossed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub c: Option<f64>,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
    pub max_distance: Option<f64>,
    pub resolution: Option<usize>,
}

/// Row types carry their CSV header so empty result sets still get one.
pub trait Row: Serialize {
    const HEADER: &'static [&'static str];
}

impl Row for RayRow {
    const HEADER: &'static [&'static str] =
        &["j", "angle", "residue", "parity", "alpha", "alpha_sign", "case", "zeros", "degenerate", "r0", "c0"];
}

impl Row for PredictionRow {
    const HEADER: &'static [&'static str] = &["source", "min_count", "max_count", "direction", "count_at_c"];
}

impl Row for ZeroRow {
    const HEADER: &'static [&'static str] = &["j", "r", "re", "im", "residual", "degenerate"];
}

impl Row for ThresholdRow {
    const HEADER: &'static [&'static str] = &["c0", "alpha_class", "rays"];
}

impl Row for SweepRow {
    const HEADER: &'static [&'static str] = &["c", "count", "crossed"];
}

impl Row for CheckRow {
    const HEADER: &'static [&'static str] =
        &["check", "c", "expected", "observed", "passed", "max_distance", "resolution"];
}

pub fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn sink(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Write an envelope as pretty JSON, or its `results` as CSV.
pub fn emit<R: Row>(envelope: &Envelope<R>, format: Format, path: Option<&Path>) -> anyhow::Result<()> {
    let mut out = sink(path)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, envelope)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut out);
            w.write_record(R::HEADER)?;
            for row in &envelope.results {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}
