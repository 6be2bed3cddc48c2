//! CSV / JSON records and their readers.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sphereperc_core::{HexCell, HexLabel, SpherePoint, SweepRow};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub axis: String,
    pub value: f64,
    pub gamma_rad: f64,
    pub theta_hat: f64,
    pub ci95: f64,
    pub trials: u64,
    pub p_cov_analytic: f64,
    pub seed: u64,
    /// Analytic critical value of the swept quantity (N_c, h^c or d_m^c).
    pub critical: Option<f64>,
}

impl From<&SweepRow> for SweepRecord {
    fn from(r: &SweepRow) -> Self {
        Self {
            axis: r.axis.name().to_string(),
            value: r.value,
            gamma_rad: r.gamma_rad,
            theta_hat: r.theta_hat,
            ci95: r.ci95,
            trials: r.trials,
            p_cov_analytic: r.p_cov_analytic,
            seed: r.seed,
            critical: r.critical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutRecord {
    pub index: usize,
    pub ux: f64,
    pub uy: f64,
    pub uz: f64,
}

impl LayoutRecord {
    pub fn new(index: usize, p: &SpherePoint) -> Self {
        Self {
            index,
            ux: p.x(),
            uy: p.y(),
            uz: p.z(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexRecord {
    pub q: i64,
    pub r: i64,
    pub center_x_km: f64,
    pub center_y_km: f64,
    pub label: String,
}

impl HexRecord {
    pub fn new(cell: &HexCell, label: HexLabel) -> Self {
        Self {
            q: cell.q,
            r: cell.r,
            center_x_km: cell.center.x,
            center_y_km: cell.center.y,
            label: label.to_string(),
        }
    }
}

/// Serializes `records` in `format`.
pub fn encode<T: Serialize>(records: &[T], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r)?;
            }
            Ok(w.into_inner().context("flushing CSV")?)
        }
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(records)?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

/// Parses what [`encode`] produced.
pub fn decode<T: DeserializeOwned>(bytes: &[u8], format: Format) -> Result<Vec<T>> {
    match format {
        Format::Csv => csv::Reader::from_reader(bytes)
            .deserialize()
            .collect::<Result<Vec<T>, _>>()
            .context("parsing CSV"),
        Format::Json => serde_json::from_slice(bytes).context("parsing JSON"),
    }
}

pub fn read_file<T: DeserializeOwned>(path: &Path, format: Format) -> Result<Vec<T>> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .with_context(|| format!("reading {}", path.display()))?;
    decode(&bytes, format)
}

/// Writes `bytes` to `path`, or to stdout when `path` is `None`.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            Ok(out.flush()?)
        }
    }
}
