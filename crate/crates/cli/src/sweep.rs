//! Phase-diagram sweep over the `(kappa, alpha)` plane.

use std::str::FromStr;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use abflux::{deficiency_indices, phase_structure, FluxConfig};

use crate::OutputFormat;

/// Inclusive linear grid `min:max:steps`.
#[derive(Debug, Clone, Copy)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }

    fn validate(self) -> Result<Self> {
        if self.steps < 2 {
            bail!("grid needs at least 2 steps, got {}", self.steps);
        }
        if !(self.min < self.max) || !self.min.is_finite() || !self.max.is_finite() {
            bail!("grid needs finite min < max, got {}:{}", self.min, self.max);
        }
        Ok(self)
    }
}

impl FromStr for GridAxis {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("expected MIN:MAX:STEPS, got {s:?}");
        }
        GridAxis {
            min: parts[0].parse().context("grid MIN")?,
            max: parts[1].parse().context("grid MAX")?,
            steps: parts[2].parse().context("grid STEPS")?,
        }
        .validate()
    }
}

/// One sweep cell. `p`, `case`, `kappa0` are empty above `alpha = 1`
/// (essential self-adjointness; no phase case applies), and `kappa0` is
/// also empty in cases I/II.
#[derive(Debug, Serialize)]
pub struct SweepRecord {
    pub kappa: f64,
    pub alpha: f64,
    pub n: usize,
    pub p: Option<u32>,
    pub case: Option<String>,
    pub kappa0: Option<f64>,
    pub boundary_flag: bool,
}

pub fn sweep_cell(kappa: f64, alpha: f64) -> SweepRecord {
    let config = FluxConfig::new(kappa, alpha).expect("finite grid values");
    let report = deficiency_indices(&config);
    let (p, case, kappa0) = match phase_structure(alpha) {
        Ok(ps) => (Some(ps.p), Some(ps.case_label.to_string()), ps.kappa0),
        Err(_) => (None, None, None),
    };
    SweepRecord {
        kappa,
        alpha,
        n: report.n_plus,
        p,
        case,
        kappa0,
        boundary_flag: report.boundary_flag,
    }
}

/// Row-major sweep: alpha by rows, kappa fastest. Cells are computed in
/// parallel; the output order is fixed by the grid, not by completion.
pub fn run_sweep(kappa: GridAxis, alpha: GridAxis) -> Vec<SweepRecord> {
    let cells: Vec<(f64, f64)> = (0..alpha.steps)
        .flat_map(|j| (0..kappa.steps).map(move |i| (i, j)))
        .map(|(i, j)| (kappa.value(i), alpha.value(j)))
        .collect();
    cells
        .into_par_iter()
        .map(|(k, a)| sweep_cell(k, a))
        .collect()
}

pub const CSV_HEADER: &str = "kappa,alpha,n,p,case,kappa0,boundary_flag";

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_records(
    records: &[SweepRecord],
    format: OutputFormat,
    out: &mut impl std::io::Write,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in records {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.kappa,
                    r.alpha,
                    r.n,
                    opt(&r.p),
                    opt(&r.case),
                    opt(&r.kappa0),
                    r.boundary_flag
                )?;
            }
        }
        OutputFormat::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}
