//! Executing a sweep and writing the CSV.

use std::io::Write;

use rayon::prelude::*;
use twarq::analytic::analytic_throughput;
use twarq::sim::{self, SimConfig};

use crate::error::{CliError, Result};
use crate::sweep::{Point, SweepSpec, Variant};

pub const HEADER: [&str; 11] =
    ["strategy", "rho", "fs_db", "fr_db", "pss", "psr", "eta_analytic", "eta_sim", "sim_stderr", "n_slots", "seed"];

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub label: String,
    pub point: Point,
    pub eta_analytic: Option<f64>,
    pub sim: Option<SimResult>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub eta: f64,
    pub std_error: f64,
    pub n_slots: u64,
    pub seed: u64,
}

impl ResultRow {
    pub fn record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let p = &self.point;
        vec![
            self.label.clone(),
            p.rho.to_string(),
            p.fs_db.to_string(),
            p.fr_db.to_string(),
            p.pss.to_string(),
            p.psr.to_string(),
            opt(self.eta_analytic),
            opt(self.sim.map(|s| s.eta)),
            opt(self.sim.map(|s| s.std_error)),
            self.sim.map(|s| s.n_slots.to_string()).unwrap_or_default(),
            self.sim.map(|s| s.seed.to_string()).unwrap_or_default(),
        ]
    }
}

fn evaluate(spec: &SweepSpec, variant: &Variant, point: &Point) -> Result<ResultRow> {
    let model = point.model()?;
    // The chain only models previous-slot CSI.
    let eta_analytic = if spec.engines.analytic() && variant.csi_mode == sim::CsiMode::PrevSlot {
        Some(analytic_throughput(variant.strategy, &model, spec.convention)?)
    } else {
        None
    };
    let sim = if spec.engines.simulate() {
        let config = SimConfig::new(variant.strategy, model)
            .with_slots(spec.n_slots)
            .with_seed(spec.seed)
            .with_csi_mode(variant.csi_mode)
            .with_xor_convention(spec.convention);
        let stats = sim::run(&config)?;
        Some(SimResult { eta: stats.throughput_estimate, std_error: stats.std_error, n_slots: spec.n_slots, seed: spec.seed })
    } else {
        None
    };
    for v in [eta_analytic, sim.map(|s| s.eta), sim.map(|s| s.std_error)].into_iter().flatten() {
        if !v.is_finite() {
            return Err(CliError::Numerical(format!("{} produced a non-finite value at {point:?}", variant.label)));
        }
    }
    Ok(ResultRow { label: variant.label.clone(), point: *point, eta_analytic, sim })
}

/// Rows come back strategy-major, then in point order, however the pool
/// schedules them.
pub fn execute(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    let jobs: Vec<(&Variant, &Point)> =
        spec.variants.iter().flat_map(|v| spec.points.iter().map(move |p| (v, p))).collect();
    jobs.par_iter().map(|(v, p)| evaluate(spec, v, p)).collect()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}
