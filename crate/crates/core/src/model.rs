//! Analytical performance model: partition time, makespan, speedup.
//!
//! `t(G_p) = |E_p^b| / c + |E_p| / r_p`, the makespan is the largest such
//! time, and with the host as the slowest element the speedup over a
//! host-only run reduces to `1 / (β · r_cpu / c + α)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;

use crate::error::{Error, Result};
use crate::telemetry::RunReport;

/// Inputs of the speedup model. Rates are in edges per second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    /// Communication rate for 4-byte messages.
    pub c: f64,
    pub r_cpu: f64,
    pub r_gpu: f64,
    pub bytes_per_edge_message: f64,
}

impl Default for ModelParams {
    /// A PCIe 3.0 link (12 GB/s, so 3e9 four-byte edges/s) and a 1e9 edges/s host.
    fn default() -> Self {
        ModelParams {
            alpha: 0.5,
            beta: 0.05,
            c: 3e9,
            r_cpu: 1e9,
            r_gpu: 4e9,
            bytes_per_edge_message: 4.0,
        }
    }
}

impl ModelParams {
    /// `c` scaled to the configured message size.
    pub fn c_effective(&self) -> f64 {
        self.c * 4.0 / self.bytes_per_edge_message
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c", self.c),
            ("r_cpu", self.r_cpu),
            ("r_gpu", self.r_gpu),
            ("bytes_per_edge_message", self.bytes_per_edge_message),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::validation(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::validation(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }
}

/// Seconds to process a partition with `edges` edges, `boundary` of them
/// crossing, on an element of rate `rate`, over a link of rate `c`.
pub fn partition_time(edges: f64, boundary: f64, rate: f64, c: f64) -> Result<f64> {
    if !(rate > 0.0) || !(c > 0.0) {
        return Err(Error::validation("processing and communication rates must be positive"));
    }
    Ok(boundary / c + edges / rate)
}

/// The slowest partition's time.
pub fn makespan(times: &[f64]) -> Result<f64> {
    if times.is_empty() {
        return Err(Error::validation("makespan of no partitions"));
    }
    Ok(times.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Predicted hybrid speedup over a host-only run.
pub fn speedup(p: &ModelParams) -> Result<f64> {
    p.validate()?;
    let denom = p.beta * p.r_cpu / p.c_effective() + p.alpha;
    if denom == 0.0 {
        return Err(Error::validation("speedup is undefined for alpha = beta = 0"));
    }
    Ok(1.0 / denom)
}

/// Parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Alpha,
    Beta,
    RCpu,
    BytesPerEdgeMessage,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Alpha => "alpha",
            Axis::Beta => "beta",
            Axis::RCpu => "r_cpu",
            Axis::BytesPerEdgeMessage => "bytes_per_edge_message",
        }
    }

    fn apply(self, p: &mut ModelParams, value: f64) {
        match self {
            Axis::Alpha => p.alpha = value,
            Axis::Beta => p.beta = value,
            Axis::RCpu => p.r_cpu = value,
            Axis::BytesPerEdgeMessage => p.bytes_per_edge_message = value,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "alpha" => Ok(Axis::Alpha),
            "beta" => Ok(Axis::Beta),
            "r_cpu" | "rcpu" => Ok(Axis::RCpu),
            "bytes_per_edge_message" | "bytes" => Ok(Axis::BytesPerEdgeMessage),
            other => Err(Error::validation(format!("unknown sweep axis {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: Axis,
    pub value: f64,
    pub speedup: f64,
}

/// Evaluates the speedup at every grid point along `axis`.
pub fn sweep(template: &ModelParams, axis: Axis, grid: &[f64]) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::validation("empty sweep grid"));
    }
    grid.iter()
        .map(|&value| {
            let mut p = *template;
            axis.apply(&mut p, value);
            Ok(SweepRow {
                axis,
                value,
                speedup: speedup(&p)?,
            })
        })
        .collect()
}

/// CSV with header `axis,value,speedup`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("axis,value,speedup\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.axis, r.value, r.speedup));
    }
    out
}

/// Pearson correlation coefficient; NaN when either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "series lengths differ");
    let cov = xs.covariance(ys);
    cov / (xs.std_dev() * ys.std_dev())
}

/// Predicted against measured speedup for one hybrid run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelValidation {
    pub alpha: f64,
    pub beta: f64,
    pub predicted: f64,
    pub measured: f64,
    /// `(predicted - measured) / measured`.
    pub error: f64,
    pub r_cpu: f64,
    pub c: f64,
    pub bytes_per_edge_message: f64,
    /// Set when an accelerator, not the host, took longest; the model assumes otherwise.
    pub out_of_contract: bool,
}

/// Compares a hybrid run with the model fed by its plan and a host-only baseline.
///
/// `r_cpu` is calibrated from the baseline as edges processed over compute
/// time; β is the reduced share when the run used message reduction.
pub fn validate_model(baseline: &RunReport, hybrid: &RunReport, c: f64) -> Result<ModelValidation> {
    if baseline.ledger.partitions != 1 {
        return Err(Error::validation(
            "model validation needs a single-partition baseline run",
        ));
    }
    let compute_ms: f64 = baseline.ledger.entries.iter().map(|e| e.compute_ms).sum();
    if !(compute_ms > 0.0) || baseline.edges_traversed == 0 {
        return Err(Error::validation("baseline run did no measurable work"));
    }
    let r_cpu = baseline.edges_traversed as f64 / (compute_ms / 1e3);
    let beta = if hybrid.reduced {
        hybrid.plan.beta_reduced
    } else {
        hybrid.plan.beta_raw
    };
    let params = ModelParams {
        alpha: hybrid.plan.alpha_actual,
        beta,
        c,
        r_cpu,
        r_gpu: r_cpu,
        bytes_per_edge_message: hybrid.message_bytes as f64,
    };
    let predicted = speedup(&params)?;
    let measured = baseline.total_ms / hybrid.total_ms;
    let totals = hybrid.ledger.partition_totals();
    let host = hybrid.plan.elements.iter().position(|e| e.is_host()).unwrap_or(0);
    let host_total = totals[host].0 + totals[host].1;
    let out_of_contract = totals
        .iter()
        .enumerate()
        .any(|(p, t)| p != host && t.0 + t.1 > host_total);
    Ok(ModelValidation {
        alpha: params.alpha,
        beta,
        predicted,
        measured,
        error: (predicted - measured) / measured,
        r_cpu,
        c,
        bytes_per_edge_message: params.bytes_per_edge_message,
        out_of_contract,
    })
}
