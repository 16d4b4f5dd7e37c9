//! Two-axis parameter sweeps emitted as long-format CSV.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::Model;
use crate::error::{CliError, CliResult};
use crate::params::{apply, Evaluation, Metric, Param};

/// One swept parameter and its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(param: Param, values: Vec<f64>) -> CliResult<Self> {
        if values.is_empty() {
            return Err(CliError::input(param.name(), "grid is empty"));
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CliError::input(param.name(), "grid must be finite and strictly increasing"));
        }
        Ok(Self { param, values })
    }
}

/// `name=v1,v2,...` or `name=from:to:count`.
impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (name, grid) = s
            .split_once('=')
            .ok_or_else(|| CliError::input("axis", format!("`{s}` is not name=values or name=from:to:count")))?;
        let param: Param = name.trim().parse()?;
        let number = |t: &str| {
            t.trim().parse::<f64>().map_err(|_| CliError::input(param.name(), format!("`{t}` is not a number")))
        };
        let values = if grid.contains(':') {
            let parts: Vec<&str> = grid.split(':').collect();
            let [from, to, count] = parts[..] else {
                return Err(CliError::input(param.name(), "range form is from:to:count"));
            };
            let (from, to) = (number(from)?, number(to)?);
            let count: usize =
                count.trim().parse().map_err(|_| CliError::input(param.name(), format!("`{count}` is not a count")))?;
            linspace(from, to, count)
        } else {
            grid.split(',').map(number).collect::<CliResult<Vec<_>>>()?
        };
        Axis::new(param, values)
    }
}

/// `count` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n).map(|i| if i + 1 == n { to } else { from + (to - from) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Axis,
    pub metrics: Vec<Metric>,
}

impl SweepSpec {
    pub fn new(axis1: Axis, axis2: Axis, metrics: Vec<Metric>) -> CliResult<Self> {
        if axis1.param == axis2.param {
            return Err(CliError::input("axis2", "must differ from axis1"));
        }
        if metrics.is_empty() {
            return Err(CliError::input("metrics", "at least one metric is required"));
        }
        let mut metrics = metrics;
        metrics.sort_by_key(|m| m.name());
        metrics.dedup();
        Ok(Self { axis1, axis2, metrics })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis1: f64,
    pub axis2: f64,
    pub metric: Metric,
    pub value: f64,
}

/// A grid point that could not be evaluated.
#[derive(Debug, Clone)]
pub struct SweepWarning {
    pub axis1: f64,
    pub axis2: f64,
    pub message: String,
}

/// Evaluates every grid point in parallel. Rows come back ordered by
/// `(axis1, axis2, metric name)`; failing points yield NaN plus a warning.
pub fn run_sweep(base: &Model, spec: &SweepSpec) -> (Vec<SweepRow>, Vec<SweepWarning>) {
    let points: Vec<(f64, f64)> =
        spec.axis1.values.iter().flat_map(|&a| spec.axis2.values.iter().map(move |&b| (a, b))).collect();
    let results: Vec<(Vec<SweepRow>, Option<SweepWarning>)> = points
        .par_iter()
        .map(|&(a, b)| {
            let mut warning = None;
            let mut warn = |e: CliError| {
                warning.get_or_insert(SweepWarning { axis1: a, axis2: b, message: e.to_string() });
            };
            let model = apply(base, &[(spec.axis1.param, a), (spec.axis2.param, b)]);
            let rows = match &model {
                Ok(m) => {
                    let mut eval = Evaluation::new(m);
                    spec.metrics
                        .iter()
                        .map(|&metric| {
                            let value = eval.metric(metric).unwrap_or_else(|e| {
                                warn(e);
                                f64::NAN
                            });
                            SweepRow { axis1: a, axis2: b, metric, value }
                        })
                        .collect()
                }
                Err(_) => spec
                    .metrics
                    .iter()
                    .map(|&metric| SweepRow { axis1: a, axis2: b, metric, value: f64::NAN })
                    .collect(),
            };
            if let Err(e) = model {
                warn(e);
            }
            (rows, warning)
        })
        .collect();
    let mut rows = Vec::with_capacity(points.len() * spec.metrics.len());
    let mut warnings = Vec::new();
    for (r, w) in results {
        rows.extend(r);
        warnings.extend(w);
    }
    (rows, warnings)
}

pub fn write_sweep(out: &mut dyn Write, spec: &SweepSpec, rows: &[SweepRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([spec.axis1.param.name(), spec.axis2.param.name(), "metric", "value"])?;
    for r in rows {
        w.write_record([fmt_num(r.axis1), fmt_num(r.axis2), r.metric.name().to_string(), fmt_num(r.value)])?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip representation; NaN as `NaN`.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v}")
    }
}
