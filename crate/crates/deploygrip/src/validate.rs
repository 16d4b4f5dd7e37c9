//! Model-versus-experiment residuals over CSV tables joined on key columns.

use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::sweep::fmt_num;

#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> CliResult<Self> {
        let bad = |message: String| CliError::Csv { path: path.to_path_buf(), message };
        let file = std::fs::File::open(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
        let headers = r.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|x| x.iter().map(String::from).collect()).map_err(|e| bad(e.to_string())))
            .collect::<CliResult<Vec<Vec<String>>>>()?;
        Ok(Self { headers, rows })
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub key: Vec<String>,
    pub column: String,
    pub model: f64,
    pub experiment: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSummary {
    pub column: String,
    pub count: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub keys: Vec<String>,
    pub residuals: Vec<Residual>,
    pub summary: Vec<ColumnSummary>,
}

/// Keys compare numerically when both sides parse, so `4` matches `4.0`.
fn same_key(a: &str, b: &str) -> bool {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0),
        _ => a == b,
    }
}

/// Residuals `model − experiment` for every shared value column (or just
/// `columns` when given) on rows joined by `keys`.
pub fn compare(model: &Table, experiment: &Table, keys: &[String], columns: Option<&[String]>) -> CliResult<Report> {
    if keys.is_empty() {
        return Err(CliError::input("keys", "at least one join key is required"));
    }
    let index = |t: &Table, which: &str| -> CliResult<Vec<usize>> {
        keys.iter()
            .map(|k| {
                t.column(k).ok_or_else(|| CliError::input("keys", format!("`{k}` is not a column of the {which} csv")))
            })
            .collect()
    };
    let (mk, ek) = (index(model, "model")?, index(experiment, "experiment")?);
    let value_columns: Vec<String> = match columns {
        Some(c) => c.to_vec(),
        None => model.headers.iter().filter(|h| !keys.contains(h) && experiment.column(h).is_some()).cloned().collect(),
    };
    if value_columns.is_empty() {
        return Err(CliError::input("columns", "no shared value columns to compare"));
    }
    for c in &value_columns {
        if model.column(c).is_none() || experiment.column(c).is_none() {
            return Err(CliError::input("columns", format!("`{c}` is missing from one of the tables")));
        }
    }

    let key_of = |row: &[String], idx: &[usize]| {
        idx.iter().map(|&i| row.get(i).cloned().unwrap_or_default()).collect::<Vec<_>>()
    };
    let matches = |a: &[String], b: &[String]| a.iter().zip(b).all(|(x, y)| same_key(x, y));
    let mut unmatched = Vec::new();
    let mut pairs = Vec::new();
    for erow in &experiment.rows {
        let ekey = key_of(erow, &ek);
        match model.rows.iter().find(|m| matches(&key_of(m, &mk), &ekey)) {
            Some(mrow) => pairs.push((ekey, mrow, erow)),
            None => unmatched.push(format!("experiment ({})", ekey.join(", "))),
        }
    }
    for mrow in &model.rows {
        let mkey = key_of(mrow, &mk);
        if !experiment.rows.iter().any(|e| matches(&key_of(e, &ek), &mkey)) {
            unmatched.push(format!("model ({})", mkey.join(", ")));
        }
    }
    if !unmatched.is_empty() {
        return Err(CliError::UnmatchedKeys(unmatched));
    }

    let number = |row: &[String], i: usize, which: &str, column: &str| -> CliResult<f64> {
        let raw = row.get(i).map(String::as_str).unwrap_or("");
        raw.parse::<f64>().map_err(|_| CliError::input(column, format!("`{raw}` in the {which} csv is not a number")))
    };
    let mut residuals = Vec::new();
    for (key, mrow, erow) in pairs {
        for c in &value_columns {
            let m = number(mrow, model.column(c).expect("checked"), "model", c)?;
            let e = number(erow, experiment.column(c).expect("checked"), "experiment", c)?;
            residuals.push(Residual { key: key.clone(), column: c.clone(), model: m, experiment: e, residual: m - e });
        }
    }
    let summary = value_columns
        .iter()
        .map(|c| {
            let abs: Vec<f64> = residuals.iter().filter(|r| &r.column == c).map(|r| r.residual.abs()).collect();
            let count = abs.len();
            ColumnSummary {
                column: c.clone(),
                count,
                max_abs: abs.iter().copied().fold(0.0, f64::max),
                mean_abs: if count == 0 { 0.0 } else { abs.iter().sum::<f64>() / count as f64 },
            }
        })
        .collect();
    Ok(Report { keys: keys.to_vec(), residuals, summary })
}

pub fn write_report(out: &mut dyn Write, report: &Report) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = report.keys.clone();
    header.extend(["column", "model", "experiment", "residual"].map(String::from));
    w.write_record(&header)?;
    for r in &report.residuals {
        let mut rec = r.key.clone();
        rec.extend([r.column.clone(), fmt_num(r.model), fmt_num(r.experiment), fmt_num(r.residual)]);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
