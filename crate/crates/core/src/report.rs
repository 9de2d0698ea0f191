//! Machine-readable outcomes of individual checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ReportOnly,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ReportOnly => "report-only",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub residual: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifacts: Option<Value>,
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>, status: Status, residual: impl Into<String>) -> Self {
        Self { check_id: check_id.into(), params: BTreeMap::new(), status, residual: residual.into(), artifacts: None }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn artifact(mut self, k: &str, v: impl Serialize) -> Self {
        let v = serde_json::to_value(v).expect("serializable artifact");
        match &mut self.artifacts {
            Some(Value::Object(map)) => {
                map.insert(k.to_string(), v);
            }
            _ => {
                let mut map = serde_json::Map::new();
                map.insert(k.to_string(), v);
                self.artifacts = Some(Value::Object(map));
            }
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Formats a float residual the same way everywhere.
pub fn fmt_residual(x: f64) -> String {
    format!("{x:.6e}")
}

/// Error sequence over an increasing parameter grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub grid: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub final_relative_error: f64,
}

impl ConvergenceReport {
    /// Builds the report and fits the log–log slope of `errors` against `grid`.
    pub fn new(grid: Vec<f64>, errors: Vec<f64>, final_relative_error: f64) -> Self {
        let slope = loglog_slope(&grid, &errors);
        Self { grid, errors, slope, final_relative_error }
    }

    /// Errors strictly decrease over the last `n` points.
    pub fn monotone_tail(&self, n: usize) -> bool {
        let k = self.errors.len().saturating_sub(n);
        self.errors[k..].windows(2).all(|w| w[1] < w[0])
    }

    /// CSV rows `(x, error, slope so far)`.
    pub fn rows(&self) -> Vec<(f64, f64, f64)> {
        (0..self.grid.len())
            .map(|i| {
                let s = if i == 0 { f64::NAN } else { loglog_slope(&self.grid[..=i], &self.errors[..=i]) };
                (self.grid[i], self.errors[i], s)
            })
            .collect()
    }
}

/// Least-squares slope of `ln|y|` against `ln x`, skipping exact zeros.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b != 0.0).map(|(a, b)| (a.ln(), b.abs().ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x: Vec<f64> = (1..6).map(|i| 10f64.powi(i)).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 / v).collect();
        assert!((loglog_slope(&x, &y) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_serializes_kebab_status() {
        let r = CheckReport::new("x", Status::ReportOnly, "0").param("n", 2);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"report-only\""));
        assert!(!s.contains("artifacts"));
    }
}
