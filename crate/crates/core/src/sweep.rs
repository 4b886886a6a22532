use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Tabulated observable against a swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Fixed scientific notation with 9 significant digits.
pub fn format_value(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

impl SweepResult {
    pub fn new(columns: &[&str], rows: Vec<Vec<f64>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == columns.len()));
        SweepResult { columns: columns.iter().map(|c| c.to_string()).collect(), rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::InvalidArgument(format!("sweep has no column `{name}`")))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of records keyed by column name. Numbers use the same fixed
    /// formatting as the CSV; non-finite values become `null`.
    pub fn to_json(&self) -> String {
        let keys: Vec<String> = self
            .columns
            .iter()
            .map(|c| serde_json::to_string(c).expect("string serializes"))
            .collect();
        let mut out = String::from("[\n");
        for (r, row) in self.rows.iter().enumerate() {
            out.push_str("  {");
            for (i, (k, &x)) in keys.iter().zip(row).enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let v = if x.is_finite() { format_value(x) } else { "null".to_string() };
                let _ = write!(out, "{k}: {v}");
            }
            out.push('}');
            if r + 1 < self.rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("]\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let s = SweepResult::new(&["a", "b"], vec![vec![1544.8, 0.0123], vec![-2.5e-10, 1.0]]);
        assert_eq!(s.to_csv(), "a,b\n1.54480000e3,1.23000000e-2\n-2.50000000e-10,1.00000000e0\n");
        assert!(s.column("c").is_err());
    }

    #[test]
    fn json_parses_back() {
        let s = SweepResult::new(&["x", "y"], vec![vec![1.0, f64::NAN], vec![3.0, 4.5e-9]]);
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v[1]["y"].as_f64().unwrap(), 4.5e-9);
        assert!(v[0]["y"].is_null());
    }
}
