use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Scores of one method: `values[repeat][subject]`, in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub method: String,
    pub subjects: Vec<u32>,
    pub values: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(method: impl Into<String>, subjects: Vec<u32>, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|r| r.len() != subjects.len()) || subjects.is_empty() {
            return Err(Error::ShapeMismatch {
                expected: format!("repeats x {} subjects", subjects.len()),
                got: format!("{} rows", values.len()),
            });
        }
        Ok(Self {
            method: method.into(),
            subjects,
            values,
        })
    }

    pub fn repeats(&self) -> usize {
        self.values.len()
    }

    /// Per-subject means over repeats.
    pub fn subject_means(&self) -> Vec<f64> {
        let r = self.repeats() as f64;
        (0..self.subjects.len())
            .map(|s| self.values.iter().map(|row| row[s]).sum::<f64>() / r)
            .collect()
    }

    /// Mean of the per-subject means.
    pub fn avg(&self) -> f64 {
        let m = self.subject_means();
        m.iter().sum::<f64>() / m.len() as f64
    }

    /// Population standard deviation of the per-repeat subject averages.
    pub fn std(&self) -> f64 {
        let per_repeat: Vec<f64> = self
            .values
            .iter()
            .map(|row| row.iter().sum::<f64>() / row.len() as f64)
            .collect();
        let mean = per_repeat.iter().sum::<f64>() / per_repeat.len() as f64;
        let var = per_repeat.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / per_repeat.len() as f64;
        var.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            _ => Err(Error::Config(format!("unknown report format `{s}`"))),
        }
    }
}

fn cell(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders tables sharing one subject list; columns are subjects, Avg, Std.
pub fn render_report(tables: &[ResultTable], format: ReportFormat) -> Result<String> {
    let first = tables.first().ok_or(Error::Empty)?;
    if let Some(t) = tables.iter().find(|t| t.subjects != first.subjects) {
        return Err(Error::Config(format!(
            "table `{}` covers different subjects than `{}`",
            t.method, first.method
        )));
    }
    let mut header = vec!["method".to_string()];
    header.extend(first.subjects.iter().map(|s| format!("S{s}")));
    header.push("Avg".into());
    header.push("Std".into());

    let rows: Vec<Vec<String>> = tables
        .iter()
        .map(|t| {
            let mut row = vec![t.method.clone()];
            row.extend(t.subject_means().into_iter().map(cell));
            row.push(cell(t.avg()));
            row.push(cell(t.std()));
            row
        })
        .collect();

    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            writeln!(out, "{}", header.join(",")).expect("string write");
            for row in rows {
                writeln!(out, "{}", row.join(",")).expect("string write");
            }
        }
        ReportFormat::Markdown => {
            // compare the printed values so ties bold together
            let best = tables
                .iter()
                .map(|t| cell(t.avg()).parse::<f64>().unwrap_or(f64::NAN))
                .fold(f64::NEG_INFINITY, f64::max);
            writeln!(out, "| {} |", header.join(" | ")).expect("string write");
            writeln!(out, "|{}", "---|".repeat(header.len())).expect("string write");
            let avg_col = header.len() - 2;
            for (t, mut row) in tables.iter().zip(rows) {
                if cell(t.avg()) == cell(best) {
                    row[avg_col] = format!("**{}**", row[avg_col]);
                }
                writeln!(out, "| {} |", row.join(" | ")).expect("string write");
            }
        }
    }
    Ok(out)
}

/// Writes the rendered report to `path`.
pub fn emit_report(tables: &[ResultTable], path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let text = render_report(tables, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(method: &str, values: Vec<Vec<f64>>) -> ResultTable {
        let n = values[0].len() as u32;
        ResultTable::new(method, (0..n).collect(), values).unwrap()
    }

    #[test]
    fn aggregates_match_brute_force() {
        let t = table("cr", vec![vec![60.0, 70.0, 80.0], vec![62.0, 68.0, 90.0]]);
        assert_eq!(t.subject_means(), vec![61.0, 69.0, 85.0]);
        assert!((t.avg() - 215.0 / 3.0).abs() < 1e-9);
        // repeat averages 70 and 220/3
        let a = 70.0;
        let b = 220.0 / 3.0;
        let m = (a + b) / 2.0;
        let want = (((a - m) * (a - m) + (b - m) * (b - m)) / 2.0f64).sqrt();
        assert!((t.std() - want).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let t = table("none", vec![vec![50.0, 75.5]]);
        let csv = render_report(&[t], ReportFormat::Csv).unwrap();
        assert_eq!(csv, "method,S0,S1,Avg,Std\nnone,50.00,75.50,62.75,0.00\n");
    }

    #[test]
    fn markdown_bolds_best() {
        let a = table("none", vec![vec![60.0, 70.0]]);
        let b = table("cr", vec![vec![70.0, 72.0]]);
        let md = render_report(&[a, b], ReportFormat::Markdown).unwrap();
        let lines: Vec<_> = md.lines().collect();
        assert_eq!(lines[0], "| method | S0 | S1 | Avg | Std |");
        assert_eq!(lines[2], "| none | 60.00 | 70.00 | 65.00 | 0.00 |");
        assert_eq!(lines[3], "| cr | 70.00 | 72.00 | **71.00** | 0.00 |");
    }

    #[test]
    fn mismatched_subjects_rejected() {
        let a = table("a", vec![vec![1.0, 2.0]]);
        let b = table("b", vec![vec![1.0]]);
        assert!(render_report(&[a, b], ReportFormat::Csv).is_err());
        assert!(render_report(&[], ReportFormat::Csv).is_err());
        assert!(ResultTable::new("x", vec![0], vec![]).is_err());
    }

    #[test]
    fn emit_is_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let t = table("cr", vec![vec![61.234, 70.0], vec![59.0, 71.5]]);
        let p1 = dir.path().join("a.md");
        let p2 = dir.path().join("b.md");
        emit_report(&[t.clone()], &p1, ReportFormat::Markdown).unwrap();
        emit_report(&[t], &p2, ReportFormat::Markdown).unwrap();
        assert_eq!(std::fs::read(p1).unwrap(), std::fs::read(p2).unwrap());
    }
}
