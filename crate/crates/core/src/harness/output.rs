//! JSON, CSV and aligned-text rendering of rows and reports.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use super::census::CensusReport;
use super::table::TableRow;
use super::verify::{RowStatus, VerifyReport};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "txt" => Ok(Format::Text),
            other => Err(format!("unknown format {other:?}; use json, csv or text")),
        }
    }
}

/// Right-aligns `cells` under `header`, except the last column, which is left-aligned.
pub fn aligned(header: &[&str], cells: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: &[String]| {
        let last = row.len().saturating_sub(1);
        let parts: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i == last { c.clone() } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in cells {
        line(&mut out, row);
    }
    out
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, mut w: impl Write) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

pub fn write_rows(rows: &[TableRow], format: Format, mut w: impl Write) -> Result<(), HarnessError> {
    match format {
        Format::Json => write_json(rows, w),
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["q", "g", "N", "n", "l", "|S|", "h_S", "g_K", "source", "exact", "description"])?;
            for r in rows {
                out.write_record(row_cells(r))?;
            }
            out.flush()?;
            Ok(())
        }
        Format::Text => {
            let cells: Vec<Vec<String>> = rows.iter().map(row_cells).collect();
            let header = ["q", "g", "N", "n", "l", "|S|", "h_S", "g_K", "src", "exact", "delta_S"];
            w.write_all(aligned(&header, &cells).as_bytes())?;
            Ok(())
        }
    }
}

fn row_cells(r: &TableRow) -> Vec<String> {
    vec![
        r.q.to_string(),
        r.g.to_string(),
        r.n_lower.to_string(),
        r.n.to_string(),
        r.l.to_string(),
        r.s1.to_string(),
        r.h_s.to_string(),
        r.g_k.to_string(),
        r.source.to_string(),
        if r.exact { "yes" } else { "no" }.to_string(),
        r.description.clone(),
    ]
}

pub fn write_census(report: &CensusReport, format: Format, mut w: impl Write) -> Result<(), HarnessError> {
    let listed = report
        .method_a
        .iter()
        .map(|d| ("A", d))
        .chain(report.method_b_only.iter().map(|d| ("B", d)));
    match format {
        Format::Json => write_json(report, w),
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["method", "description", "sets"])?;
            for (m, d) in listed {
                out.write_record([m, d.description.as_str(), &d.sets.to_string()])?;
            }
            out.flush()?;
            Ok(())
        }
        Format::Text => {
            let cells: Vec<Vec<String>> =
                listed.map(|(m, d)| vec![m.to_string(), d.description.clone(), d.sets.to_string()]).collect();
            writeln!(
                w,
                "q = {}: {} sets, {} descriptions by method A, {} more by method B, {} disagreements",
                report.q,
                report.sets,
                report.method_a.len(),
                report.method_b_only.len(),
                report.mismatches.len()
            )?;
            w.write_all(aligned(&["method", "delta_S", "sets"], &cells).as_bytes())?;
            Ok(())
        }
    }
}

fn status_text(s: RowStatus) -> &'static str {
    match s {
        RowStatus::Pass => "pass",
        RowStatus::Fail => "FAIL",
        RowStatus::Unresolved => "unresolved",
        RowStatus::Excluded => "excluded",
    }
}

pub fn write_report(report: &VerifyReport, format: Format, mut w: impl Write) -> Result<(), HarnessError> {
    let cells: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|o| {
            vec![
                o.row.group.label().to_string(),
                o.row.q.to_string(),
                o.row.g.to_string(),
                o.row.n_text(),
                o.row.n.map_or("-".into(), |n| n.to_string()),
                o.row.l.to_string(),
                o.row.s.to_string(),
                o.bound.to_string(),
                status_text(o.status).to_string(),
                o.detail.clone(),
            ]
        })
        .collect();
    let header = ["group", "q", "g", "N", "n", "l", "|S|", "bound", "status", "detail"];
    match format {
        Format::Json => write_json(report, w),
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(header)?;
            for c in &cells {
                out.write_record(c)?;
            }
            out.flush()?;
            Ok(())
        }
        Format::Text => {
            w.write_all(aligned(&header, &cells).as_bytes())?;
            if let Some(c) = &report.census {
                writeln!(
                    w,
                    "census q = 16: {} by method A, {} more by method B, missing {:?}, unexpected {:?}, {} disagreements: {}",
                    c.method_a,
                    c.method_b_only.len(),
                    c.missing,
                    c.unexpected,
                    c.mismatches,
                    if c.pass { "pass" } else { "FAIL" }
                )?;
            }
            writeln!(
                w,
                "{} passed, {} failed, {} unresolved, {} excluded (external ground fields): {}",
                report.passed,
                report.failed,
                report.unresolved,
                report.excluded,
                if report.ok() { "OK" } else { "FAILED" }
            )?;
            Ok(())
        }
    }
}
