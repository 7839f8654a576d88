//! CSV artifacts. All floats are written with 17 significant digits
//! (`{:.16e}`), `.` decimal separator and `\n` line endings, so regenerating
//! a file from the same plan is byte-identical and every value round-trips
//! through `f64` parsing exactly.

use crate::error::{Error, Result};
use crate::regularity::{AbscissaReport, WitnessRow};
use crate::resolvent::{ScanResult, ScanRow};
use crate::simulator::SimTrace;
use std::fmt::Write as _;
use std::path::Path;

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub const SCAN_HEADER: &str = "lambda,resolvent_norm,argmax_sigma,truncated_at,tail_ok";
pub const WITNESS_HEADER: &str = "n,sigma,lambda,mu_abs,nu_abs,norm_H,growth";
pub const ABSCISSA_HEADER: &str = "sigma,re_root_max,im_root_at_max";
pub const TRACE_HEADER: &str = "t,energy,theta_dissipation";

pub fn scan_csv_string(scan: &ScanResult) -> String {
    let mut out = String::new();
    out.push_str(SCAN_HEADER);
    out.push('\n');
    for r in &scan.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_f64(r.lambda),
            format_f64(r.resolvent_norm),
            format_f64(r.argmax_sigma),
            format_f64(r.truncated_at),
            r.tail_ok
        );
    }
    out
}

pub fn write_scan_csv(path: &Path, scan: &ScanResult) -> Result<()> {
    std::fs::write(path, scan_csv_string(scan))?;
    Ok(())
}

/// Parse a scan CSV back into rows (header required).
pub fn parse_scan_csv(text: &str) -> Result<Vec<ScanRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SCAN_HEADER => {}
        other => {
            return Err(Error::InvalidGrid(format!(
                "bad scan csv header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::InvalidGrid(format!(
                "scan csv line {} has {} fields",
                i + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::InvalidGrid(format!("scan csv line {}: {e}", i + 2)))
        };
        rows.push(ScanRow {
            lambda: parse(fields[0])?,
            resolvent_norm: parse(fields[1])?,
            argmax_sigma: parse(fields[2])?,
            truncated_at: parse(fields[3])?,
            tail_ok: match fields[4] {
                "true" => true,
                "false" => false,
                other => {
                    return Err(Error::InvalidGrid(format!(
                        "scan csv line {}: bad tail_ok {other}",
                        i + 2
                    )))
                }
            },
        });
    }
    Ok(rows)
}

pub fn witness_csv_string(rows: &[WitnessRow]) -> String {
    let mut out = String::new();
    out.push_str(WITNESS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            format_f64(r.sigma),
            format_f64(r.lambda),
            format_f64(r.mu_abs),
            format_f64(r.nu_abs),
            format_f64(r.norm_h),
            format_f64(r.growth)
        );
    }
    out
}

pub fn write_witness_csv(path: &Path, rows: &[WitnessRow]) -> Result<()> {
    std::fs::write(path, witness_csv_string(rows))?;
    Ok(())
}

pub fn abscissa_csv_string(report: &AbscissaReport) -> String {
    let mut out = String::new();
    out.push_str(ABSCISSA_HEADER);
    out.push('\n');
    for r in &report.per_mode {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_f64(r.sigma),
            format_f64(r.re_root_max),
            format_f64(r.im_root_at_max)
        );
    }
    out
}

pub fn write_abscissa_csv(path: &Path, report: &AbscissaReport) -> Result<()> {
    std::fs::write(path, abscissa_csv_string(report))?;
    Ok(())
}

pub fn trace_csv_string(trace: &SimTrace) -> String {
    let mut out = String::new();
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for k in 0..trace.times.len() {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_f64(trace.times[k]),
            format_f64(trace.energies[k]),
            format_f64(trace.theta_dissipation[k])
        );
    }
    out
}

pub fn write_trace_csv(path: &Path, trace: &SimTrace) -> Result<()> {
    std::fs::write(path, trace_csv_string(trace))?;
    Ok(())
}

/// Flat `key=value` summary file.
pub fn write_summary(path: &Path, pairs: &[(String, String)]) -> Result<()> {
    let mut out = String::new();
    for (k, v) in pairs {
        let _ = writeln!(out, "{k}={v}");
    }
    std::fs::write(path, out)?;
    Ok(())
}
