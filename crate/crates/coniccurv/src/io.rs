//! File formats: point and L-curve CSV input, CSV/JSON result tables.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use thiserror::Error;

use crate::bench::{OrderExperimentResult, Table2Row};
use crate::convexity::ConvexPiece;
use crate::energy::EnergyReport;
use crate::estimator::CurvatureRecord;
use crate::lcurve::{CornerReport, LCurveSample};
use crate::projective::PlanePoint;
use crate::tangent::{Polyline, PolylineError, TangentField, TangentStatus};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: residual and solution norms must be positive")]
    NonPositiveNorm { line: u64 },
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error(transparent)]
    Polyline(#[from] PolylineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn read_file(path: &Path) -> Result<String, DataError> {
    std::fs::read_to_string(path).map_err(|source| DataError::Io { path: path.display().to_string(), source })
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn malformed(line: u64, message: impl Into<String>) -> DataError {
    DataError::Malformed { line, message: message.into() }
}

fn parse_field(s: &str, line: u64, what: &str) -> Result<f64, DataError> {
    s.parse::<f64>().map_err(|_| malformed(line, format!("cannot parse {what} `{s}`")))
}

/// Points, one `x,y` pair per line, with an optional `x,y` header.
pub fn parse_points_csv(text: &str) -> Result<Vec<PlanePoint>, DataError> {
    let mut out = Vec::new();
    for (k, rec) in reader(text).records().enumerate() {
        let line = k as u64 + 1;
        let rec = rec.map_err(|e| malformed(line, e.to_string()))?;
        let line = rec.position().map_or(line, |p| p.line());
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if k == 0 && rec.len() == 2 && &rec[0] == "x" && &rec[1] == "y" {
            continue;
        }
        if rec.len() != 2 {
            return Err(malformed(line, format!("expected 2 fields, found {}", rec.len())));
        }
        let x = parse_field(&rec[0], line, "x")?;
        let y = parse_field(&rec[1], line, "y")?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(malformed(line, "coordinates must be finite"));
        }
        out.push(PlanePoint::new(x, y));
    }
    Ok(out)
}

pub fn read_points_csv(path: &Path, closed: bool) -> Result<Polyline, DataError> {
    let pts = parse_points_csv(&read_file(path)?)?;
    Ok(Polyline::new(pts, closed)?)
}

pub fn write_points_csv(points: &[PlanePoint]) -> String {
    let mut s = String::from("x,y\n");
    for p in points {
        let _ = writeln!(s, "{},{}", fmt_f64(p.x), fmt_f64(p.y));
    }
    s
}

pub const LCURVE_HEADER: &str = "alpha,residual_norm,solution_norm";

/// L-curve samples. Rows are sorted by alpha when every alpha is known and
/// kept in file order otherwise.
pub fn parse_lcurve_csv(text: &str) -> Result<Vec<LCurveSample>, DataError> {
    let mut rows = reader(text).into_records();
    let header = rows.next().ok_or(DataError::MissingHeader(LCURVE_HEADER))?;
    let header = header.map_err(|e| malformed(1, e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != ["alpha", "residual_norm", "solution_norm"] {
        return Err(DataError::MissingHeader(LCURVE_HEADER));
    }
    let mut out = Vec::new();
    for (k, rec) in rows.enumerate() {
        let line = k as u64 + 2;
        let rec = rec.map_err(|e| malformed(line, e.to_string()))?;
        let line = rec.position().map_or(line, |p| p.line());
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rec.len() != 3 {
            return Err(malformed(line, format!("expected 3 fields, found {}", rec.len())));
        }
        let alpha = parse_field(&rec[0], line, "alpha")?;
        let residual_norm = parse_field(&rec[1], line, "residual_norm")?;
        let solution_norm = parse_field(&rec[2], line, "solution_norm")?;
        if !(residual_norm > 0.0 && solution_norm > 0.0 && residual_norm.is_finite() && solution_norm.is_finite()) {
            return Err(DataError::NonPositiveNorm { line });
        }
        out.push(LCurveSample { alpha, residual_norm, solution_norm });
    }
    if out.iter().all(|s| s.alpha.is_finite()) {
        out.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    }
    Ok(out)
}

pub fn read_lcurve_csv(path: &Path) -> Result<Vec<LCurveSample>, DataError> {
    parse_lcurve_csv(&read_file(path)?)
}

fn json_doc(command: &str, records: Vec<Value>) -> String {
    let doc = json!({ "schema_version": SCHEMA_VERSION, "command": command, "records": records });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn curvature_table(records: &[CurvatureRecord], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("index,kappa_left,kappa_right,kappa_avg,sign,status\n");
            for r in records {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.index,
                    fmt_f64(r.kappa_left),
                    fmt_f64(r.kappa_right),
                    fmt_f64(r.kappa_avg),
                    r.sign,
                    r.status.as_str()
                );
            }
            s
        }
        Format::Json => json_doc(
            "curvature",
            records
                .iter()
                .map(|r| {
                    json!({
                        "index": r.index,
                        "kappa_left": r.kappa_left,
                        "kappa_right": r.kappa_right,
                        "kappa_avg": r.kappa_avg,
                        "sign": r.sign,
                        "status": r.status.as_str(),
                        "reduced": r.reduced,
                    })
                })
                .collect(),
        ),
    }
}

fn tangent_status(s: TangentStatus) -> &'static str {
    match s {
        TangentStatus::Ok => "Ok",
        TangentStatus::Degenerate => "Degenerate",
        TangentStatus::NotEstimated => "NotEstimated",
    }
}

pub fn tangent_table(field: &TangentField, format: Format) -> String {
    let coeffs = |i: usize| field.lines[i].map(|l| l.coefficients());
    match format {
        Format::Csv => {
            let mut s = String::from("index,a,b,c,status\n");
            for i in 0..field.len() {
                let [a, b, c] = coeffs(i).unwrap_or([0.0; 3]);
                let _ = writeln!(s, "{i},{},{},{},{}", fmt_f64(a), fmt_f64(b), fmt_f64(c), tangent_status(field.status[i]));
            }
            s
        }
        Format::Json => json_doc(
            "tangents",
            (0..field.len())
                .map(|i| {
                    let [a, b, c] = coeffs(i).unwrap_or([0.0; 3]);
                    json!({ "index": i, "a": a, "b": b, "c": c, "status": tangent_status(field.status[i]), "reduced": field.reduced[i] })
                })
                .collect(),
        ),
    }
}

pub fn split_table(pieces: &[ConvexPiece], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("piece,start_index,end_index,turn_sign\n");
            for (k, p) in pieces.iter().enumerate() {
                let _ = writeln!(s, "{k},{},{},{}", p.start_index, p.end_index, p.turn_sign);
            }
            s
        }
        Format::Json => json_doc(
            "split",
            pieces
                .iter()
                .enumerate()
                .map(|(k, p)| json!({ "piece": k, "start_index": p.start_index, "end_index": p.end_index, "turn_sign": p.turn_sign }))
                .collect(),
        ),
    }
}

pub fn corner_table(samples: &[LCurveSample], report: &CornerReport, format: Format) -> String {
    let rows: Vec<(usize, &LCurveSample, &CurvatureRecord)> =
        samples.iter().zip(&report.records).enumerate().map(|(i, (s, r))| (i, s, r)).collect();
    match format {
        Format::Csv => {
            let mut s = String::from("index,alpha,residual_norm,solution_norm,kappa,status,is_corner,is_local_max\n");
            for (i, smp, r) in rows {
                let _ = writeln!(
                    s,
                    "{i},{},{},{},{},{},{},{}",
                    fmt_f64(smp.alpha),
                    fmt_f64(smp.residual_norm),
                    fmt_f64(smp.solution_norm),
                    fmt_f64(r.kappa_avg),
                    r.status.as_str(),
                    u8::from(i == report.corner_index),
                    u8::from(report.local_maxima.contains(&i))
                );
            }
            s
        }
        Format::Json => {
            let records = rows
                .into_iter()
                .map(|(i, smp, r)| {
                    json!({
                        "index": i,
                        "alpha": smp.alpha,
                        "residual_norm": smp.residual_norm,
                        "solution_norm": smp.solution_norm,
                        "kappa": r.kappa_avg,
                        "status": r.status.as_str(),
                        "is_corner": i == report.corner_index,
                        "is_local_max": report.local_maxima.contains(&i),
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "corner",
                "corner_index": report.corner_index,
                "corner_alpha": report.corner_alpha,
                "local_maxima": report.local_maxima,
                "records": Value::Array(records),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

pub fn table2_table(rows: &[Table2Row], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("curve,circle,poly4,conic,coniccurv\n");
            for r in rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.curve,
                    fmt_f64(r.circle),
                    fmt_f64(r.poly4),
                    fmt_f64(r.conic),
                    fmt_f64(r.coniccurv)
                );
            }
            s
        }
        Format::Json => json_doc(
            "bench-accuracy",
            rows.iter().map(|r| serde_json::to_value(r).expect("serializable")).collect(),
        ),
    }
}

pub fn order_table(conic: &OrderExperimentResult, cc: &OrderExperimentResult, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("k,h,cond_conic,re_conic,cond_coniccurv,re_coniccurv\n");
            for (a, b) in conic.records.iter().zip(&cc.records) {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    a.k,
                    fmt_f64(a.h),
                    fmt_f64(a.cond),
                    fmt_f64(a.re),
                    fmt_f64(b.cond),
                    fmt_f64(b.re)
                );
            }
            let _ = writeln!(
                s,
                "# slopes (k >= 2): cond_conic={},re_conic={},cond_coniccurv={},re_coniccurv={}",
                fmt_f64(conic.cond_slope),
                fmt_f64(conic.re_slope),
                fmt_f64(cc.cond_slope),
                fmt_f64(cc.re_slope)
            );
            s
        }
        Format::Json => {
            let records = conic
                .records
                .iter()
                .zip(&cc.records)
                .map(|(a, b)| {
                    json!({ "k": a.k, "h": a.h, "cond_conic": a.cond, "re_conic": a.re, "cond_coniccurv": b.cond, "re_coniccurv": b.re })
                })
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "bench-order",
                "records": Value::Array(records),
                "slopes": {
                    "cond_conic": conic.cond_slope,
                    "re_conic": conic.re_slope,
                    "cond_coniccurv": cc.cond_slope,
                    "re_coniccurv": cc.re_slope,
                },
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

pub fn energy_table(report: &EnergyReport, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("level,S,E\n");
            for l in &report.per_level {
                let _ = writeln!(s, "{},{},{}", l.level, fmt_f64(l.stretch), fmt_f64(l.bending));
            }
            s
        }
        Format::Json => {
            let records = report
                .per_level
                .iter()
                .map(|l| json!({ "level": l.level, "S": l.stretch, "E": l.bending }))
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "energy",
                "S": report.s,
                "E": report.e,
                "levels_used": report.levels_used,
                "one_sided": report.diagnostics.one_sided,
                "degenerate": report.diagnostics.degenerate,
                "records": Value::Array(records),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}
