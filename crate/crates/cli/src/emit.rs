//! JSON and CSV serialization of reports, written atomically.

use std::io::Write;
use std::path::Path;

use nelab_core::{format_scalar, CheckReport, Scalar};

use crate::config::Format;
use crate::CliError;

/// Columns of the CSV form, one row per witness.
///
/// `witness` is the witness index, or empty for a report without witnesses.
/// `functional` and `vector` hold `;`-separated coordinates, `values` and
/// `params` hold JSON objects.
pub const CSV_HEADER: [&str; 15] = [
    "check",
    "space",
    "field",
    "verdict",
    "max_violation",
    "samples",
    "seed",
    "tolerance",
    "elapsed_ms",
    "version",
    "witness",
    "functional",
    "vector",
    "values",
    "params",
];

fn coords(v: &[Scalar]) -> String {
    v.iter().map(|z| format_scalar(*z)).collect::<Vec<_>>().join(";")
}

fn json_text<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string(v).map_err(|e| CliError::Io(e.into()))
}

fn csv_bytes(reports: &[CheckReport]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in reports {
        let params = json_text(&r.params)?;
        let head = [
            r.check.clone(),
            r.space.clone(),
            r.field.to_string(),
            r.verdict.to_string(),
            format!("{:?}", r.max_violation),
            r.samples.to_string(),
            r.seed.to_string(),
            format!("{:?}", r.tolerance),
            r.elapsed_ms.to_string(),
            r.version.clone(),
        ];
        if r.witnesses.is_empty() {
            let row =
                head.iter().cloned().chain([String::new(), String::new(), String::new(), "{}".into(), params.clone()]);
            w.write_record(row).map_err(csv_err)?;
        }
        for (i, wit) in r.witnesses.iter().enumerate() {
            let tail =
                [i.to_string(), coords(&wit.functional), coords(&wit.vector), json_text(&wit.values)?, params.clone()];
            w.write_record(head.iter().cloned().chain(tail)).map_err(csv_err)?;
        }
    }
    w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
}

/// Serialized bytes of one report.
pub fn render_report(report: &CheckReport, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_vec_pretty(report).map_err(|e| CliError::Io(e.into()))?;
            s.push(b'\n');
            Ok(s)
        }
        Format::Csv => csv_bytes(std::slice::from_ref(report)),
    }
}

/// Serialized bytes of several reports: a JSON array, or one CSV table.
pub fn render_reports(reports: &[CheckReport], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_vec_pretty(reports).map_err(|e| CliError::Io(e.into()))?;
            s.push(b'\n');
            Ok(s)
        }
        Format::Csv => csv_bytes(reports),
    }
}

/// Write to `path` through a temporary file in the same directory, or to stdout.
fn write_out(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        return Ok(out.flush()?);
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

pub fn emit_report(report: &CheckReport, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    write_out(&render_report(report, format)?, path)
}

pub fn emit_reports(reports: &[CheckReport], format: Format, path: Option<&Path>) -> Result<(), CliError> {
    write_out(&render_reports(reports, format)?, path)
}
