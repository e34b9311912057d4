use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

/// Fixed 17-significant-digit scientific form; `-0` prints as `0`.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Compact series text for tables, e.g. `−12(gt)²(|α|⁶+3|α|⁸)`.
pub fn compact(pretty: &str) -> String {
    pretty.replace(" + ", "+").replace(" − ", "−").replace('·', "")
}

/// RFC-4180 CSV with a header row.
pub fn csv_string<R: AsRef<[u8]>>(header: &[&str], rows: impl IntoIterator<Item = Vec<R>>) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

pub fn json_string<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

/// Writes the CSV and JSON artifacts of one command: to the explicit paths
/// when given, otherwise into the output directory as `<command>.csv|json`.
/// Returns the paths written.
pub fn emit(cfg: &RunConfig, command: &str, csv: &str, json: &str) -> Result<Vec<PathBuf>, CliError> {
    let in_dir = |ext: &str| cfg.out_dir.as_ref().map(|d| d.join(format!("{command}.{ext}")));
    let mut written = Vec::new();
    if let Some(p) = cfg.csv.clone().or_else(|| in_dir("csv")) {
        write(&p, csv)?;
        written.push(p);
    }
    if let Some(p) = cfg.json.clone().or_else(|| in_dir("json")) {
        write(&p, json)?;
        written.push(p);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt_float(-1.2e-5), "-1.2000000000000000e-5");
        assert_eq!(fmt_float(-0.0), "0.0000000000000000e0");
        assert_eq!(fmt_float(0.1 + 0.2), "3.0000000000000004e-1");
    }

    #[test]
    fn compact_series() {
        assert_eq!(compact("−12·(gt)²·(|α|⁶ + 3·|α|⁸)"), "−12(gt)²(|α|⁶+3|α|⁸)");
        assert_eq!(compact("|α|² − 6·(gt)²·|α|⁶"), "|α|²−6(gt)²|α|⁶");
    }

    #[test]
    fn csv_quotes_when_needed() {
        let s = csv_string(&["a", "b"], [vec!["x,y", "z"]]).unwrap();
        assert_eq!(s, "a,b\r\n\"x,y\",z\r\n");
    }
}
