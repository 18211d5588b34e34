use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::args::Format;
use crate::error::{CliError, CliResult};

pub const OUTPUT_DIR_ENV: &str = "UNRUH_OUTPUT_DIR";

/// A command's result in both output shapes.
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    /// One-row report from ordered scalar fields.
    pub fn record(fields: Vec<(&str, Value)>) -> Self {
        let header = fields.iter().map(|(k, _)| k.to_string()).collect();
        let row = fields.iter().map(|(_, v)| cell(v)).collect();
        let json = Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
        Report { json, header, rows: vec![row] }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), csv_number),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// 12 significant digits, written in the shortest form that reads back
/// to the same rounded value.
pub fn csv_number(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // `+ 0.0` turns -0 into 0
    let r = round_sig(x, 12) + 0.0;
    let a = r.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// JSON number, or null for non-finite values.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x + 0.0).map_or(Value::Null, Value::Number)
}

pub fn render(report: &Report, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(&report.header).map_err(|e| CliError::Io(e.to_string()))?;
            for row in &report.rows {
                w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => {
            let p = resolve(p);
            fs::write(&p, bytes).map_err(|e| CliError::Io(format!("writing {}: {e}", p.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("writing standard output: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(csv_number(0.1234567890123456), "0.123456789012");
        assert_eq!(csv_number(2.0), "2");
        assert_eq!(csv_number(-3.0e-7), "-3e-7");
        assert_eq!(csv_number(1.0 / 3.0).parse::<f64>().unwrap(), round_sig(1.0 / 3.0, 12));
        assert_eq!(csv_number(f64::NAN), "NaN");
    }

    #[test]
    fn record_keeps_column_order() {
        let r = Report::record(vec![("b", num(1.0)), ("a", Value::Null), ("m", Value::String("x".into()))]);
        assert_eq!(r.header, vec!["b", "a", "m"]);
        assert_eq!(r.rows[0], vec!["1", "", "x"]);
        let csv = String::from_utf8(render(&r, Format::Csv).unwrap()).unwrap();
        assert_eq!(csv, "b,a,m\n1,,x\n");
    }
}
