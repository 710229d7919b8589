use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::OutputFormat;
use crate::error::{Error, Result};

/// Formats like C's `%.12e`: twelve mantissa digits and a signed exponent of
/// at least two digits, e.g. `-1.250000000000e-03`.
pub fn sci(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent marker in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Uniform axis from `MIN:MAX:POINTS`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridAxis {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Config(format!("grid '{text}': {why} (expected MIN:MAX:POINTS)"));
        let parts: Vec<&str> = text.trim().split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(bad("need three fields"));
        };
        let min: f64 = lo.trim().parse().map_err(|_| bad("MIN is not a number"))?;
        let max: f64 = hi.trim().parse().map_err(|_| bad("MAX is not a number"))?;
        let points: usize = n.trim().parse().map_err(|_| bad("POINTS is not a count"))?;
        if !min.is_finite() || !max.is_finite() || !(max > min) {
            return Err(bad("need finite MIN < MAX"));
        }
        if points < 2 {
            return Err(bad("need at least 2 points"));
        }
        Ok(Self { min, max, points })
    }

    pub fn values(&self) -> Vec<f64> {
        crate::cat::linspace(self.min, self.max, self.points)
    }
}

/// Where and how a command writes its table.
#[derive(Debug, Clone)]
pub struct Sink {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn json_number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

impl Sink {
    /// Writes `rows` under `columns`. CSV output gets a JSON sidecar with
    /// `meta` next to the file; JSON output embeds `meta`.
    pub fn write_table(&self, columns: &[&str], rows: &[Vec<f64>], meta: &Value) -> Result<()> {
        let mut out = open(self.path.as_deref())?;
        match self.format {
            OutputFormat::Csv => {
                writeln!(out, "{}", columns.join(","))?;
                for row in rows {
                    let line: Vec<String> = row.iter().map(|&v| sci(v)).collect();
                    writeln!(out, "{}", line.join(","))?;
                }
                out.flush()?;
                if let Some(p) = &self.path {
                    write_json(&sidecar_path(p), meta)?;
                }
            }
            OutputFormat::Json => {
                let data: Vec<Value> = rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|&v| json_number(v)).collect()))
                    .collect();
                let doc = json!({ "meta": meta, "columns": columns, "rows": data });
                serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
                writeln!(out)?;
                out.flush()?;
            }
        }
        Ok(())
    }
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut out = open(Some(path))?;
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn print_json(value: &Value) -> Result<()> {
    let mut out = open(None)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_format() {
        assert_eq!(sci(1.0), "1.000000000000e+00");
        assert_eq!(sci(-0.00125), "-1.250000000000e-03");
        assert_eq!(sci(2.506628274631), "2.506628274631e+00");
        assert_eq!(sci(6.02e23), "6.020000000000e+23");
        assert_eq!(sci(1e-300), "1.000000000000e-300");
        assert_eq!(sci(0.0), "0.000000000000e+00");
        assert_eq!(sci(f64::NAN), "nan");
        assert_eq!(sci(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn grid_parsing() {
        let g = GridAxis::parse("-8:8:161").unwrap();
        assert_eq!(g, GridAxis { min: -8.0, max: 8.0, points: 161 });
        assert_eq!(g.values()[80], 0.0);
        for bad in ["", "1:2", "a:2:3", "2:1:5", "0:1:1", "0:1:-3", "0:inf:4"] {
            assert!(GridAxis::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_with_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/out.csv");
        let sink = Sink { path: Some(path.clone()), format: OutputFormat::Csv };
        sink.write_table(&["x", "rho"], &[vec![0.0, 0.5], vec![1.0, 0.25]], &json!({"t": 0.0}))
            .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "x,rho\n0.000000000000e+00,5.000000000000e-01\n1.000000000000e+00,2.500000000000e-01\n"
        );
        let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sub/out.json")).unwrap()).unwrap();
        assert_eq!(meta["t"], 0.0);
    }
}
