use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use super::config::{Column, Format};
use super::run::SweepTable;
use crate::error::{Error, Result};

/// Significant digits written for every number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats like C's `%.12g`, with `inf`, `-inf` and `nan` tokens and a
/// compact exponent (`1.5e-7`).
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Inverse of [`format_number`].
pub fn parse_number(token: &str) -> Option<f64> {
    match token {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => token.parse().ok(),
    }
}

fn cells(table: &SweepTable, row: usize) -> Vec<String> {
    let r = &table.rows[row];
    let mut out: Vec<String> = r.params.iter().map(|&v| format_number(v)).collect();
    for (c, &v) in table.columns.iter().zip(&r.outputs) {
        out.push(if *c == Column::Flags { r.flags.clone() } else { format_number(v) });
    }
    out
}

pub fn write_csv(table: &SweepTable, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{}", table.header().join(","))?;
    for i in 0..table.rows.len() {
        writeln!(out, "{}", cells(table, i).join(","))?;
    }
    Ok(())
}

/// JSON array of flat objects. Non-finite numbers become the strings
/// `"inf"`, `"-inf"` and `"nan"`.
pub fn to_json(table: &SweepTable) -> Value {
    let header = table.header();
    let rows = (0..table.rows.len())
        .map(|i| {
            let mut obj = Map::new();
            let flag_index = table
                .columns
                .iter()
                .position(|&c| c == Column::Flags)
                .map(|j| j + table.param_names.len());
            for (k, (name, cell)) in header.iter().zip(cells(table, i)).enumerate() {
                let v = if Some(k) == flag_index {
                    Value::String(cell)
                } else {
                    match cell.parse::<f64>().ok().and_then(Number::from_f64) {
                        Some(n) => Value::Number(n),
                        None => Value::String(cell),
                    }
                };
                obj.insert(name.clone(), v);
            }
            Value::Object(obj)
        })
        .collect();
    Value::Array(rows)
}

pub fn write_json(table: &SweepTable, out: &mut impl Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, &to_json(table))?;
    writeln!(out)
}

pub fn write_table(table: &SweepTable, format: Format, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::Json => write_json(table, out),
    }
}

/// Writes to `destination`, or stdout when `None`.
pub fn emit(table: &SweepTable, format: Format, destination: Option<&Path>) -> Result<()> {
    match destination {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match write_table(table, format, &mut lock) {
                // a closed reader (e.g. `| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other.map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                }),
            }
        }
        Some(path) => {
            let io = |source| Error::Io {
                path: path.to_path_buf(),
                source,
            };
            let file = std::fs::File::create(path).map_err(io)?;
            let mut w = std::io::BufWriter::new(file);
            write_table(table, format, &mut w).map_err(io)?;
            w.flush().map_err(io)
        }
    }
}
