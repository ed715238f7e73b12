//! CSV and JSON writers. Floats are always written with 17 significant
//! digits so that every value parses back to the same bits.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::Config(format!(
                "unknown format '{s}'; expected one of csv, json"
            ))),
        }
    }
}

/// One cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Str(String),
    Num(f64),
    Int(u64),
    /// "mean" in CSV, `null` in JSON.
    Missing(&'static str),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Str(s) => s.clone(),
            Field::Num(v) => format_float(*v),
            Field::Int(v) => v.to_string(),
            Field::Missing(s) => (*s).to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Field::Str(s) => Value::String(s.clone()).to_string(),
            Field::Num(v) if v.is_finite() => format_float(*v),
            Field::Num(_) | Field::Missing(_) => "null".into(),
            Field::Int(v) => v.to_string(),
        }
    }
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// A record type with a fixed column layout.
pub trait Row {
    fn header() -> &'static [&'static str];
    fn fields(&self) -> Vec<Field>;
}

/// Per-trial or per-value-mean result of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub scheme: String,
    pub sweep_variable: String,
    pub sweep_value: f64,
    /// `None` marks the mean over trials.
    pub trial: Option<usize>,
    pub covert_rate: f64,
    pub p_opt: f64,
    pub seed: u64,
}

impl Row for SweepRecord {
    fn header() -> &'static [&'static str] {
        &[
            "scheme",
            "sweep_variable",
            "sweep_value",
            "trial",
            "covert_rate_bps_hz",
            "p_opt_watts",
            "seed",
        ]
    }

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Str(self.scheme.clone()),
            Field::Str(self.sweep_variable.clone()),
            Field::Num(self.sweep_value),
            match self.trial {
                Some(t) => Field::Int(t as u64),
                None => Field::Missing("mean"),
            },
            Field::Num(self.covert_rate),
            Field::Num(self.p_opt),
            Field::Int(self.seed),
        ]
    }
}

pub fn write_csv<R: Row, W: Write>(records: &[R], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::header())?;
    for r in records {
        w.write_record(r.fields().iter().map(Field::csv))?;
    }
    w.flush()
}

pub fn write_json<R: Row, W: Write>(records: &[R], mut out: W) -> io::Result<()> {
    let header = R::header();
    out.write_all(b"[")?;
    for (i, r) in records.iter().enumerate() {
        out.write_all(if i == 0 { b"\n  {" } else { b",\n  {" })?;
        for (j, (k, v)) in header.iter().zip(r.fields()).enumerate() {
            if j > 0 {
                out.write_all(b", ")?;
            }
            write!(out, "\"{k}\": {}", v.json())?;
        }
        out.write_all(b"}")?;
    }
    out.write_all(if records.is_empty() { b"]\n" } else { b"\n]\n" })?;
    out.flush()
}

pub fn write_records<R: Row, W: Write>(records: &[R], out: W, format: Format) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => write_json(records, out),
    }
}

/// Writes `records` to `path`; I/O failures carry the path.
pub fn emit<R: Row>(records: &[R], path: &Path, format: Format) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_records(records, BufWriter::new(file), format).map_err(io_err)
}

fn bad(msg: impl fmt::Display) -> Error {
    Error::Config(format!("malformed record data: {msg}"))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| bad(format!("not a number: '{s}'")))
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse().map_err(|_| bad(format!("not an integer: '{s}'")))
}

/// Reads back sweep records written by [`write_records`].
pub fn parse_sweep_records(text: &str, format: Format) -> Result<Vec<SweepRecord>> {
    match format {
        Format::Csv => {
            let mut rd = csv::Reader::from_reader(text.as_bytes());
            let header: Vec<String> = rd.headers().map_err(bad)?.iter().map(str::to_string).collect();
            if header != SweepRecord::header() {
                return Err(bad(format!("unexpected header {header:?}")));
            }
            rd.records()
                .map(|row| {
                    let row = row.map_err(bad)?;
                    Ok(SweepRecord {
                        scheme: row[0].to_string(),
                        sweep_variable: row[1].to_string(),
                        sweep_value: parse_f64(&row[2])?,
                        trial: if &row[3] == "mean" {
                            None
                        } else {
                            Some(parse_u64(&row[3])? as usize)
                        },
                        covert_rate: parse_f64(&row[4])?,
                        p_opt: parse_f64(&row[5])?,
                        seed: parse_u64(&row[6])?,
                    })
                })
                .collect()
        }
        Format::Json => {
            let v: Value = serde_json::from_str(text).map_err(bad)?;
            let rows = v.as_array().ok_or_else(|| bad("expected an array"))?;
            rows.iter()
                .map(|o| {
                    let s = |k: &str| {
                        o[k].as_str()
                            .map(str::to_string)
                            .ok_or_else(|| bad(format!("missing {k}")))
                    };
                    let f = |k: &str| o[k].as_f64().ok_or_else(|| bad(format!("missing {k}")));
                    Ok(SweepRecord {
                        scheme: s("scheme")?,
                        sweep_variable: s("sweep_variable")?,
                        sweep_value: f("sweep_value")?,
                        trial: o["trial"].as_u64().map(|t| t as usize),
                        covert_rate: f("covert_rate_bps_hz")?,
                        p_opt: f("p_opt_watts")?,
                        seed: o["seed"].as_u64().ok_or_else(|| bad("missing seed"))?,
                    })
                })
                .collect()
        }
    }
}
