//! CSV and JSON emission.
//!
//! Floats are written with Rust's shortest round-trip formatting in
//! exponent form, so re-reading a file gives back the identical bits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

/// Opens `path` for writing, or standard output for `None` / `-`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            let f = File::create(p).map_err(|e| CliError::io(format!("creating {}", p.display()), e))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|&x| fmt_f64(x)).collect());
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<(), CliError> {
        let csv_err = |e| CliError::Csv {
            context: "writing CSV".into(),
            source: e,
        };
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::io("writing CSV", e))
    }

    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        self.write_to(sink(path)?)
    }
}

pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), CliError> {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| CliError::io("writing JSON", e))
}

/// Parses a CSV produced by [`Table`] back into its header and numeric rows.
pub fn read_numeric_csv<R: io::Read>(reader: R) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let csv_err = |e| CliError::Csv {
        context: "reading CSV".into(),
        source: e,
    };
    let header = rdr.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| CliError::Usage(format!("non-numeric CSV field `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let values = [
            0.1 + 0.2,
            1.777_123_456_789_012_3e-23,
            -3.0e300,
            5e-324,
            371_000.000_000_1,
            f64::INFINITY,
            0.0,
        ];
        let mut t = Table::new(vec!["x"]);
        for v in values {
            t.push_numbers(&[v]);
        }
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let (header, rows) = read_numeric_csv(buf.as_slice()).unwrap();
        assert_eq!(header, vec!["x"]);
        for (v, row) in values.iter().zip(&rows) {
            assert_eq!(v.to_bits(), row[0].to_bits());
        }
    }
}
