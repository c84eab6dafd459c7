//! Grid tables and their CSV form.

use std::io::{Read, Write};

use thiserror::Error;

use crate::numfmt::format_float;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("row {row} has {found} fields, header has {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("column `{0}` is missing")]
    MissingColumn(String),
    #[error("row {row}, column `{column}`: `{text}` is not a number")]
    Number { row: usize, column: String, text: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A header and homogeneous rows of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub const OPERATOR_HEADER: [&str; 4] = ["re_z", "im_z", "re_w", "im_w"];
pub const CHAIN_HEADER: [&str; 6] = ["re_z", "im_z", "t", "re_w", "im_w", "abs_w"];
pub const EXTENSION_HEADER: [&str; 5] = ["re_z", "im_z", "re_w", "im_w", "abs_mu"];

impl GridTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<(), TableError> {
        if row.len() != self.header.len() {
            return Err(TableError::Ragged { row: self.rows.len(), expected: self.header.len(), found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Result<usize, TableError> {
        self.header.iter().position(|h| h == name).ok_or_else(|| TableError::MissingColumn(name.into()))
    }

    /// Header line, then one line per row, numbers in shortest round-trip
    /// form; the last line is newline-terminated.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), TableError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format_float(*x)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, TableError> {
        let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
        let mut table = GridTable { header, rows: Vec::new() };
        for (i, record) in r.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .enumerate()
                .map(|(j, text)| {
                    text.trim().parse::<f64>().map_err(|_| TableError::Number {
                        row: i,
                        column: table.header.get(j).cloned().unwrap_or_default(),
                        text: text.into(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.push(row)?;
        }
        Ok(table)
    }
}
