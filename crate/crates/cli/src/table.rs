//! CSV output. Provenance goes in leading `#` comment lines so the file still
//! loads with any comment-aware CSV reader.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{io_error, CliError};

pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            comments: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, w: impl Write) -> Result<(), CliError> {
        let mut w = io::BufWriter::new(w);
        for c in &self.comments {
            writeln!(w, "# {c}").map_err(|e| CliError::Io {
                path: "<output>".into(),
                source: e,
            })?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.header)?;
        for r in &self.rows {
            csv.write_record(r)?;
        }
        csv.flush().map_err(|e| CliError::Io {
            path: "<output>".into(),
            source: e,
        })?;
        Ok(())
    }

    /// Write to `path`, or stdout when there is none.
    pub fn emit(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => self.write_to(File::create(p).map_err(io_error(p))?),
            None => self.write_to(io::stdout().lock()),
        }
    }
}

/// Full precision, shortest round-trip form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Rows of a comment-prefixed CSV file, keyed by the header.
pub struct Loaded {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Loaded {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let file = File::open(path).map_err(io_error(path))?;
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
        let header = rdr.headers()?.iter().map(str::to_string).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn has(&self, names: &[&str]) -> bool {
        names.iter().all(|n| self.column(n).is_some())
    }

    pub fn float(&self, row: usize, col: usize) -> Result<f64, CliError> {
        let cell = &self.rows[row][col];
        cell.parse()
            .map_err(|_| CliError::Usage(format!("row {}: `{cell}` is not a number", row + 1)))
    }
}
