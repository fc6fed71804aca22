//! CSV and JSON rendering. Everything is buffered and written once so a
//! failed run leaves no partial `--out` file.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use adele_lab::{CongruenceReport, Record};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub struct Output {
    format: Format,
    buf: Vec<u8>,
}

impl Output {
    pub fn new(format: Format) -> Self {
        Output { format, buf: Vec::new() }
    }

    /// CSV gets the rows, JSON gets the whole document.
    pub fn either<R: Serialize, D: Serialize + ?Sized>(
        &mut self,
        rows: &[R],
        doc: &D,
    ) -> std::io::Result<()> {
        match self.format {
            Format::Csv => self.csv(rows),
            Format::Json => self.json(doc),
        }
    }

    pub fn report<R: Record>(&mut self, report: &CongruenceReport<R>) -> std::io::Result<()> {
        let s = &report.summary;
        note!(
            "{}: {} records, {} match, {} mismatch, {} skipped, {} undefined",
            report.tool, s.total, s.matched, s.mismatched, s.skipped, s.undefined
        );
        self.either(&report.records, report)
    }

    /// Plain tables without a summary block.
    pub fn values<R: Serialize>(
        &mut self,
        tool: &str,
        params: BTreeMap<&str, String>,
        rows: &[R],
    ) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Doc<'a, R> {
            tool: &'a str,
            params: BTreeMap<&'a str, String>,
            records: &'a [R],
        }
        note!("{tool}: {} records", rows.len());
        self.either(rows, &Doc { tool, params, records: rows })
    }

    /// Scan results: a JSON list, or a one-column CSV headed `p`.
    pub fn primes(&mut self, primes: &[u64]) -> std::io::Result<()> {
        note!("scan: {} primes found", primes.len());
        match self.format {
            Format::Json => self.json(primes),
            Format::Csv => {
                writeln!(self.buf, "p")?;
                for p in primes {
                    writeln!(self.buf, "{p}")?;
                }
                Ok(())
            }
        }
    }

    fn csv<R: Serialize>(&mut self, rows: &[R]) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(&mut self.buf);
        for row in rows {
            w.serialize(row).map_err(std::io::Error::other)?;
        }
        w.flush()
    }

    fn json<D: Serialize + ?Sized>(&mut self, doc: &D) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut self.buf, doc).map_err(std::io::Error::other)?;
        self.buf.push(b'\n');
        Ok(())
    }

    pub fn finish(self, path: Option<&Path>) -> std::io::Result<()> {
        match path {
            Some(path) => std::fs::write(path, &self.buf),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(&self.buf)?;
                stdout.flush()
            }
        }
    }
}
