use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

/// Version of the JSON layout, bumped on incompatible changes.
pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Everything a command produced, ready to be written in any format.
pub struct Report {
    pub ok: bool,
    pub default_format: Format,
    json: Map<String, Value>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    text: String,
}

impl Report {
    pub fn new(body: impl Serialize) -> anyhow::Result<Self> {
        let mut json = Map::new();
        json.insert("schema".into(), SCHEMA.into());
        match serde_json::to_value(body)? {
            Value::Object(fields) => json.extend(fields),
            other => {
                json.insert("result".into(), other);
            }
        }
        Ok(Report {
            ok: true,
            default_format: Format::Json,
            json,
            header: Vec::new(),
            rows: Vec::new(),
            text: String::new(),
        })
    }

    pub fn ok(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }

    pub fn default_format(mut self, f: Format) -> Self {
        self.default_format = f;
        self
    }

    pub fn table<I, R>(mut self, header: &[&str], rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        self.header = header.iter().map(|h| h.to_string()).collect();
        self.rows = rows.into_iter().map(|r| r.into_iter().collect()).collect();
        self
    }

    pub fn text(mut self, text: String) -> Self {
        self.text = text;
        self
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> anyhow::Result<()> {
        let mut out: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout().lock()),
        };
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.json)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
                return Ok(());
            }
            Format::Text => {
                out.write_all(self.text.as_bytes())?;
                if !self.text.ends_with('\n') {
                    writeln!(out)?;
                }
            }
        }
        out.flush()?;
        Ok(())
    }
}
