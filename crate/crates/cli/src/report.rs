use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Rows of named columns. A `summary` report is a single record, shown in
/// plain format as `name: value` lines and in JSON as one object.
#[derive(Debug)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: bool,
}

impl Report {
    pub fn table(columns: &[&'static str]) -> Self {
        Report {
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: false,
        }
    }

    pub fn summary(fields: Vec<(&'static str, Cell)>) -> Self {
        let (columns, row) = fields.into_iter().unzip();
        Report {
            columns,
            rows: vec![row],
            summary: true,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
            Format::Plain => self.plain(),
        }
    }

    fn csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::text))
                .expect("writing to memory");
        }
        String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
    }

    fn json(&self) -> String {
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| (name.to_string(), cell.json()))
                    .collect();
                Value::Object(map)
            })
            .collect();
        let value = if self.summary {
            objects.into_iter().next().unwrap_or(Value::Null)
        } else {
            Value::Array(objects)
        };
        let mut text = value.to_string();
        text.push('\n');
        text
    }

    fn plain(&self) -> String {
        let mut out = String::new();
        if self.summary {
            let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(0);
            for (name, cell) in self.columns.iter().zip(&self.rows[0]) {
                out.push_str(&format!("{name:<width$}  {}\n", cell.text()));
            }
            return out;
        }
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.columns[i].len()])
                    .max()
                    .unwrap()
            })
            .collect();
        let line = |fields: Vec<&str>| {
            let padded: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:>w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(self.columns.clone()));
        for row in &cells {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        out
    }
}

pub fn emit(report: &Report, format: Format) -> io::Result<()> {
    let mut stdout = io::stdout().lock();
    stdout.write_all(report.render(format).as_bytes())?;
    stdout.flush()
}
