//! Rendering of report rows as JSON, CSV or an aligned text table.

use std::io::Write;

use serde_json::{Map, Value};

use super::CliError;

/// Version of the JSON envelope.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Ordered rows emitted by one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub rows: Vec<Map<String, Value>>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self { command, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Map<String, Value>) {
        self.rows.push(row);
    }

    /// Column names in first-seen order across all rows.
    pub fn headers(&self) -> Vec<String> {
        let mut headers: Vec<String> = Vec::new();
        for row in &self.rows {
            for key in row.keys() {
                if !headers.iter().any(|h| h == key) {
                    headers.push(key.clone());
                }
            }
        }
        headers
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
            Format::Table => self.write_table(out),
        }
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut envelope = Map::new();
        envelope.insert("schema".into(), SCHEMA_VERSION.into());
        envelope.insert("command".into(), self.command.into());
        envelope.insert("rows".into(), Value::Array(self.rows.iter().cloned().map(Value::Object).collect()));
        serde_json::to_writer_pretty(&mut *out, &Value::Object(envelope)).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(out).map_err(CliError::io)
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let headers = self.headers();
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&headers).map_err(|e| CliError::Io(e.to_string()))?;
        for row in &self.rows {
            let record: Vec<String> = headers.iter().map(|h| cell_text(row.get(h))).collect();
            writer.write_record(&record).map_err(|e| CliError::Io(e.to_string()))?;
        }
        writer.flush().map_err(CliError::io)
    }

    fn write_table(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let headers = self.headers();
        if self.rows.len() == 1 {
            let width = headers.iter().map(String::len).max().unwrap_or(0);
            for h in &headers {
                writeln!(out, "{h:<width$}  {}", cell_text(self.rows[0].get(h))).map_err(CliError::io)?;
            }
            return Ok(());
        }
        let cells: Vec<Vec<String>> =
            self.rows.iter().map(|row| headers.iter().map(|h| cell_text(row.get(h))).collect()).collect();
        let widths: Vec<usize> = headers
            .iter()
            .enumerate()
            .map(|(i, h)| cells.iter().map(|r| r[i].len()).max().unwrap_or(0).max(h.len()))
            .collect();
        let line = |fields: &[String]| {
            fields.iter().zip(&widths).map(|(f, w)| format!("{f:>w$}")).collect::<Vec<_>>().join("  ")
        };
        writeln!(out, "{}", line(&headers)).map_err(CliError::io)?;
        for row in &cells {
            writeln!(out, "{}", line(row)).map_err(CliError::io)?;
        }
        Ok(())
    }
}

/// Plain-text cell: shortest round-trip float, `true`/`false`, empty for null.
pub fn cell_text(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:e}"),
            _ => n.to_string(),
        },
        Some(other) => other.to_string(),
    }
}

/// JSON number for a float; non-finite values become null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo");
        let mut row = Map::new();
        row.insert("a".into(), num(0.75));
        row.insert("ok".into(), true.into());
        row.insert("n".into(), 3.into());
        r.push(row);
        r
    }

    #[test]
    fn csv_keeps_column_order() {
        let mut buf = Vec::new();
        sample().render(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,ok,n\n7.5e-1,true,3\n");
    }

    #[test]
    fn json_has_schema_envelope() {
        let mut buf = Vec::new();
        sample().render(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["rows"][0]["n"], 3);
    }

    #[test]
    fn nan_becomes_empty_cell() {
        assert_eq!(cell_text(Some(&num(f64::NAN))), "");
    }
}
