use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

/// One output row: axis values, results (absent on error) and the error text.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub values: Vec<Option<f64>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub config: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

impl Table {
    pub fn to_csv(&self) -> Result<String, String> {
        let mut out = Vec::new();
        writeln!(out, "# {}", self.config).map_err(|e| e.to_string())?;
        {
            let mut w = csv::Writer::from_writer(&mut out);
            let mut header = self.columns.clone();
            header.push("error".into());
            w.write_record(&header).map_err(|e| e.to_string())?;
            for row in &self.rows {
                let mut record: Vec<String> =
                    row.values.iter().map(|v| v.map(format_number).unwrap_or_default()).collect();
                record.push(row.error.clone().unwrap_or_default());
                w.write_record(&record).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        String::from_utf8(out).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> Result<String, String> {
        #[derive(Serialize)]
        struct JsonRow<'a> {
            #[serde(flatten)]
            values: serde_json::Map<String, Value>,
            error: &'a Option<String>,
        }
        let rows: Vec<JsonRow> = self
            .rows
            .iter()
            .map(|r| JsonRow {
                values: self
                    .columns
                    .iter()
                    .zip(&r.values)
                    .map(|(c, v)| (c.clone(), v.map_or(Value::Null, |x| serde_json::json!(x))))
                    .collect(),
                error: &r.error,
            })
            .collect();
        let doc = serde_json::json!({ "config": self.config, "columns": self.columns, "rows": rows });
        serde_json::to_string_pretty(&doc).map(|s| s + "\n").map_err(|e| e.to_string())
    }
}

/// Summary of a successful round-trip check.
#[derive(Debug, PartialEq)]
pub struct ReplotSummary {
    pub rows: usize,
    pub columns: usize,
    pub values: usize,
}

/// Parses a CSV written by [`Table::to_csv`] and checks that every number re-formats to the
/// exact text it was read from, and that the config header is valid JSON.
pub fn replot_check(path: &Path) -> Result<ReplotSummary, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut body_start = 0;
    let mut saw_config = false;
    for line in text.split_inclusive('\n') {
        let Some(comment) = line.strip_prefix('#') else { break };
        serde_json::from_str::<Value>(comment.trim()).map_err(|e| format!("config header is not valid JSON: {e}"))?;
        saw_config = true;
        body_start += line.len();
    }
    if !saw_config {
        return Err("missing '#' config header".into());
    }
    let mut reader = csv::Reader::from_reader(&text.as_bytes()[body_start..]);
    let headers = reader.headers().map_err(|e| format!("bad header row: {e}"))?.clone();
    if headers.iter().next_back() != Some("error") {
        return Err("last column must be 'error'".into());
    }
    let numeric = headers.len() - 1;
    let mut summary = ReplotSummary { rows: 0, columns: headers.len(), values: 0 };
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format!("row {}: {e}", i + 1))?;
        if record.len() != headers.len() {
            return Err(format!("row {} has {} fields, expected {}", i + 1, record.len(), headers.len()));
        }
        for (j, field) in record.iter().take(numeric).enumerate() {
            if field.is_empty() {
                continue;
            }
            let v: f64 = field
                .parse()
                .map_err(|_| format!("row {}, column {}: {field:?} is not a number", i + 1, &headers[j]))?;
            if format_number(v) != field {
                return Err(format!("row {}, column {}: {field:?} does not round-trip", i + 1, &headers[j]));
            }
            summary.values += 1;
        }
        summary.rows += 1;
    }
    Ok(summary)
}
