//! Tabular command output and its CSV/JSON encodings.

use std::fmt;

use serde_json::{Map, Number, Value as Json};

/// One cell of an output table.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Value {
    /// Text form used in CSV: reals carry 17 significant digits.
    pub fn to_csv_field(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Real(x) => format!("{x:.16e}"),
            Value::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => Json::from(*i),
            Value::Real(x) => Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Value::Text(s) => Json::String(s.clone()),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A named table with a fixed column list. Complex quantities are stored as
/// paired `re_*`/`im_*` columns.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputRecord {
    pub schema_name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl OutputRecord {
    pub fn new(schema_name: &str, columns: &[&str]) -> Self {
        OutputRecord {
            schema_name: schema_name.to_owned(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; panics if its width differs from the column count.
    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width for {}", self.schema_name);
        self.rows.push(row);
    }

    /// Values of one column, by name.
    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    /// Real values of one column, skipping non-real cells.
    pub fn reals(&self, name: &str) -> Vec<f64> {
        self.column(name)
            .unwrap_or_default()
            .into_iter()
            .filter_map(|v| match v {
                Value::Real(x) => Some(*x),
                Value::Int(i) => Some(*i as f64),
                Value::Text(_) => None,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Value::to_csv_field))
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = self.columns.iter().cloned().zip(row.iter().map(Value::to_json)).collect();
                Json::Object(obj)
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&Json::Array(rows)).expect("serializable");
        out.push('\n');
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

impl fmt::Display for OutputRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        let mut r = OutputRecord::new("demo", &["alpha", "p"]);
        r.push(vec![Value::Int(-1), Value::Real(0.25)]);
        r.push(vec![Value::from("total"), Value::Real(1.0 / 3.0)]);
        r
    }

    #[test]
    fn csv_has_header_and_lf() {
        let csv = sample().to_csv();
        assert_eq!(
            csv,
            "alpha,p\n-1,2.5000000000000000e-1\ntotal,3.3333333333333331e-1\n"
        );
        let back: f64 = "3.3333333333333331e-1".parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn json_keeps_column_order() {
        let json = sample().to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let rows = parsed.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["alpha", "p"]);
        assert_eq!(rows[1]["alpha"], "total");
    }

    #[test]
    fn non_finite_reals_become_null() {
        let mut r = OutputRecord::new("x", &["v"]);
        r.push(vec![Value::Real(f64::INFINITY)]);
        assert!(r.to_json().contains("null"));
    }
}
