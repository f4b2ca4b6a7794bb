//! Tabular reports and their json, csv and text renderings.
//!
//! JSON reports carry `"schema": "latsum.v1"`, a `meta` object and a `rows`
//! array of objects keyed by column name. Complex values are
//! `{"re": .., "im": ..}`; in csv they split into `<col>.re` and `<col>.im`.
//! Non-finite reals are `null` in json and empty in csv.

use num_complex::Complex64;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::config::Format;

pub const SCHEMA: &str = "latsum.v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    Real(f64),
    Complex(Complex64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Real(x)
    }
}

impl From<Complex64> for Field {
    fn from(z: Complex64) -> Self {
        Field::Complex(z)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Bool(b)
    }
}

impl From<u32> for Field {
    fn from(x: u32) -> Self {
        Field::Int(x as i64)
    }
}

impl From<i32> for Field {
    fn from(x: i32) -> Self {
        Field::Int(x as i64)
    }
}

impl From<usize> for Field {
    fn from(x: usize) -> Self {
        Field::Int(x as i64)
    }
}

fn real_json(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Int(i) => s.serialize_i64(*i),
            Field::Real(x) => real_json(*x).serialize(s),
            Field::Complex(z) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("re", &real_json(z.re))?;
                m.serialize_entry("im", &real_json(z.im))?;
                m.end()
            }
            Field::Text(t) => s.serialize_str(t),
            Field::Bool(b) => s.serialize_bool(*b),
            Field::Null => s.serialize_unit(),
        }
    }
}

/// Fields in insertion order.
struct Ordered<'a>(&'a [(String, Field)]);

impl Serialize for Ordered<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, Field)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
    /// Set when the command found a failed check; the process exits 1.
    pub failed: bool,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            failed: false,
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Field>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: &'static str,
            command: &'a str,
            meta: Ordered<'a>,
            rows: Vec<Ordered<'a>>,
        }
        let keyed: Vec<Vec<(String, Field)>> =
            self.rows.iter().map(|r| self.columns.iter().cloned().zip(r.iter().cloned()).collect()).collect();
        let doc = Doc {
            schema: SCHEMA,
            command: &self.command,
            meta: Ordered(&self.meta),
            rows: keyed.iter().map(|r| Ordered(r)).collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
        out.push('\n');
        out
    }

    /// Meta entries become leading `# key=value` lines.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# schema={SCHEMA}\n# command={}\n", self.command);
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={}", csv_record(&csv_cells(v))));
        }
        let complex_cols: Vec<bool> =
            (0..self.columns.len()).map(|j| self.rows.iter().any(|r| matches!(r[j], Field::Complex(_)))).collect();
        let header: Vec<String> = self
            .columns
            .iter()
            .zip(&complex_cols)
            .flat_map(|(c, &cx)| if cx { vec![format!("{c}.re"), format!("{c}.im")] } else { vec![c.clone()] })
            .collect();
        out.push_str(&csv_record(&header));
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .zip(&complex_cols)
                .flat_map(|(f, &cx)| match (f, cx) {
                    (Field::Complex(_), _) => csv_cells(f),
                    (_, true) => vec![csv_cells(f)[0].clone(), String::new()],
                    _ => csv_cells(f),
                })
                .collect();
            out.push_str(&csv_record(&cells));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("{k}: {}\n", text_cell(v)));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 || !self.meta.is_empty() {
                out.push('\n');
            }
            for (c, f) in self.columns.iter().zip(r) {
                out.push_str(&format!("{c}: {}\n", text_cell(f)));
            }
        }
        out
    }
}

fn json_real(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite float")
    } else {
        String::new()
    }
}

fn csv_cells(f: &Field) -> Vec<String> {
    match f {
        Field::Int(i) => vec![i.to_string()],
        Field::Real(x) => vec![json_real(*x)],
        Field::Complex(z) => vec![json_real(z.re), json_real(z.im)],
        Field::Text(t) => vec![t.clone()],
        Field::Bool(b) => vec![b.to_string()],
        Field::Null => vec![String::new()],
    }
}

/// One csv line, quoted where needed.
fn csv_record(cells: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(cells).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

fn text_cell(f: &Field) -> String {
    match f {
        Field::Real(x) if !x.is_finite() => x.to_string(),
        Field::Real(x) => format!("{x:e}"),
        Field::Complex(z) => format!("{:e} {:+e}i", z.re, z.im),
        Field::Null => "-".into(),
        Field::Text(t) => t.clone(),
        other => csv_cells(other).join(","),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("sigma", &["n", "value", "note"]);
        r.meta("formula", "a, b");
        r.push(vec![Field::Int(2), Field::Complex(Complex64::new(0.1, -2.5e-17)), Field::Null]);
        r.push(vec![Field::Int(4), Field::Real(f64::INFINITY), "x".into()]);
        r
    }

    #[test]
    fn json_layout() {
        let v: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["rows"][0]["value"]["im"], -2.5e-17);
        assert!(v["rows"][1]["value"].is_null());
        assert_eq!(v["meta"]["formula"], "a, b");
    }

    #[test]
    fn csv_splits_complex_columns() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[2], "# formula=\"a, b\"");
        assert_eq!(lines[3], "n,value.re,value.im,note");
        assert_eq!(lines[4], "2,0.1,-2.5e-17,");
        assert_eq!(lines[5], "4,,,x");
    }
}
