//! Flat records written as CSV or as a JSON array of objects.

use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Field {
    Num(f64),
    Int(u64),
    Str(String),
    Null,
}

impl Field {
    pub fn opt(v: Option<f64>) -> Field {
        v.map_or(Field::Null, Field::Num)
    }

    fn csv(&self) -> String {
        match self {
            Field::Num(v) => num(*v),
            Field::Int(i) => i.to_string(),
            Field::Str(s) => s.clone(),
            Field::Null => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Field::Num(v) if v.is_finite() => num(*v),
            Field::Num(_) | Field::Null => "null".into(),
            Field::Int(i) => i.to_string(),
            Field::Str(s) => serde_json::to_string(s).expect("string serialization"),
        }
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Str(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Str(s)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

/// 17 significant digits, locale independent.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Field::csv))?;
                }
                w.flush()
            }
            Format::Json => {
                writeln!(out, "[")?;
                for (i, r) in self.rows.iter().enumerate() {
                    let body: Vec<String> = self
                        .header
                        .iter()
                        .zip(r)
                        .map(|(k, v)| format!("\"{k}\": {}", v.json()))
                        .collect();
                    let sep = if i + 1 < self.rows.len() { "," } else { "" };
                    writeln!(out, "  {{{}}}{sep}", body.join(", "))?;
                }
                writeln!(out, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn json_and_csv_layout() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Field::Num(1.5), Field::Str("x,\"y\"".into())]);
        t.push(vec![Field::Null, Field::Int(3)]);
        let mut buf = Vec::new();
        t.write(Format::Csv, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "a,b\n1.5000000000000000e0,\"x,\"\"y\"\"\"\n,3\n");
        let mut buf = Vec::new();
        t.write(Format::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["a"], 1.5);
        assert_eq!(v[1]["a"], serde_json::Value::Null);
        assert_eq!(v[0]["b"], "x,\"y\"");
    }
}
