//! Tabular output with CSV and JSON encodings.
//!
//! Numbers are quantized to 12 significant digits when stored, so a table
//! survives an emit/parse round trip unchanged.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::RunError;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn num(x: f64) -> Self {
        Cell::Num(quantize(x))
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_sig(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn parse(s: &str) -> Self {
        match s.parse::<f64>() {
            Ok(x) => Cell::Num(x),
            Err(_) => Cell::Text(s.to_string()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Text(s) => json!(s),
        }
    }

    fn from_json(v: &Value) -> Result<Self, RunError> {
        match v {
            Value::Number(n) => n.as_f64().map(Cell::Num).ok_or_else(|| RunError::Config("bad number".into())),
            Value::String(s) => Ok(Cell::Text(s.clone())),
            other => Err(RunError::Config(format!("unexpected cell {other}"))),
        }
    }
}

/// `%.12g`-style rendering.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn quantize(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<(String, Cell)>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| Cell::num(x)).collect());
    }

    pub fn note(&mut self, key: impl Into<String>, value: Cell) {
        self.footer.push((key.into(), value));
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column by name.
    pub fn values(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.column(name) else {
            return Vec::new();
        };
        self.rows.iter().filter_map(|r| r[i].as_f64()).collect()
    }

    pub fn footer_value(&self, key: &str) -> Option<&Cell> {
        self.footer.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Header, rows, then footer entries as `# key=value` lines.
    pub fn to_csv(&self) -> Result<String, RunError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        let mut out = String::from_utf8(w.into_inner().map_err(|e| RunError::Config(e.to_string()))?)
            .expect("utf-8 csv");
        for (k, v) in &self.footer {
            out.push_str(&format!("# {k}={}\n", v.render()));
        }
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self, RunError> {
        let (body, notes): (Vec<&str>, Vec<&str>) = text.lines().partition(|l| !l.starts_with('#'));
        let joined = body.join("\n");
        let mut r = csv::Reader::from_reader(joined.as_bytes());
        let columns = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(csv_err)?.iter().map(Cell::parse).collect());
        }
        let footer = notes
            .iter()
            .map(|l| {
                let (k, v) = l[1..]
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| RunError::Config(format!("malformed footer line '{l}'")))?;
                Ok((k.to_string(), Cell::parse(v)))
            })
            .collect::<Result<_, RunError>>()?;
        Ok(Self { columns, rows, footer })
    }

    pub fn to_json(&self, config: &BTreeMap<String, String>) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert(c.clone(), v.to_json());
                }
                Value::Object(m)
            })
            .collect();
        let mut footer = Map::new();
        for (k, v) in &self.footer {
            footer.insert(k.clone(), v.to_json());
        }
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "config": config,
            "columns": self.columns,
            "rows": rows,
            "footer": footer,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, RunError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        let bad = |what: &str| RunError::Config(format!("JSON output lacks {what}"));
        let columns: Vec<String> = doc["columns"]
            .as_array()
            .ok_or_else(|| bad("columns"))?
            .iter()
            .map(|c| c.as_str().map(String::from).ok_or_else(|| bad("string column names")))
            .collect::<Result<_, _>>()?;
        let mut rows = Vec::new();
        for r in doc["rows"].as_array().ok_or_else(|| bad("rows"))? {
            let obj = r.as_object().ok_or_else(|| bad("row objects"))?;
            rows.push(
                columns
                    .iter()
                    .map(|c| Cell::from_json(obj.get(c).ok_or_else(|| bad(c))?))
                    .collect::<Result<_, _>>()?,
            );
        }
        let footer = doc["footer"]
            .as_object()
            .ok_or_else(|| bad("footer"))?
            .iter()
            .map(|(k, v)| Ok((k.clone(), Cell::from_json(v)?)))
            .collect::<Result<_, RunError>>()?;
        Ok(Self { columns, rows, footer })
    }
}

fn csv_err(e: csv::Error) -> RunError {
    RunError::Config(format!("csv: {e}"))
}
