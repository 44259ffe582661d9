use serde_json::{Map, Value};

use crate::args::{Cli, Format};
use crate::CliError;

pub const SCHEMA: &str = "fibcmv-output/1";
const CONFIG_PREFIX: &str = "# fibcmv-output/1 config: ";
const META_PREFIX: &str = "# meta: ";

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            // 17 significant digits round-trip every finite double
            Cell::Float(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Float(x) => x.to_string(),
            Cell::Bool(b) => u8::from(*b).to_string(),
            Cell::Text(s) => quote(s),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) => float(*x),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Non-finite values have no JSON number form and become `null`.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    /// Rows under named columns, plus scalar metadata.
    Table {
        columns: Vec<&'static str>,
        rows: Vec<Vec<Cell>>,
        meta: Map<String, Value>,
    },
    /// A single JSON object; as CSV it is one row keyed by its fields.
    Record(Map<String, Value>),
}

impl Output {
    pub fn payload_json(&self) -> Value {
        match self {
            Output::Table { columns, rows, meta } => {
                let mut m = Map::new();
                m.insert("columns".into(), Value::from(columns.clone()));
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                m.insert("rows".into(), Value::Array(rows));
                if !meta.is_empty() {
                    m.insert("meta".into(), Value::Object(meta.clone()));
                }
                Value::Object(m)
            }
            Output::Record(m) => Value::Object(m.clone()),
        }
    }

    pub fn payload_csv(&self) -> String {
        let mut s = String::new();
        match self {
            Output::Table { columns, rows, meta } => {
                if !meta.is_empty() {
                    s.push_str(META_PREFIX);
                    s.push_str(&Value::Object(meta.clone()).to_string());
                    s.push('\n');
                }
                s.push_str(&columns.join(","));
                s.push('\n');
                for r in rows {
                    let cells: Vec<String> = r.iter().map(Cell::csv).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
            }
            Output::Record(m) => {
                let keys: Vec<&str> = m.keys().map(String::as_str).collect();
                s.push_str(&keys.join(","));
                s.push('\n');
                let vals: Vec<String> = m.values().map(record_cell).collect();
                s.push_str(&vals.join(","));
                s.push('\n');
            }
        }
        s
    }
}

fn record_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => u8::from(*b).to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i.to_string(),
            (None, Some(x)) => format!("{x:.16e}"),
            _ => n.to_string(),
        },
        Value::String(s) => quote(s),
        // nested values stay JSON inside one quoted field
        other => quote(&other.to_string()),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn config_json(cli: &Cli) -> Value {
    serde_json::to_value(cli).expect("config is plain data")
}

/// The full envelope: version tag, config echo and payload.
pub fn render(cli: &Cli, format: Format, out: &Output) -> String {
    match format {
        Format::Csv => format!("{CONFIG_PREFIX}{}\n{}", config_json(cli), out.payload_csv()),
        Format::Json => {
            let mut m = Map::new();
            m.insert("schema".into(), Value::from(SCHEMA));
            m.insert("config".into(), config_json(cli));
            m.insert("payload".into(), out.payload_json());
            let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("finite json");
            s.push('\n');
            s
        }
    }
}

/// Recovers the config echoed by [`render`] in either format.
pub fn parse_config(text: &str) -> Result<Cli, CliError> {
    let config = if let Some(rest) = text.strip_prefix(CONFIG_PREFIX) {
        let line = rest.lines().next().unwrap_or_default();
        serde_json::from_str::<Value>(line).map_err(|e| CliError::Validation(format!("bad config line: {e}")))?
    } else {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("neither a CSV header nor JSON: {e}")))?;
        if v.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
            return Err(CliError::Validation(format!("missing schema tag `{SCHEMA}`")));
        }
        v.get("config")
            .cloned()
            .ok_or_else(|| CliError::Validation("no config in envelope".into()))?
    };
    serde_json::from_value(config).map_err(|e| CliError::Validation(format!("bad config: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        let x = 0.1 + 0.2;
        let s = Cell::Float(x).csv();
        assert_eq!(s, "3.0000000000000004e-1");
        assert_eq!(s.parse::<f64>().unwrap(), x);
        assert_eq!(Cell::Float(f64::NAN).json(), Value::Null);
        assert_eq!(Cell::Bool(true).csv(), "1");
    }

    #[test]
    fn record_csv_has_one_row() {
        let mut m = Map::new();
        m.insert("k".into(), Value::from(3));
        m.insert("w".into(), Value::from("abaab"));
        m.insert("x".into(), float(0.5));
        assert_eq!(Output::Record(m).payload_csv(), "k,w,x\n3,abaab,5.0000000000000000e-1\n");
    }
}
