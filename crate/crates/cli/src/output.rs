//! Tables and records, rendered as CSV or JSON.

use serde_json::{Map, Number, Value as Json};

use crate::failure::Failure;
use crate::settings::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<f64>),
    Null,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<Vec<f64>> for Value {
    fn from(v: Vec<f64>) -> Self {
        Value::List(v)
    }
}

impl From<(f64, f64)> for Value {
    fn from(v: (f64, f64)) -> Self {
        Value::List(vec![v.0, v.1])
    }
}

impl<V: Into<Value>> From<Option<V>> for Value {
    fn from(v: Option<V>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

/// Ordered key/value pairs: one JSON object, or a one-row CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Value)>);

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Record(Record),
    Table(Table),
}

impl Output {
    pub fn default_format(&self) -> Format {
        match self {
            Output::Record(_) => Format::Json,
            Output::Table(_) => Format::Csv,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json())
                    .map_err(|e| Failure::usage(format!("json encoding: {e}")))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.to_csv(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Output::Record(r) => Json::Object(
                r.0.iter()
                    .map(|(k, v)| (k.clone(), json_value(v)))
                    .collect::<Map<_, _>>(),
            ),
            Output::Table(t) => {
                let mut m = Map::new();
                m.insert(
                    "columns".into(),
                    Json::Array(t.columns.iter().cloned().map(Json::String).collect()),
                );
                m.insert(
                    "rows".into(),
                    Json::Array(
                        t.rows
                            .iter()
                            .map(|r| Json::Array(r.iter().map(json_value).collect()))
                            .collect(),
                    ),
                );
                Json::Object(m)
            }
        }
    }

    fn to_csv(&self) -> Result<String, Failure> {
        let (header, rows) = match self {
            Output::Table(t) => (
                t.columns.clone(),
                t.rows
                    .iter()
                    .map(|r| r.iter().flat_map(csv_fields).collect())
                    .collect(),
            ),
            Output::Record(r) => {
                let mut header = Vec::new();
                let mut row = Vec::new();
                for (k, v) in &r.0 {
                    match v {
                        Value::List(xs) => {
                            for (i, x) in xs.iter().enumerate() {
                                header.push(format!("{k}_{}", i + 1));
                                row.push(sig17(*x));
                            }
                        }
                        _ => {
                            header.push(k.clone());
                            row.extend(csv_fields(v));
                        }
                    }
                }
                (header, vec![row])
            }
        };
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        let io = |e: csv::Error| Failure::usage(format!("csv encoding: {e}"));
        w.write_record(&header).map_err(io)?;
        for r in &rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Failure::usage(format!("csv encoding: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Failure::usage(format!("csv encoding: {e}")))
    }
}

fn json_value(v: &Value) -> Json {
    let num = |x: f64| Number::from_f64(x).map_or(Json::Null, Json::Number);
    match v {
        Value::Num(x) => num(*x),
        Value::Int(i) => Json::Number((*i).into()),
        Value::Bool(b) => Json::Bool(*b),
        Value::Text(s) => Json::String(s.clone()),
        Value::List(xs) => Json::Array(xs.iter().map(|&x| num(x)).collect()),
        Value::Null => Json::Null,
    }
}

fn csv_fields(v: &Value) -> Vec<String> {
    match v {
        Value::Num(x) => vec![sig17(*x)],
        Value::Int(i) => vec![i.to_string()],
        Value::Bool(b) => vec![b.to_string()],
        Value::Text(s) => vec![s.clone()],
        Value::List(xs) => xs.iter().map(|&x| sig17(x)).collect(),
        Value::Null => vec![String::new()],
    }
}

/// `x` to 17 significant digits in the style of C's `%.17g`.
pub fn sig17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{x:.*}", (16 - exp) as usize);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(sig17(0.5), "0.5");
        assert_eq!(sig17(0.1), "0.10000000000000001");
        assert_eq!(sig17(-0.4161468365471424), "-0.41614683654714241");
        assert_eq!(sig17(1e-7), "9.9999999999999995e-08");
        assert_eq!(sig17(1e20), "1e+20");
        assert_eq!(sig17(123.0), "123");
        assert_eq!(sig17(0.0), "0");
        for x in [std::f64::consts::PI, 1.0 / 3.0, 6.02e23, -2.5e-300] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn record_as_csv_flattens_lists() {
        let out = Output::Record(Record::new().with("a", 1.5).with("w", (0.25, 0.5)));
        assert_eq!(
            out.render(Format::Csv).unwrap(),
            "a,w_1,w_2\r\n1.5,0.25,0.5\r\n"
        );
    }

    #[test]
    fn json_keeps_key_order_and_maps_nan_to_null() {
        let out = Output::Record(Record::new().with("z", f64::NAN).with("a", true));
        let s = out.render(Format::Json).unwrap();
        assert!(s.find("\"z\"").unwrap() < s.find("\"a\"").unwrap());
        assert!(s.contains("null"));
    }
}
