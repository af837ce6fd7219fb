//! Deterministic result emission: JSON (fixed field order), CSV and aligned
//! tables, all through one float formatter.
//!
//! Floats are rounded to 15 significant digits and then printed with the
//! shortest round-trip representation of the rounded value, so identical
//! runs produce byte-identical documents on every platform.

use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "1.0";

/// Round to 15 significant digits; negative zero canonicalizes to zero.
pub fn sig15(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Shortest round-trip text of the 15-digit rounding; e-notation outside
/// the comfortable decimal range.
pub fn fmt_f64(x: f64) -> String {
    let x = sig15(x);
    if x != 0.0 && (x.abs() < 1e-5 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(sig15(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn json_f64_vec(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_f64(x)).collect())
}

/// Ordered JSON object builder.
#[derive(Debug, Default)]
pub struct Doc {
    map: Map<String, Value>,
}

impl Doc {
    pub fn new(command: &str) -> Self {
        let mut doc = Doc { map: Map::new() };
        doc.map
            .insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
        doc.map.insert("command".into(), Value::String(command.into()));
        doc
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.map.insert(key.into(), value);
        self
    }

    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        self.set(key, json_f64(x))
    }

    pub fn int(&mut self, key: &str, n: i64) -> &mut Self {
        self.set(key, Value::Number(n.into()))
    }

    pub fn text(&mut self, key: &str, s: &str) -> &mut Self {
        self.set(key, Value::String(s.into()))
    }

    pub fn finish(self) -> Value {
        Value::Object(self.map)
    }
}

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(Error::invalid(format!(
                "unknown format '{other}' (expected json, csv or table)"
            ))),
        }
    }
}

/// Render a JSON document as pretty JSON with a trailing newline.
pub fn render_json(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable");
    out.push('\n');
    out
}

/// CSV rows with a header; every cell already formatted.
pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Left-aligned text table.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.len());
            }
        }
    }
    let fmt_row = |cells: &[String]| -> String {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = fmt_row(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row));
        out.push('\n');
    }
    out
}

/// Structural validation of an emitted JSON document against the shapes
/// documented in docs/output-schema.md.
pub fn validate_document(value: &Value) -> Result<()> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::invalid("document must be a JSON object"))?;
    let version = obj
        .get("schema_version")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::invalid("missing schema_version"))?;
    if version != SCHEMA_VERSION {
        return Err(Error::invalid(format!("unknown schema_version {version}")));
    }
    let command = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::invalid("missing command"))?;
    let require = |keys: &[&str]| -> Result<()> {
        for key in keys {
            if !obj.contains_key(*key) {
                return Err(Error::invalid(format!("{command}: missing key {key}")));
            }
        }
        Ok(())
    };
    match command {
        "spectrum" => require(&[
            "family",
            "j",
            "params",
            "eps_roots",
            "energies",
            "complex_root_count",
            "levels",
            "diagnostics",
        ]),
        "polynomials" => require(&[
            "family",
            "j",
            "spectral_variable",
            "polynomials",
            "critical",
            "tabulated_comparison",
        ]),
        "wavefunction" => require(&["family", "j", "level", "samples"]),
        "2d" => require(&["family", "params", "e0", "levels", "complex_root_count"]),
        "oracle" => require(&["grid", "rows"]),
        "verify" => require(&["checks", "passed"]),
        other => Err(Error::invalid(format!("unknown command {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(-2.5), "-2.5");
        // 15 significant digits, then shortest
        assert_eq!(fmt_f64(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(fmt_f64(1.0 / 3.0), "0.333333333333333");
    }

    #[test]
    fn doc_preserves_insertion_order() {
        let mut doc = Doc::new("spectrum");
        doc.int("zulu", 1).int("alpha", 2);
        let text = render_json(&doc.finish());
        let z = text.find("zulu").unwrap();
        let a = text.find("alpha").unwrap();
        assert!(z < a);
    }

    #[test]
    fn table_rendering_aligns() {
        let out = render_table(
            &["a", "bb"],
            &[vec!["1".into(), "2".into()], vec!["333".into(), "4".into()]],
        );
        assert!(out.contains("333  4"));
    }
}
