//! Tables and their CSV / JSON renderings.
//!
//! Floats are written in Rust's shortest round-trip exponent form (`{:e}`),
//! so identical results always produce identical bytes.

use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // NaN and infinities have no JSON number form.
            Cell::Num(v) if !v.is_finite() => Value::String(format!("{v:e}")),
            Cell::Num(v) => json!(v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str], rows: Vec<Vec<Cell>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == header.len()));
        Self {
            header: header.to_vec(),
            rows,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON document carrying the fully expanded config next to the table.
    pub fn to_json(&self, config: Value) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "config": config,
            "header": self.header,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }

    /// Column `name` of every row, for boolean columns.
    pub fn bool_column(&self, name: &str) -> Option<Vec<bool>> {
        let i = self.header.iter().position(|h| *h == name)?;
        self.rows
            .iter()
            .map(|r| match r[i] {
                Cell::Bool(b) => Some(b),
                _ => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let t = Table::new(
            &["a", "b", "c"],
            vec![vec![Cell::Num(1.5e-3), Cell::Text("inf".into()), Cell::Bool(true)]],
        );
        assert_eq!(t.to_csv(), "a,b,c\n1.5e-3,inf,true\n");
        assert_eq!(t.bool_column("c"), Some(vec![true]));
        assert_eq!(t.bool_column("a"), None);
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1 + 0.2, 1.300_125_772_447_753_4e-3, -7.0e-300, 0.0] {
            let s = Cell::Num(v).csv();
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
