//! Tabulated bounds next to the exact values they enclose.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const CSV_HEADER: [&str; 9] = [
    "quantity", "lambda", "epsilon", "x", "lower", "upper", "exact", "margin", "paper_eq",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub quantity: String,
    pub lambda: f64,
    pub epsilon: Option<f64>,
    pub x: Option<Vec<f64>>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub exact: f64,
    pub margin: f64,
    /// Label of the inequality the bounds come from.
    pub paper_eq: String,
}

impl BoundRow {
    pub fn new(quantity: &str, lambda: f64, exact: f64, paper_eq: &str) -> Self {
        Self {
            quantity: quantity.to_owned(),
            lambda,
            epsilon: None,
            x: None,
            lower: None,
            upper: None,
            exact,
            margin: 0.0,
            paper_eq: paper_eq.to_owned(),
        }
        .with_default_margin()
    }

    pub fn lower(mut self, v: f64) -> Self {
        self.lower = Some(v);
        self.with_default_margin()
    }

    pub fn upper(mut self, v: f64) -> Self {
        self.upper = Some(v);
        self.with_default_margin()
    }

    pub fn epsilon(mut self, v: f64) -> Self {
        self.epsilon = Some(v);
        self
    }

    pub fn at(mut self, x: &[f64]) -> Self {
        self.x = Some(x.to_vec());
        self
    }

    /// Rounding budget: `1e-9` relative to the largest magnitude in the row.
    fn with_default_margin(mut self) -> Self {
        let scale = [Some(self.exact), self.lower, self.upper]
            .into_iter()
            .flatten()
            .fold(1.0f64, |acc, v| acc.max(v.abs()));
        self.margin = 1e-9 * scale;
        self
    }

    pub fn contained(&self) -> bool {
        self.lower.is_none_or(|l| l <= self.exact + self.margin)
            && self.upper.is_none_or(|u| self.exact <= u + self.margin)
    }

    fn csv_record(&self) -> [String; 9] {
        let num = |v: f64| format!("{:.11e}", v + 0.0);
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        [
            self.quantity.clone(),
            num(self.lambda),
            opt(self.epsilon),
            self.x
                .as_ref()
                .map(|x| x.iter().map(|v| num(*v)).collect::<Vec<_>>().join(";"))
                .unwrap_or_default(),
            opt(self.lower),
            opt(self.upper),
            num(self.exact),
            num(self.margin),
            self.paper_eq.clone(),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn push(&mut self, row: BoundRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: BoundReport) {
        self.rows.extend(other.rows);
    }

    pub fn violations(&self) -> Vec<&BoundRow> {
        self.rows.iter().filter(|r| !r.contained()).collect()
    }

    pub fn find(&self, quantity: &str) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record(r.csv_record())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = BoundReport::default();
        r.push(
            BoundRow::new("counting", 10.0, 3.0, "3.7")
                .upper(3.5)
                .at(&[0.5, 0.25]),
        );
        r.push(BoundRow::new("counting", 10.0, 3.0, "3.7").lower(3.5));
        let s = r.to_csv_string().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(
            lines[0],
            "quantity,lambda,epsilon,x,lower,upper,exact,margin,paper_eq"
        );
        assert_eq!(
            lines[1],
            "counting,1.00000000000e1,,5.00000000000e-1;2.50000000000e-1,,3.50000000000e0,3.00000000000e0,3.50000000000e-9,3.7"
        );
        assert_eq!(r.violations().len(), 1);
    }
}
