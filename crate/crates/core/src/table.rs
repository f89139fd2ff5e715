//! Deterministic text output: number formatting and CSV assembly.

use std::fmt::Write as _;

/// Formats a float with 17 significant digits, trailing zeros removed.
///
/// Fixed notation is used for decimal exponents in `[-5, 17)`, scientific
/// notation otherwise. Output is identical across platforms and runs.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "NaN".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A CSV table with a fixed header; cells are preformatted strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I, T>(header: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    /// Array of objects keyed by header; cells that parse as numbers are
    /// emitted as JSON numbers, others as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, cell)| (h.clone(), cell_to_json(cell)))
                    .collect::<serde_json::Map<_, _>>();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

fn cell_to_json(cell: &str) -> serde_json::Value {
    if let Ok(i) = cell.parse::<i64>() {
        return i.into();
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => serde_json::Number::from_f64(v)
            .map(serde_json::Value::Number)
            .unwrap_or_else(|| cell.into()),
        _ => cell.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(3.0), "3");
        assert_eq!(format_float(-12.0), "-12");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(0.1), "0.10000000000000001");
        assert_eq!(format_float(1.5_f64.ln()), "0.40546510810816438");
        assert_eq!(format_float(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_float(2.5e20), "2.5e20");
        assert_eq!(format_float(123456.75), "123456.75");
    }

    #[test]
    fn round_trips() {
        for &v in &[
            0.1,
            1.0 / 3.0,
            -2.0_f64.sqrt(),
            1e-300,
            6.02e23,
            0.999999999999,
        ] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["i", "coeff"]);
        t.push(vec!["0".into(), "3".into()]);
        t.push(vec!["1".into(), "-1/2".into()]);
        assert_eq!(t.to_csv(), "i,coeff\n0,3\n1,-1/2\n");
        let json = t.to_json();
        assert_eq!(json[0]["coeff"], 3);
        assert_eq!(json[1]["coeff"], "-1/2");
    }
}
