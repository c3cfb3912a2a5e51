use std::fmt::Write;

use num_rational::Ratio;
use serde::Serialize;

/// First line of every CSV document.
pub const SCHEMA_LINE: &str = "# schema=1";

/// CSV document with the schema line, a header row and data rows.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(columns: &[&str]) -> Self {
        let mut buf = String::new();
        writeln!(buf, "{SCHEMA_LINE}").unwrap();
        writeln!(buf, "{}", columns.join(",")).unwrap();
        Self { buf }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let line: Vec<String> = cells.into_iter().map(|c| c.to_string()).collect();
        writeln!(self.buf, "{}", line.join(",")).unwrap();
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// `x` with 15 significant digits.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (14 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// A rational constant in both notations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exact {
    pub fraction: String,
    pub decimal: String,
    #[serde(skip)]
    pub value: f64,
}

impl Exact {
    pub fn new(num: i64, den: i64) -> Self {
        let r = Ratio::new(num, den);
        let value = *r.numer() as f64 / *r.denom() as f64;
        Self { fraction: r.to_string(), decimal: sig15(value), value }
    }
}
