//! Locale-independent CSV emission with 17 significant digits.

use std::fmt::Write as _;

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Small CSV builder: a fixed header, then rows of preformatted cells.
#[derive(Debug, Clone)]
pub struct CsvTable {
    columns: usize,
    text: String,
}

pub enum Cell<'a> {
    Num(f64),
    Int(i64),
    Text(&'a str),
    Bool(bool),
}

impl From<f64> for Cell<'_> {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell<'_> {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell<'_> {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl<'a> From<&'a str> for Cell<'a> {
    fn from(x: &'a str) -> Self {
        Cell::Text(x)
    }
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self {
            columns: header.len(),
            text,
        }
    }

    /// Free-form `# ...` line placed before the header.
    pub fn with_preamble(preamble: &str, header: &[&str]) -> Self {
        let mut table = Self::new(header);
        table.text = format!("# {preamble}\n{}", table.text);
        table
    }

    pub fn push(&mut self, row: &[Cell<'_>]) {
        assert_eq!(row.len(), self.columns, "row width does not match header");
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            match cell {
                Cell::Num(x) => self.text.push_str(&fmt_f64(*x)),
                Cell::Int(n) => {
                    let _ = write!(self.text, "{n}");
                }
                Cell::Text(s) => self.text.push_str(s),
                Cell::Bool(b) => self.text.push_str(if *b { "true" } else { "false" }),
            }
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.replace('.', "").len(), 17);
        }
        assert_eq!(fmt_f64(1.5), "1.5000000000000000e0");
    }

    #[test]
    fn table_layout() {
        let mut t = CsvTable::new(&["a", "b", "ok"]);
        t.push(&[1.0.into(), 2usize.into(), true.into()]);
        assert_eq!(t.as_str(), "a,b,ok\n1.0000000000000000e0,2,true\n");
    }
}
