//! CSV output with a fixed column set and 12 significant digits.

use std::io::Write;
use std::path::Path;

use anyhow::Context;

/// One table cell. Numbers are rounded on output, text is written as is.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_sig12(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back as the rounded value.
pub fn format_sig12(x: f64) -> String {
    if !x.is_finite() {
        return "NaN".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // Keep `-0` out of the tables.
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn emit(&self, path: Option<&Path>) -> anyhow::Result<()> {
        match path {
            Some(p) => {
                let file = std::fs::File::create(p)
                    .with_context(|| format!("cannot create {}", p.display()))?;
                self.write_to(std::io::BufWriter::new(file))
            }
            None => self.write_to(std::io::stdout().lock()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(-0.0), "0");
        assert_eq!(format_sig12(1.5e-20), "0.000000000000000000015");
        assert_eq!(format_sig12(123456.78901234567), "123456.789012");
        assert_eq!(format_sig12(f64::NAN), "NaN");
    }

    #[test]
    fn header_and_unix_line_ends() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Cell::Num(0.5), Cell::Text("ok".into())]);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n0.5,ok\n");
    }
}
