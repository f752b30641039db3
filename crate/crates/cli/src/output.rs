use std::io::Write;

use serde_json::Value;

/// A command result renderable as JSON or as a CSV table.
pub struct Rendered {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Rendered {
    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
        }
    }
}

/// Six significant digits, trailing zeros trimmed; scientific notation
/// outside `[1e-5, 1e6)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(462.02643), "462.026");
        assert_eq!(sig6(-72.09461), "-72.0946");
        assert_eq!(sig6(24.0), "24");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(1778826191322.367), "1.77883e12");
        assert_eq!(sig6(999999.7), "1e6");
        assert_eq!(sig6(1.5e-7), "1.5e-7");
        assert_eq!(sig6(0.000123456789), "0.000123457");
    }
}
