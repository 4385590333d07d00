//! Text formats shared by the library and the CLI.
//!
//! Numbers are written in the shortest representation that parses back to
//! the same `f64`, with `.` as decimal separator and LF line endings.

use crate::error::{Error, Result};

pub fn format_f64(v: f64) -> String {
    // Debug formatting is the shortest round-trip form and switches to
    // exponent notation for very large/small magnitudes.
    format!("{v:?}")
}

pub fn csv_line(values: &[f64]) -> String {
    values.iter().map(|&v| format_f64(v)).collect::<Vec<_>>().join(",")
}

/// One value per line; blank lines are ignored.
pub fn parse_column(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| parse_number(l, n + 1))
        .collect()
}

/// Comma-separated rows of equal length, no header.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| l.split(',').map(|c| parse_number(c, n + 1)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    if let Some(first) = rows.first() {
        if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
            return Err(Error::DimensionMismatch {
                what: "csv row",
                expected: first.len(),
                found: bad.len(),
            });
        }
    }
    Ok(rows)
}

fn parse_number(cell: &str, line: usize) -> Result<f64> {
    cell.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidParameter(format!("line {line}: cannot parse {:?} as a number", cell.trim())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shortest_forms() {
        assert_eq!(format_f64(0.1), "0.1");
        assert_eq!(format_f64(-3.0), "-3.0");
        assert_eq!(format_f64(1e-7), "1e-7");
        assert_eq!(csv_line(&[1.5, 2.0]), "1.5,2.0");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_column("1\nx\n").is_err());
        assert!(parse_matrix("1,2\n3\n").is_err());
        assert_eq!(parse_column("1\n\n2.5\n").unwrap(), vec![1.0, 2.5]);
    }

    proptest! {
        #[test]
        fn round_trip(v in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
            let back: f64 = format_f64(v).parse().unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }
    }
}
