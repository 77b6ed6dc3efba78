//! CSV output. Floats are written with 17 significant digits so that files
//! round-trip exactly and repeat byte for byte.

use std::io::Write;

use crate::error::Result;

/// `x` in scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a header row and data rows.
pub fn write_table<W: Write>(
    w: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_and_header() {
        let x = 0.1f64 + 0.2;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        let mut buf = Vec::new();
        write_table(
            &mut buf,
            &["n", "error"],
            vec![vec!["4".into(), format_float(1.5)]],
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,error\n4,1.5000000000000000e0\n"
        );
    }
}
