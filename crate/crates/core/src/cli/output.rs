//! CSV and summary writers.
//!
//! Numbers are written in the shortest form that parses back to the same
//! `f64`; plain decimal in the usual range, exponent notation outside it.

use std::io::{self, Write};
use std::path::Path;

use crate::analysis::Spectrum;
use crate::solvers::TimeSeries;

pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn into_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::new(io::ErrorKind::InvalidData, format!("{other:?}")),
    }
}

/// Writes a header line and one comma-separated row per item.
pub fn write_csv<W, R>(w: W, header: &[&str], rows: impl IntoIterator<Item = R>) -> io::Result<()>
where
    W: Write,
    R: AsRef<[f64]>,
{
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(into_io)?;
    for row in rows {
        out.write_record(row.as_ref().iter().map(|&v| format_number(v)))
            .map_err(into_io)?;
    }
    out.flush()
}

fn write_file<R: AsRef<[f64]>>(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = R>,
) -> io::Result<()> {
    write_csv(std::fs::File::create(path)?, header, rows)
}

/// `gt,sz,dsz`, one row per sample.
pub fn emit_timeseries(series: &TimeSeries, path: &Path) -> io::Result<()> {
    let rows = series
        .states()
        .enumerate()
        .map(|(k, s)| [series.time(k), s[0], s[1]]);
    write_file(path, &["gt", "sz", "dsz"], rows)
}

/// `sz,dsz`, used for both the phase plane and the Poincaré section.
pub fn emit_points(points: &[(f64, f64)], path: &Path) -> io::Result<()> {
    write_file(path, &["sz", "dsz"], points.iter().map(|&(a, b)| [a, b]))
}

/// `f,power`, `n/2 + 1` rows.
pub fn emit_spectrum(spectrum: &Spectrum, path: &Path) -> io::Result<()> {
    let rows = spectrum
        .freqs
        .iter()
        .zip(&spectrum.power)
        .map(|(&f, &p)| [f, p]);
    write_file(path, &["f", "power"], rows)
}

/// Reads back a file produced by [`write_csv`].
pub fn read_csv(path: &Path) -> io::Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::Reader::from_path(path).map_err(into_io)?;
    let header = reader
        .headers()
        .map_err(into_io)?
        .iter()
        .map(str::to_string)
        .collect();
    let rows = reader
        .records()
        .map(|record| {
            record.map_err(into_io)?
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
                })
                .collect()
        })
        .collect::<io::Result<_>>()?;
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting_round_trips() {
        for v in [0.0, -0.0, 0.1, 4.0, -1.5e-7, 1e-300, 6.02e23, f64::MIN_POSITIVE, 1.0 / 3.0] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_number(0.25), "0.25");
        assert_eq!(format_number(1e-20), "1e-20");
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["a", "b"], [[1.0, 2.5], [-3.0, 1e-9]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,2.5\n-3,1e-9\n");
    }
}
