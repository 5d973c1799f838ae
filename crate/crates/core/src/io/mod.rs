//! CSV and SVG artifacts.
//!
//! Column contracts:
//!
//! | artifact   | columns                 |
//! |------------|-------------------------|
//! | scatter    | `re,im`                 |
//! | histogram  | `bin_lo,bin_hi,mass`    |
//! | roc        | `pfa,pd`                |
//! | fbl        | `n,rate`                |
//!
//! Writers render into memory first so callers can decide to emit nothing
//! when a later step fails. Floats use the shortest round-trip form.

mod svg;

pub use svg::SvgPlot;

use std::path::Path;

use faer::c64;

use crate::detection::RocCurve;
use crate::spectra::Histogram;
use crate::{Error, Result};

fn render<R, I>(header: &[&str], rows: R) -> Vec<u8>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    // writing into a Vec cannot fail
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

pub fn scatter_csv(points: &[c64]) -> Vec<u8> {
    render(&["re", "im"], points.iter().map(|z| [z.re.to_string(), z.im.to_string()]))
}

pub fn histogram_csv(h: &Histogram) -> Vec<u8> {
    render(
        &["bin_lo", "bin_hi", "mass"],
        h.rows().map(|(lo, hi, m)| [lo.to_string(), hi.to_string(), m.to_string()]),
    )
}

pub fn roc_csv(roc: &RocCurve) -> Vec<u8> {
    render(&["pfa", "pd"], roc.points.iter().map(|(f, d)| [f.to_string(), d.to_string()]))
}

pub fn rate_csv(table: &[(u64, f64)]) -> Vec<u8> {
    render(&["n", "rate"], table.iter().map(|(n, r)| [n.to_string(), r.to_string()]))
}

/// Generic table with a caller-chosen header.
pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    render(header, rows.iter().map(|r| r.iter().cloned()))
}

/// Parses a two-column numeric CSV with the given header back into pairs.
pub fn read_pairs(bytes: &[u8], header: [&str; 2]) -> Result<Vec<(f64, f64)>> {
    let mut r = csv::Reader::from_reader(bytes);
    let found = r.headers().map_err(|e| Error::Config(format!("csv header: {e}")))?.clone();
    if found.len() != 2 || found[0] != *header[0] || found[1] != *header[1] {
        return Err(Error::Config(format!("expected columns {},{}", header[0], header[1])));
    }
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::Config(format!("csv row: {e}")))?;
            let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Config(format!("csv value {s:?}: {e}")));
            Ok((parse(&rec[0])?, parse(&rec[1])?))
        })
        .collect()
}

/// Writes `bytes` to `path`, creating parent directories.
pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, bytes).map_err(io)
}
