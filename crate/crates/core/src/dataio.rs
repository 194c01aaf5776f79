//! Annual series ingestion and normalization.
//!
//! The CSV format is UTF-8 with a header line `year,value`, optionally
//! followed by `,unit=<tag>`, then one `year,value` record per line. Years
//! are integers, values plain decimals without thousands separators; LF and
//! CRLF line endings are both accepted.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{AnnualSeries, Unit};

/// Reads and validates a series file.
pub fn read_csv(path: impl AsRef<Path>) -> Result<AnnualSeries> {
    parse_csv(File::open(path)?)
}

/// Parses the CSV format from any reader.
pub fn parse_csv(reader: impl Read) -> Result<AnnualSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        Some(rec) => rec.map_err(csv_error)?,
        None => {
            return Err(Error::Parse {
                line: 1,
                reason: "missing header".into(),
            })
        }
    };
    let unit = parse_header(&header)?;

    let mut points: Vec<(i32, f64)> = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 2 {
            return Err(Error::Parse {
                line,
                reason: format!("expected 2 fields, found {}", rec.len()),
            });
        }
        let year: i32 = rec[0].trim().parse().map_err(|_| Error::Parse {
            line,
            reason: format!("invalid year `{}`", &rec[0]),
        })?;
        let value: f64 = rec[1].trim().parse().map_err(|_| Error::Parse {
            line,
            reason: format!("invalid value `{}`", &rec[1]),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line,
                reason: format!("value `{}` is not finite", &rec[1]),
            });
        }
        if let Some(&(prev, _)) = points.last() {
            if year == prev {
                return Err(Error::DuplicateYear(year));
            }
            if year < prev {
                return Err(Error::NonMonotoneYear {
                    previous: prev,
                    year,
                });
            }
        }
        points.push((year, value));
    }
    AnnualSeries::new(points, unit)
}

fn parse_header(header: &csv::StringRecord) -> Result<Unit> {
    let bad = |reason: String| Error::Parse { line: 1, reason };
    let fields: Vec<&str> = header.iter().map(str::trim).collect();
    if fields.len() < 2 || fields[0] != "year" || fields[1] != "value" {
        return Err(bad(format!(
            "header must start with `year,value`, got `{}`",
            fields.join(",")
        )));
    }
    match fields.get(2) {
        None => Ok(Unit::default()),
        Some(tag) if fields.len() == 3 => {
            let tag = tag
                .strip_prefix("unit=")
                .ok_or_else(|| bad(format!("expected `unit=<tag>`, got `{tag}`")))?;
            tag.parse().map_err(|e: Error| bad(e.to_string()))
        }
        Some(_) => Err(bad("too many header fields".into())),
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            line,
            reason: format!("{other:?}"),
        },
    }
}

/// Writes a series in the CSV format, unit tag included.
pub fn write_csv(series: &AnnualSeries, path: impl AsRef<Path>) -> Result<()> {
    let mut file = File::create(path)?;
    file.write_all(to_csv_string(series).as_bytes())?;
    Ok(())
}

/// Renders a series in the CSV format. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn to_csv_string(series: &AnnualSeries) -> String {
    let mut out = format!("year,value,unit={}\n", series.unit());
    for &(year, value) in series.points() {
        out.push_str(&format!("{year},{value}\n"));
    }
    out
}

/// Centered five-year moving average over windows of five consecutive
/// years; windows with a missing year are skipped, never interpolated.
pub fn five_year_average(series: &AnnualSeries) -> Result<AnnualSeries> {
    let pts = series.points();
    let averaged: Vec<(i32, f64)> = pts
        .windows(5)
        .filter(|w| w[4].0 - w[0].0 == 4)
        .map(|w| (w[2].0, w.iter().map(|p| p.1).sum::<f64>() / 5.0))
        .collect();
    if averaged.is_empty() {
        return Err(Error::TooShort(
            "five-year average needs five consecutive annual points".into(),
        ));
    }
    AnnualSeries::new(averaged, series.unit())
}

fn covered(what: &'static str, s: &AnnualSeries, year: i32) -> Result<f64> {
    s.get(year).ok_or(Error::Coverage { what, year })
}

/// Converts to prices of `base_year`: `v(t)·d(base)/d(t)`.
pub fn deflate(
    series: &AnnualSeries,
    deflator: &AnnualSeries,
    base_year: i32,
) -> Result<AnnualSeries> {
    if let Some((year, v)) = deflator.points().iter().find(|p| !(p.1 > 0.0)) {
        return Err(Error::domain(
            "deflate",
            format!("deflator {v} at {year} must be positive"),
        ));
    }
    let base = covered("deflator", deflator, base_year)?;
    let points = series
        .points()
        .iter()
        .map(|&(year, v)| Ok((year, v * base / covered("deflator", deflator, year)?)))
        .collect::<Result<Vec<_>>>()?;
    AnnualSeries::new(points, series.unit())
}

/// Divides by population year by year.
pub fn per_capita(series: &AnnualSeries, population: &AnnualSeries) -> Result<AnnualSeries> {
    let points = series
        .points()
        .iter()
        .map(|&(year, v)| {
            let pop = covered("population", population, year)?;
            if !(pop > 0.0) {
                return Err(Error::domain(
                    "per_capita",
                    format!("population {pop} at {year} must be positive"),
                ));
            }
            Ok((year, v / pop))
        })
        .collect::<Result<Vec<_>>>()?;
    AnnualSeries::new(points, series.unit())
}
