//! Time shifts between two S-shaped series and the lifetimes they imply.

use crate::error::{Error, Result};
use crate::types::AnnualSeries;

use super::parabola_vertex;

/// Minimum overlap of the two series, years.
pub const MIN_OVERLAP_YEARS: f64 = 30.0;

/// Minimum overlap as a fraction of the shorter series' span.
pub const MIN_OVERLAP_FRACTION: f64 = 0.5;

/// Lag scan resolution, years.
pub const LAG_RESOLUTION: f64 = 0.25;

fn normalized(series: &AnnualSeries, name: &str) -> Result<AnnualSeries> {
    let scale = series.values().map(f64::abs).fold(0.0, f64::max);
    let (lo, hi) = series
        .values()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if series.len() < 2 || scale == 0.0 || hi - lo <= 1e-12 * scale {
        return Err(Error::Degenerate {
            op: "measure_time_shift",
            reason: format!("series {name} is flat"),
        });
    }
    series.map_values(series.unit(), |_, v| v / scale)
}

/// Relative misfit of `a(t)` against `gain·b(t − lag)` over the overlap with
/// the least-squares gain: `1 − (a·b)²/(|a|²|b|²)`. `None` when the overlap is
/// shorter than `min_overlap`.
fn misfit(a: &AnnualSeries, b: &AnnualSeries, lag: f64, min_overlap: f64) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = a
        .points()
        .iter()
        .filter_map(|&(t, va)| b.interpolate(f64::from(t) - lag).map(|vb| (va, vb)))
        .collect();
    let (b_first, b_last) = (f64::from(b.first_year()?), f64::from(b.last_year()?));
    let (a_first, a_last) = (f64::from(a.first_year()?), f64::from(a.last_year()?));
    let overlap = a_last.min(b_last + lag) - a_first.max(b_first + lag);
    if overlap < min_overlap || pairs.len() < 2 {
        return None;
    }
    let saa: f64 = pairs.iter().map(|p| p.0 * p.0).sum();
    let sbb: f64 = pairs.iter().map(|p| p.1 * p.1).sum();
    let sab: f64 = pairs.iter().map(|p| p.0 * p.1).sum();
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((1.0 - sab / saa * (sab / sbb)).max(0.0))
}

/// Lag in years by which `series_a` trails `series_b`: positive when
/// `a(t) ≈ λ·b(t − lag)`.
///
/// Both series are scaled to unit maximum, and at each candidate lag `b` is
/// linearly interpolated onto the years of `a` and matched with a
/// least-squares gain, so only the shape has to agree. Lags are scanned at
/// 0.25-year resolution over every lag whose overlap covers at least half
/// the shorter series and 30 years, and the minimum is refined by a parabola
/// through its neighbours.
///
/// The half-span rule matters: exponential tails match themselves at any
/// lag once a gain is free, so short overlaps in the tails are excluded.
pub fn measure_time_shift(series_a: &AnnualSeries, series_b: &AnnualSeries) -> Result<f64> {
    const OP: &str = "measure_time_shift";
    let a = normalized(series_a, "a")?;
    let b = normalized(series_b, "b")?;
    let (a_first, a_last) = (
        f64::from(a.first_year().unwrap()),
        f64::from(a.last_year().unwrap()),
    );
    let (b_first, b_last) = (
        f64::from(b.first_year().unwrap()),
        f64::from(b.last_year().unwrap()),
    );
    let overlap = a_last.min(b_last) - a_first.max(b_first);
    if overlap < MIN_OVERLAP_YEARS {
        return Err(Error::domain(
            OP,
            format!("series overlap {overlap} years, need {MIN_OVERLAP_YEARS}"),
        ));
    }
    let min_overlap =
        MIN_OVERLAP_YEARS.max(MIN_OVERLAP_FRACTION * (a_last - a_first).min(b_last - b_first));
    let lag_min = a_first - b_last + min_overlap;
    let lag_max = a_last - b_first - min_overlap;
    let lo = (lag_min / LAG_RESOLUTION).ceil() as i64;
    let hi = (lag_max / LAG_RESOLUTION).floor() as i64;
    let scan: Vec<(f64, f64)> = (lo..=hi)
        .filter_map(|k| {
            let lag = k as f64 * LAG_RESOLUTION;
            misfit(&a, &b, lag, min_overlap).map(|m| (lag, m))
        })
        .collect();
    let (k, &(lag, best)) = scan
        .iter()
        .enumerate()
        .min_by(|x, y| {
            x.1 .1
                .total_cmp(&y.1 .1)
                .then(x.1 .0.abs().total_cmp(&y.1 .0.abs()))
        })
        .ok_or_else(|| Error::domain(OP, "no admissible lag"))?;
    // An exact match on the grid has a kinked, not parabolic, minimum.
    if k == 0 || k + 1 == scan.len() || best <= 1e-15 {
        return Ok(lag);
    }
    let refined = parabola_vertex(scan[k - 1], scan[k], scan[k + 1]).unwrap_or(lag);
    if (refined - lag).abs() <= LAG_RESOLUTION {
        Ok(refined)
    } else {
        Ok(lag)
    }
}

/// Inverts the two capital delays for the lifetimes `(E, G)`.
///
/// `G = (exp(β·Δτ) − 1)/β` from the recovery shift; `E` then solves
/// `ΔT = E·ln(1 + G/E)` by bisection on `[1, 500]`.
pub fn constants_from_shifts(
    shift_evolution: f64,
    shift_recovery: f64,
    beta: f64,
) -> Result<(f64, f64)> {
    const OP: &str = "constants_from_shifts";
    if !(shift_evolution > 0.0 && shift_recovery > 0.0) {
        return Err(Error::NoRoot {
            op: OP,
            lo: 1.0,
            hi: 500.0,
        });
    }
    if !(beta > 0.0) {
        return Err(Error::domain(
            OP,
            format!("beta must be positive, got {beta}"),
        ));
    }
    let g = (beta * shift_recovery).exp_m1() / beta;
    let delay = |e: f64| e * (g / e).ln_1p() - shift_evolution;
    let (mut lo, mut hi) = (1.0_f64, 500.0_f64);
    if delay(lo) > 0.0 || delay(hi) < 0.0 {
        return Err(Error::NoRoot { op: OP, lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if delay(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok((0.5 * (lo + hi), g))
}
