//! Estimating national parameters from time series.
//!
//! The recovery fit follows the application procedure: read the nation's
//! position and slope off the smoothed data, invert the national growth rate
//! for β, locate the recovery halftime, then refine both by least squares on
//! the closed-form curve.

pub mod optimize;
mod shift;

pub use shift::{constants_from_shifts, measure_time_shift};

use crate::error::{Error, Result};
use crate::growth_model::{evolution, evolution_rate, national_gdp};
use crate::numeric::s_function;
use crate::types::{AnnualSeries, FitReport, ModelConstants, RecoveryCurve};
use optimize::{levenberg_marquardt, nelder_mead, solve_linear, Minimum, SimplexOptions};

/// Largest `y/a` at which β is inverted from a point. The inversion divides
/// by `1 − y/a`, so noise is amplified at most 20×.
pub const MAX_CONVERGENCE_RATIO: f64 = 0.95;

const LM_MAX_ITER: usize = 200;

/// β from a point `(y, ẏ)` on a national curve at time `t`:
/// `β = (ẏ/y − (ȧ/a)(y/a)) / (1 − y/a)`.
pub fn beta_from_point(y: f64, ydot: f64, t: f64, c: &ModelConstants) -> Result<f64> {
    const OP: &str = "beta_from_point";
    let a = evolution(t, c);
    if !(y > 0.0 && y < a) {
        return Err(Error::domain(
            OP,
            format!("need 0 < y < a(t) = {a}, got {y}"),
        ));
    }
    let ratio = y / a;
    if ratio > MAX_CONVERGENCE_RATIO {
        return Err(Error::Degenerate {
            op: OP,
            reason: format!("y/a = {ratio:.4} exceeds {MAX_CONVERGENCE_RATIO}"),
        });
    }
    Ok((ydot / y - evolution_rate(a, c)? * ratio) / (1.0 - ratio))
}

/// Value and slope at `t0` of the least-squares quadratic through `window`.
pub fn local_quadratic(window: &[(f64, f64)], t0: f64) -> Option<(f64, f64)> {
    if window.len() < 3 {
        return None;
    }
    let mut m = vec![vec![0.0; 3]; 3];
    let mut rhs = vec![0.0; 3];
    for &(t, v) in window {
        let d = t - t0;
        let basis = [1.0, d, d * d];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
            rhs[i] += basis[i] * v;
        }
    }
    let coef = solve_linear(m, rhs)?;
    Some((coef[0], coef[1]))
}

/// Smoothed value and slope at point `idx` from its centered 5-point window.
fn smoothed_point(pts: &[(f64, f64)], idx: usize) -> Option<(f64, f64)> {
    if idx < 2 || idx + 2 >= pts.len() {
        return None;
    }
    local_quadratic(&pts[idx - 2..=idx + 2], pts[idx].0)
}

fn as_points(series: &AnnualSeries) -> Vec<(f64, f64)> {
    series
        .points()
        .iter()
        .map(|&(y, v)| (f64::from(y), v))
        .collect()
}

/// How the halftime of an S-shaped series is read off the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HalftimeMethod {
    /// First upward crossing of `floor + amplitude/2`, linearly interpolated.
    #[default]
    HalfAmplitude,
    /// Time of steepest smoothed slope, refined by a parabola through the
    /// three slopes around the maximum.
    Inflection,
}

/// Reads the halftime of an S-shaped series.
///
/// `amplitude` and `floor` are only used by [`HalftimeMethod::HalfAmplitude`].
pub fn measure_halftime(
    series: &AnnualSeries,
    amplitude: f64,
    floor: f64,
    method: HalftimeMethod,
) -> Option<f64> {
    let pts = as_points(series);
    match method {
        HalftimeMethod::HalfAmplitude => first_crossing(&pts, floor + amplitude / 2.0),
        HalftimeMethod::Inflection => {
            let slopes: Vec<(f64, f64)> = (2..pts.len().saturating_sub(2))
                .filter_map(|i| smoothed_point(&pts, i).map(|(_, s)| (pts[i].0, s)))
                .collect();
            let (k, _) = slopes
                .iter()
                .enumerate()
                .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
            if k == 0 || k + 1 == slopes.len() {
                return Some(slopes[k].0);
            }
            let (t0, s0) = slopes[k - 1];
            let (t1, s1) = slopes[k];
            let (t2, s2) = slopes[k + 1];
            Some(parabola_vertex((t0, s0), (t1, s1), (t2, s2)).unwrap_or(t1))
        }
    }
}

/// First upward crossing of `level`, interpolated between bracketing points.
fn first_crossing(pts: &[(f64, f64)], level: f64) -> Option<f64> {
    pts.windows(2).find_map(|w| {
        let ((t0, v0), (t1, v1)) = (w[0], w[1]);
        if v0 < level && v1 >= level {
            Some(t0 + (level - v0) / (v1 - v0) * (t1 - t0))
        } else {
            None
        }
    })
}

/// Abscissa of the vertex of the parabola through three points.
pub(crate) fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> Option<f64> {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if a == 0.0 || !a.is_finite() {
        return None;
    }
    Some(-b / (2.0 * a))
}

/// Runs the simplex from every start, keeps the lowest objective (ties broken
/// by lexicographic parameter order), then polishes with Marquardt.
fn multi_start_fit<R>(residuals: R, starts: &[Vec<f64>], steps: &[f64]) -> (Minimum, usize)
where
    R: Fn(&[f64]) -> Vec<f64>,
{
    let objective = |x: &[f64]| residuals(x).iter().map(|r| r * r).sum::<f64>();
    let mut total_iter = 0;
    let mut best: Option<Minimum> = None;
    for start in starts {
        let m = nelder_mead(objective, start, steps, SimplexOptions::default());
        total_iter += m.iterations;
        let better = match &best {
            None => true,
            Some(b) => match m.value.total_cmp(&b.value) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => {
                    m.x.iter()
                        .zip(&b.x)
                        .map(|(p, q)| p.total_cmp(q))
                        .find(|o| o.is_ne())
                        .is_some_and(|o| o.is_lt())
                }
                std::cmp::Ordering::Greater => false,
            },
        };
        if better {
            best = Some(m);
        }
    }
    let coarse = best.expect("at least one start");
    let polished = levenberg_marquardt(&residuals, &coarse.x, LM_MAX_ITER);
    let iterations = total_iter + polished.iterations;
    let result = if polished.value <= coarse.value {
        Minimum {
            converged: coarse.converged && polished.converged,
            ..polished
        }
    } else {
        coarse
    };
    (result, iterations)
}

fn check_fit_input(op: &'static str, series: &AnnualSeries) -> Result<()> {
    if series.len() < 5 {
        return Err(Error::TooShort(format!(
            "{op} needs at least 5 points, got {}",
            series.len()
        )));
    }
    Ok(())
}

/// Least-squares fit of `amplitude / (1 + exp(growth·(halftime − t)))`.
///
/// With `growth_param_fixed` the growth parameter is held and only amplitude
/// and halftime are estimated. Values are normalized by their largest
/// magnitude internally, so rescaling the data rescales only the amplitude.
/// A flat series cannot locate a halftime and is reported as not converged.
pub fn fit_scurve(series: &AnnualSeries, growth_param_fixed: Option<f64>) -> Result<FitReport> {
    check_fit_input("fit_scurve", series)?;
    if let Some(g) = growth_param_fixed {
        if !(g > 0.0) {
            return Err(Error::domain(
                "fit_scurve",
                format!("fixed growth must be positive, got {g}"),
            ));
        }
    }
    let pts = as_points(series);
    let scale = pts.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let (t_first, t_last) = (pts[0].0, pts[pts.len() - 1].0);
    let span = t_last - t_first;
    let t_mid = 0.5 * (t_first + t_last);
    let mut report = FitReport {
        n_points: pts.len(),
        ..FitReport::default()
    };
    let (min, max) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.1), hi.max(p.1))
        });
    if scale == 0.0 || max - min <= 1e-12 * scale {
        report
            .diagnostics
            .push("series is flat; halftime is not identifiable".into());
        report.rss = pts.iter().map(|p| (p.1 - min).powi(2)).sum();
        return Ok(report);
    }

    // Normalized coordinates: amplitude in units of `scale`, halftime as
    // offset from the middle in units of the span, growth as ln(growth·span).
    let data: Vec<(f64, f64)> = pts
        .iter()
        .map(|&(t, v)| ((t - t_mid) / span, v / scale))
        .collect();
    let unpack = |x: &[f64]| -> (f64, f64, f64) {
        let growth = match growth_param_fixed {
            Some(g) => g * span,
            None => x[2].exp(),
        };
        (x[0], x[1], growth)
    };
    let residuals = |x: &[f64]| -> Vec<f64> {
        let (amp, half, growth) = unpack(x);
        data.iter()
            .map(|&(t, v)| s_function(amp, &[growth * (half - t)]) - v)
            .collect()
    };

    let amps = [1.0, 1.5, 2.0];
    let halves = [-0.25, 0.0, 0.25];
    let growths = [2.0f64.ln(), 6.0f64.ln(), 18.0f64.ln()];
    let mut starts = Vec::new();
    for &a in &amps {
        for &h in &halves {
            match growth_param_fixed {
                Some(_) => starts.push(vec![a, h]),
                None => starts.extend(growths.iter().map(|&g| vec![a, h, g])),
            }
        }
    }
    let steps: Vec<f64> = if growth_param_fixed.is_some() {
        vec![0.1, 0.05]
    } else {
        vec![0.1, 0.05, 0.3]
    };
    let (best, iterations) = multi_start_fit(residuals, &starts, &steps);
    let (amp, half, growth) = unpack(&best.x);

    let halftime = t_mid + half * span;
    report.params.insert("amplitude".into(), amp * scale);
    report.params.insert("halftime".into(), halftime);
    report.params.insert("growth_param".into(), growth / span);
    report.rss = best.value * scale * scale;
    report.iterations = iterations;
    report.converged = best.converged;
    if !(amp > 0.0) {
        report.converged = false;
        report
            .diagnostics
            .push(format!("non-positive amplitude {}", amp * scale));
    }
    if halftime < t_first - span || halftime > t_last + span {
        report.converged = false;
        report
            .diagnostics
            .push(format!("halftime {halftime:.1} far outside the data span"));
    }
    Ok(report)
}

/// Two-stage estimate of a nation's `(β, τ)` with `a_bar`, `T` and `E` held
/// at the model constants.
///
/// Stage one reads the smoothed position and slope at the point nearest the
/// middle of the series with `y/a` below [`MAX_CONVERGENCE_RATIO`] and
/// inverts the national growth rate for β. The halftime is where the
/// recovery term reaches one, i.e. `1/y − 1/a = 1/a_bar`; when the data end
/// before that crossing it is extrapolated with β. Stage two refines both by
/// least squares on the closed-form recovery curve.
pub fn fit_recovery(series: &AnnualSeries, c: &ModelConstants) -> Result<FitReport> {
    const OP: &str = "fit_recovery";
    check_fit_input(OP, series)?;
    let pts = as_points(series);
    if let Some(&(t, v)) = pts.iter().find(|p| !(p.1 > 0.0)) {
        return Err(Error::domain(OP, format!("non-positive value {v} at {t}")));
    }
    if pts.iter().all(|&(t, v)| v >= evolution(t, c)) {
        return Err(Error::NotApplicable {
            op: OP,
            reason: "every point lies on or above the evolution envelope".into(),
        });
    }
    let mut report = FitReport {
        n_points: pts.len(),
        ..FitReport::default()
    };

    let (beta0, tau0) = initial_recovery_guess(&pts, c, &mut report.diagnostics)?;
    report
        .diagnostics
        .push(format!("initial beta = {beta0:.5}, tau = {tau0:.2}"));

    let recovery_residuals = |x: &[f64]| -> Vec<f64> {
        let r = RecoveryCurve::new(c, x[0], x[1]);
        pts.iter().map(|&(t, v)| national_gdp(t, &r) - v).collect()
    };
    // Simplex in (ln β, τ/10) so both coordinates move on comparable scales.
    let residuals = |x: &[f64]| recovery_residuals(&[x[0].exp(), 10.0 * x[1]]);
    let mut starts = Vec::new();
    for f in [0.7, 1.0, 1.4] {
        for dt in [-5.0, 0.0, 5.0] {
            starts.push(vec![(beta0 * f).ln(), (tau0 + dt) / 10.0]);
        }
    }
    let (best, iterations) = multi_start_fit(residuals, &starts, &[0.1, 0.2]);
    let beta = best.x[0].exp();
    let tau = 10.0 * best.x[1];
    report.params.insert("beta".into(), beta);
    report.params.insert("tau".into(), tau);
    report.rss = best.value;
    report.iterations = iterations;
    report.converged = best.converged;
    if !RecoveryCurve::new(c, beta, tau).converges_from_below() {
        report.diagnostics.push(format!(
            "beta {beta:.5} does not exceed 1/E; recovery slower than the envelope"
        ));
    }
    Ok(report)
}

fn initial_recovery_guess(
    pts: &[(f64, f64)],
    c: &ModelConstants,
    notes: &mut Vec<String>,
) -> Result<(f64, f64)> {
    let mid = pts.len() / 2;
    let mut order: Vec<usize> = (2..pts.len().saturating_sub(2)).collect();
    order.sort_by_key(|&i| (i.abs_diff(mid), i));
    let mut anchor = None;
    for i in order {
        let Some((y, ydot)) = smoothed_point(pts, i) else {
            continue;
        };
        match beta_from_point(y, ydot, pts[i].0, c) {
            Ok(beta) if beta > 0.0 => {
                anchor = Some((i, y, beta));
                break;
            }
            _ => continue,
        }
    }
    let Some((i, y, beta0)) = anchor else {
        return Err(Error::NotApplicable {
            op: "fit_recovery",
            reason: "no point below the convergence guard with a positive recovery rate".into(),
        });
    };
    notes.push(format!("beta read at {}", pts[i].0));

    // recovery term v(t) = a_bar/y − 1 − exp((T − t)/E); v = 1 at the halftime.
    let recovery_term = |t: f64, v: f64| {
        c.max_gdp / v - 1.0 - ((c.evolution_halftime - t) / c.evolution_lifetime).exp()
    };
    let progress: Vec<(f64, f64)> = pts
        .iter()
        .map(|&(t, v)| (t, -recovery_term(t, v)))
        .collect();
    if let Some(tau) = first_crossing(&progress, -1.0) {
        notes.push("tau from the recovery midpoint crossing".into());
        return Ok((beta0, tau));
    }
    let v = recovery_term(pts[i].0, y);
    let tau = if v > 0.0 {
        pts[i].0 + v.ln() / beta0
    } else {
        pts[i].0
    };
    notes.push("tau extrapolated from the anchor point".into());
    Ok((beta0, tau))
}

/// The S-curve described by a [`fit_scurve`] report.
pub fn scurve_from_report(report: &FitReport) -> Option<crate::types::SCurve> {
    Some(crate::types::SCurve {
        amplitude: report.param("amplitude")?,
        halftime: report.param("halftime")?,
        growth_param: report.param("growth_param")?,
        floor: 0.0,
    })
}
