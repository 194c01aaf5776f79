//! Numerical checks that the closed-form S-functions solve their growth laws.
//!
//! Two independent routes are used: fixed-step RK4 integration of the growth
//! rate equations compared against the closed forms, and residuals of the
//! differential relations evaluated on a uniform time grid.

pub mod rk4;

use crate::error::{Error, Result};
use crate::growth_model::{
    capital, capital_weighted_log_slope, capital_weighted_ratio, evolution, evolution_slope,
    national_gdp, national_gdp_log_slope,
};
use crate::types::{AnnualSeries, ModelConstants, NationParams, RecoveryCurve, Unit};

/// Central-difference step, years.
pub const FD_STEP: f64 = 1e-4;

/// Maximum residuals of a relation over a sampled time range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub t_range: (f64, f64),
    pub n_samples: usize,
}

impl ResidualReport {
    fn sample(
        op: &'static str,
        t_range: (f64, f64),
        n_samples: usize,
        mut residual: impl FnMut(f64) -> (f64, f64),
    ) -> Result<Self> {
        if n_samples < 10 {
            return Err(Error::domain(
                op,
                format!("need at least 10 samples, got {n_samples}"),
            ));
        }
        let (t0, t1) = t_range;
        if !(t1 > t0) {
            return Err(Error::domain(op, format!("empty range [{t0}, {t1}]")));
        }
        let dt = (t1 - t0) / (n_samples - 1) as f64;
        let mut report = ResidualReport {
            max_abs_residual: 0.0,
            max_rel_residual: 0.0,
            t_range,
            n_samples,
        };
        for i in 0..n_samples {
            let t = if i + 1 == n_samples {
                t1
            } else {
                t0 + i as f64 * dt
            };
            let (abs, rel) = residual(t);
            report.max_abs_residual = report.max_abs_residual.max(abs);
            report.max_rel_residual = report.max_rel_residual.max(rel);
        }
        Ok(report)
    }
}

/// A fine-grid solution produced by the integrator.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<(f64, f64)>,
    pub unit: Unit,
}

impl Trajectory {
    pub fn last(&self) -> (f64, f64) {
        *self
            .points
            .last()
            .expect("trajectory has at least two points")
    }

    /// Largest relative deviation from a reference curve over all grid points.
    pub fn max_rel_deviation(&self, reference: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .map(|&(t, x)| {
                let r = reference(t);
                if r == 0.0 {
                    x.abs()
                } else {
                    ((x - r) / r).abs()
                }
            })
            .fold(0.0, f64::max)
    }

    /// Grid points that fall on whole calendar years.
    pub fn annual(&self) -> Result<AnnualSeries> {
        let pts = self
            .points
            .iter()
            .filter(|(t, _)| (t - t.round()).abs() < 1e-6)
            .map(|&(t, x)| (t.round() as i32, x))
            .collect();
        AnnualSeries::new(pts, self.unit)
    }
}

/// Integrates the evolution growth law `ȧ = a·(1 − a/a_bar)/E` with RK4.
pub fn integrate_evolution(
    a_start: f64,
    t_start: f64,
    t_end: f64,
    step: f64,
    c: &ModelConstants,
) -> Result<Trajectory> {
    if !(a_start > 0.0 && a_start <= c.max_gdp) {
        return Err(Error::domain(
            "integrate_evolution",
            format!("start level {a_start} outside (0, {}]", c.max_gdp),
        ));
    }
    let (e, a_bar) = (c.evolution_lifetime, c.max_gdp);
    let traj = rk4::integrate(
        |_, x: &[f64; 1]| [x[0] * (1.0 - x[0] / a_bar) / e],
        [a_start],
        t_start,
        t_end,
        step,
    )?;
    Ok(Trajectory {
        points: traj.into_iter().map(|(t, x)| (t, x[0])).collect(),
        unit: Unit::CurrencyFlow,
    })
}

/// Integrates the national growth law
/// `ẏ/y = β(1 − y/a) + (ȧ/a)(y/a)` coupled with the evolution law for `a`,
/// starting `a` on the closed-form evolution.
pub fn integrate_national(
    y_start: f64,
    t_start: f64,
    t_end: f64,
    step: f64,
    r: &RecoveryCurve,
    c: &ModelConstants,
) -> Result<Trajectory> {
    let a_start = evolution(t_start, c);
    if !(y_start >= 0.0 && y_start <= a_start) {
        return Err(Error::domain(
            "integrate_national",
            format!("start level {y_start} outside [0, a(t_start) = {a_start}]"),
        ));
    }
    let (e, a_bar, beta) = (c.evolution_lifetime, c.max_gdp, r.beta);
    let traj = rk4::integrate(
        |_, x: &[f64; 2]| {
            let (y, a) = (x[0], x[1]);
            let a_rate = (1.0 - a / a_bar) / e;
            let ratio = y / a;
            [y * (beta * (1.0 - ratio) + a_rate * ratio), a * a_rate]
        },
        [y_start, a_start],
        t_start,
        t_end,
        step,
    )?;
    Ok(Trajectory {
        points: traj.into_iter().map(|(t, x)| (t, x[0])).collect(),
        unit: Unit::CurrencyFlow,
    })
}

/// Residual of the capital trade-off `μ(1 + G·ẏ/y) = μ̄` for the closed-form
/// capital solution, with `μ = k/(G·y)` and analytic `ẏ/y`.
///
/// The relation holds exactly in the pure evolution and pure exponential
/// limits; in the crossover between them the report measures how far the
/// two-term solution departs from it.
pub fn residual_capital_tradeoff(
    n: &NationParams,
    t_range: (f64, f64),
    n_samples: usize,
    c: &ModelConstants,
) -> Result<ResidualReport> {
    let r = n.recovery_curve(c);
    let g = c.capital_lifetime;
    ResidualReport::sample("residual_capital_tradeoff", t_range, n_samples, |t| {
        let mu = n.mu_bar * capital_weighted_ratio(t, &r, c);
        let support = mu * (1.0 + g * national_gdp_log_slope(t, &r));
        let abs = (support - n.mu_bar).abs();
        (abs, abs / n.mu_bar)
    })
}

/// Checks the capital balance `k̇ + k/G = μ(1 + G·ẏ/y)·y + μ̇·G·y` with `k̇`
/// from central differences and the right-hand side analytic. The `μ̇·G·y`
/// term is the capitalization that lifts the capital coefficient.
pub fn residual_capital_balance(
    n: &NationParams,
    t_range: (f64, f64),
    n_samples: usize,
    c: &ModelConstants,
) -> Result<ResidualReport> {
    let r = n.recovery_curve(c);
    let g = c.capital_lifetime;
    ResidualReport::sample("residual_capital_balance", t_range, n_samples, |t| {
        let h = FD_STEP;
        let k = capital(t, n, c);
        let k_dot = (capital(t + h, n, c) - capital(t - h, n, c)) / (2.0 * h);
        let lhs = k_dot + k / g;
        let y = national_gdp(t, &r);
        let y_rate = national_gdp_log_slope(t, &r);
        let mu = n.mu_bar * capital_weighted_ratio(t, &r, c);
        let mu_dot = mu * (capital_weighted_log_slope(t, &r, c) - y_rate);
        let rhs = mu * (1.0 + g * y_rate) * y + mu_dot * g * y;
        let abs = (lhs - rhs).abs();
        (abs, abs / lhs.abs().max(f64::MIN_POSITIVE))
    })
}

/// Checks that `D(t) = 1/y − 1/a` decays at rate β: `Ḋ = −β·D`.
///
/// `y` and `a` come from the closed forms; `Ḋ = −(ẏ/y)/y + (ȧ/a)/a` uses
/// their analytic derivatives. Both residuals are in units of β.
pub fn residual_incapacity_decay(
    r: &RecoveryCurve,
    t_range: (f64, f64),
    n_samples: usize,
    c: &ModelConstants,
) -> Result<ResidualReport> {
    if !(r.beta > 0.0) {
        return Err(Error::domain(
            "residual_incapacity_decay",
            "beta must be positive",
        ));
    }
    ResidualReport::sample("residual_incapacity_decay", t_range, n_samples, |t| {
        let y = national_gdp(t, r);
        let a = evolution(t, c);
        let d = 1.0 / y - 1.0 / a;
        let d_dot = -national_gdp_log_slope(t, r) / y + evolution_slope(t, c) / (a * a);
        let rate = -d_dot / d;
        let abs = (rate - r.beta).abs();
        (abs, abs / r.beta)
    })
}
