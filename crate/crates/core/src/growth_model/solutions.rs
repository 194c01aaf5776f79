//! Closed-form S-function solutions: the industrial evolution, national
//! recoveries, physical capital and life expectancy, plus the time shifts
//! between GDP and capital.

use crate::error::{Error, Result};
use crate::numeric::{ln1p_over_x, s_function};
use crate::types::{ModelConstants, NationParams, RecoveryCurve};

/// Industrial evolution `a(t) = a_bar / (1 + exp((T − t)/E))`.
pub fn evolution(t: f64, c: &ModelConstants) -> f64 {
    c.evolution_curve().eval(t)
}

/// Time derivative of [`evolution`].
pub fn evolution_slope(t: f64, c: &ModelConstants) -> f64 {
    c.evolution_curve().slope(t)
}

/// National recovery `y(t) = a_bar / (1 + exp((T − t)/E) + exp(β(τ − t)))`.
pub fn national_gdp(t: f64, r: &RecoveryCurve) -> f64 {
    s_function(r.max_gdp, &r.exponents(t))
}

/// Analytic `ẏ/y` of the national recovery.
pub fn national_gdp_log_slope(t: f64, r: &RecoveryCurve) -> f64 {
    let [eu, ev] = r.exponents(t);
    log_slope(eu, ev, 1.0 / r.evolution_lifetime, r.beta)
}

/// `(u/E + β·v) / (1 + u + v)` with `u = exp(eu)`, `v = exp(ev)`, scaled to avoid overflow.
fn log_slope(eu: f64, ev: f64, rate_u: f64, rate_v: f64) -> f64 {
    let m = eu.max(ev).max(0.0);
    let (one, u, v) = ((-m).exp(), (eu - m).exp(), (ev - m).exp());
    (rate_u * u + rate_v * v) / (one + u + v)
}

/// The same recovery evaluated through the inverse form
/// `1/y = 1/a(t) + exp(β(τ − t)) / a_bar`.
///
/// The inverse of the national GDP minus the inverse of the evolution
/// ("human incapacity") decays exponentially at rate β.
pub fn national_gdp_inverse_form(t: f64, r: &RecoveryCurve) -> f64 {
    let inv_a = 1.0
        / s_function(
            r.max_gdp,
            &[(r.evolution_halftime - t) / r.evolution_lifetime],
        );
    let inv_y = inv_a + (r.beta * (r.tau - t)).exp() / r.max_gdp;
    1.0 / inv_y
}

/// Delay of capital behind GDP on the evolution: `E·ln(1 + G/E)`.
pub fn delta_t(c: &ModelConstants) -> f64 {
    c.evolution_lifetime * (c.capital_lifetime / c.evolution_lifetime).ln_1p()
}

/// Delay of capital behind GDP during recovery: `ln(1 + βG)/β`.
///
/// Tends to `G` as `β → 0`.
pub fn delta_tau(beta: f64, c: &ModelConstants) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(
            "delta_tau",
            format!("beta must be positive, got {beta}"),
        ));
    }
    let g = c.capital_lifetime;
    Ok(g * ln1p_over_x(beta * g))
}

/// Exponents of the capital-weighted GDP `y_k`, i.e. the recovery exponents
/// shifted by `ΔT` and `Δτ`.
///
/// The shifts enter as `ln(1 + G/E)` and `ln(1 + βG)`, which are exactly
/// `ΔT/E` and `β·Δτ`.
fn capital_exponents(t: f64, r: &RecoveryCurve, c: &ModelConstants) -> [f64; 2] {
    let [eu, ev] = r.exponents(t);
    let g = c.capital_lifetime;
    [
        eu + (g / r.evolution_lifetime).ln_1p(),
        ev + (r.beta * g).ln_1p(),
    ]
}

/// Capital-weighted GDP
/// `y_k(t) = a_bar / (1 + exp((T + ΔT − t)/E) + exp(β(τ + Δτ − t)))`.
pub fn capital_weighted_gdp(t: f64, r: &RecoveryCurve, c: &ModelConstants) -> f64 {
    s_function(r.max_gdp, &capital_exponents(t, r, c))
}

/// Analytic `ẏ_k/y_k`.
pub fn capital_weighted_log_slope(t: f64, r: &RecoveryCurve, c: &ModelConstants) -> f64 {
    let [eu, ev] = capital_exponents(t, r, c);
    log_slope(eu, ev, 1.0 / r.evolution_lifetime, r.beta)
}

/// Ratio `y_k/y`, evaluated without forming either S-function.
pub fn capital_weighted_ratio(t: f64, r: &RecoveryCurve, c: &ModelConstants) -> f64 {
    let [eu, ev] = r.exponents(t);
    let [ku, kv] = capital_exponents(t, r, c);
    let m = ku.max(kv).max(0.0);
    let one = (-m).exp();
    (one + (eu - m).exp() + (ev - m).exp()) / (one + (ku - m).exp() + (kv - m).exp())
}

/// Physical capital `k(t) = μ̄·G·y_k(t)`.
pub fn capital(t: f64, n: &NationParams, c: &ModelConstants) -> f64 {
    let r = n.recovery_curve(c);
    n.mu_bar * c.capital_lifetime * capital_weighted_gdp(t, &r, c)
}

/// Physical capital on the pure evolution (recovery term removed):
/// `μ̄·G·a_bar / (1 + (1 + G/E)·exp((T − t)/E))`.
pub fn evolution_capital(t: f64, mu_bar: f64, c: &ModelConstants) -> f64 {
    let g = c.capital_lifetime;
    let eu = (c.evolution_halftime - t) / c.evolution_lifetime + (g / c.evolution_lifetime).ln_1p();
    mu_bar * g * s_function(c.max_gdp, &[eu])
}

/// Unisex life expectancy `L(t) = L0 + (L_bar − L0)/(1 + exp((T_L − t)/E))`.
pub fn life_expectancy(t: f64, c: &ModelConstants) -> f64 {
    c.life_curve().eval(t)
}

/// Working time reconstructed from GDP and total capital,
/// `w(t) = eps·(y0 + y(t)) / (y0/eps + k(t))`, both including the
/// agricultural base level.
///
/// Total capital stands in for the employed part, so after saturation this
/// falls to `1/(μ̄G)` rather than the observed value.
pub fn working_time_curve(t: f64, n: &NationParams, c: &ModelConstants) -> f64 {
    let eps = c.max_working_time;
    let y = national_gdp(t, &n.recovery_curve(c));
    let k = capital(t, n, c);
    eps * (c.agrarian_gdp + y) / (c.agrarian_gdp / eps + k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::default_constants;

    fn germany(c: &ModelConstants) -> (NationParams, RecoveryCurve) {
        let n = NationParams::preset("germany").unwrap();
        let r = n.recovery_curve(c);
        (n, r)
    }

    #[test]
    fn evolution_halftime_and_tails() {
        let c = default_constants();
        assert_eq!(evolution(2040.0, &c), 37500.0);
        assert!(evolution(-1e6, &c) >= 0.0);
        assert!(evolution(-1e6, &c) < 1e-300);
        assert_eq!(evolution(1e6, &c), 75000.0);
        // direct evaluation oracle
        let oracle = 75000.0 / (1.0 + 1f64.exp());
        assert!((evolution(1978.0, &c) - oracle).abs() < 1e-9);
        assert!((evolution(1978.0, &c) - 20170.6066).abs() < 1e-3);
    }

    #[test]
    fn national_gdp_symmetric_terms() {
        let c = default_constants();
        // Pick beta so both exponents agree at t: β(τ − t) = (T − t)/E.
        let t = 1900.0;
        let tau = 1950.0;
        let beta = (2040.0 - t) / 62.0 / (tau - t);
        let r = RecoveryCurve::new(&c, beta, tau);
        let u = ((2040.0 - t) / 62.0f64).exp();
        assert!((national_gdp(t, &r) - 75000.0 / (1.0 + 2.0 * u)).abs() < 1e-9);
    }

    #[test]
    fn germany_at_its_halftime() {
        let c = default_constants();
        let (_, r) = germany(&c);
        let oracle = 75000.0 / (2.0 + (70.0f64 / 62.0).exp());
        let y = national_gdp(1970.0, &r);
        assert!((y - oracle).abs() < 1e-9);
        assert!((y - 14727.07).abs() < 0.01);
        let y24 = national_gdp_inverse_form(1970.0, &r);
        assert!((y24 - y).abs() / y < 1e-12);
        assert_eq!(national_gdp(1e6, &r), 75000.0);
    }

    #[test]
    fn inverse_form_limit_at_tau() {
        let c = default_constants();
        // Evolution term negligible: recovery long after the evolution halftime.
        let r = RecoveryCurve::new(&c, 0.1, 4000.0);
        let y = national_gdp_inverse_form(4000.0, &r);
        assert!((y / 37500.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn time_shifts() {
        let c = default_constants();
        let dt = delta_t(&c);
        assert!((dt - 62.0 * (87.0f64 / 62.0).ln()).abs() < 1e-12);
        assert!((dt - 21.0).abs() < 0.1);
        let mut c0 = c;
        c0.capital_lifetime = 0.0;
        assert_eq!(delta_t(&c0), 0.0);
        let mut c25 = c;
        c25.evolution_lifetime = 25.0;
        assert!((delta_t(&c25) - 25.0 * 2f64.ln()).abs() < 1e-12);

        assert!((delta_tau(0.09, &c).unwrap() - 3.25f64.ln() / 0.09).abs() < 1e-12);
        assert!((delta_tau(0.05, &c).unwrap() - 2.25f64.ln() / 0.05).abs() < 1e-12);
        assert!((delta_tau(1e-9, &c).unwrap() - 25.0).abs() < 1e-6);
        assert!(delta_tau(0.0, &c).is_err());
        assert!(delta_tau(-0.1, &c).is_err());
    }

    #[test]
    fn capital_asymptote_and_pure_evolution_identity() {
        let c = default_constants();
        let (n, _) = germany(&c);
        assert!((capital(1e5, &n, &c) - 468_750.0).abs() < 1e-6);
        for t in [1800.0, 1950.0, 2040.0, 2200.0] {
            let u = ((2040.0 - t) / 62.0f64).exp();
            let oracle = 0.25 * 25.0 * 75000.0 / (1.0 + (1.0 + 25.0 / 62.0) * u);
            let k = evolution_capital(t, 0.25, &c);
            assert!((k - oracle).abs() / oracle < 1e-14, "t={t}");
        }
    }

    #[test]
    fn capital_trails_gdp_by_the_recovery_shift() {
        let c = default_constants();
        let (n, r) = germany(&c);
        let dtau = delta_tau(0.09, &c).unwrap();
        let t = 1970.0 + dtau;
        let u = ((2040.0 + delta_t(&c) - t) / 62.0f64).exp();
        let oracle = 0.25 * 25.0 * 75000.0 / (1.0 + u + 1.0);
        assert!((capital(t, &n, &c) - oracle).abs() / oracle < 1e-12);
        assert!(capital_weighted_gdp(t, &r, &c) < national_gdp(t, &r));
    }

    #[test]
    fn life_expectancy_values() {
        let c = default_constants();
        assert_eq!(life_expectancy(1981.0, &c), 74.0);
        assert_eq!(life_expectancy(-1e6, &c), 30.0);
        assert_eq!(life_expectancy(1e6, &c), 118.0);
    }

    #[test]
    fn log_slopes_match_central_differences() {
        let c = default_constants();
        let (_, r) = germany(&c);
        let h = 1e-4;
        for t in [1900.0, 1950.0, 1970.0, 2000.0, 2060.0] {
            let fd = (national_gdp(t + h, &r) - national_gdp(t - h, &r)) / (2.0 * h);
            let an = national_gdp_log_slope(t, &r) * national_gdp(t, &r);
            assert!((fd - an).abs() / an.abs() < 1e-6, "t={t}");
            let fd = (capital_weighted_gdp(t + h, &r, &c) - capital_weighted_gdp(t - h, &r, &c))
                / (2.0 * h);
            let an = capital_weighted_log_slope(t, &r, &c) * capital_weighted_gdp(t, &r, &c);
            assert!((fd - an).abs() / an.abs() < 1e-6, "t={t}");
            let fd = (evolution(t + h, &c) - evolution(t - h, &c)) / (2.0 * h);
            assert!((fd - evolution_slope(t, &c)).abs() / fd < 1e-6);
        }
    }

    #[test]
    fn working_time_curve_falls_from_full_time() {
        let c = default_constants();
        let (n, _) = germany(&c);
        let w1800 = working_time_curve(1800.0, &n, &c);
        assert!(w1800 <= 1.0 && w1800 > 0.99);
        let mut prev = w1800;
        for year in 1801..=2100 {
            let w = working_time_curve(f64::from(year), &n, &c);
            assert!(w < prev && w > 0.0, "year {year}");
            prev = w;
        }
    }
}
