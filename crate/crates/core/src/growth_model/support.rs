//! Growth rates, capital/capacity functions and the maintenance conditions.

use crate::error::{Error, Result};
use crate::types::ModelConstants;

/// Recovery growth parameter from the capital shares: `(μ̄/μ_e − 1)/G`.
pub fn beta_from_support(mu_bar: f64, mu_e: f64, c: &ModelConstants) -> Result<f64> {
    if !(mu_e > 0.0 && mu_e < mu_bar) {
        return Err(Error::domain(
            "beta_from_support",
            format!("need 0 < mu_e < mu_bar, got mu_e={mu_e} mu_bar={mu_bar}"),
        ));
    }
    Ok((mu_bar / mu_e - 1.0) / c.capital_lifetime)
}

/// Gross fixed capital share needed to recover at `beta`: `μ_e·(1 + βG)`.
pub fn mu_bar_required(beta: f64, mu_e: f64, c: &ModelConstants) -> Result<f64> {
    if !(beta > 0.0 && mu_e > 0.0) {
        return Err(Error::domain(
            "mu_bar_required",
            format!("need beta > 0 and mu_e > 0, got beta={beta} mu_e={mu_e}"),
        ));
    }
    Ok(mu_e * (1.0 + beta * c.capital_lifetime))
}

/// Growth rate of the evolution at level `a`: `(1 − a/a_bar)/E`.
pub fn evolution_rate(a: f64, c: &ModelConstants) -> Result<f64> {
    if !(a > 0.0 && a < c.max_gdp) {
        return Err(Error::domain(
            "evolution_rate",
            format!("level {a} outside (0, {})", c.max_gdp),
        ));
    }
    Ok((1.0 - a / c.max_gdp) / c.evolution_lifetime)
}

/// National growth rate `β(1 − y/a) + (ȧ/a)(y/a)`.
pub fn national_rate(y: f64, a: f64, beta: f64, c: &ModelConstants) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain(
            "national_rate",
            format!("GDP must be positive, got {y}"),
        ));
    }
    if y > a {
        return Err(Error::domain(
            "national_rate",
            format!("GDP {y} above the evolution level {a}"),
        ));
    }
    let ratio = y / a;
    Ok(beta * (1.0 - ratio) + evolution_rate(a, c)? * ratio)
}

/// Capital function `μ = μ̄/(1 + G·ẏ/y)`.
pub fn capital_function(mu_bar: f64, ydot_over_y: f64, c: &ModelConstants) -> Result<f64> {
    let denom = 1.0 + c.capital_lifetime * ydot_over_y;
    if !(denom > 0.0) {
        return Err(Error::domain(
            "capital_function",
            format!("1 + G·ẏ/y = {denom} must be positive"),
        ));
    }
    Ok(mu_bar / denom)
}

/// Capacity function `ν = ν̄/(1 + E·ȧ/a)`.
pub fn capacity_function(adot_over_a: f64, nu_bar: f64, c: &ModelConstants) -> Result<f64> {
    let denom = 1.0 + c.evolution_lifetime * adot_over_a;
    if !(denom > 0.0) {
        return Err(Error::domain(
            "capacity_function",
            format!("1 + E·ȧ/a = {denom} must be positive"),
        ));
    }
    Ok(nu_bar / denom)
}

/// Stocks kept in steady repair by the maintenance conditions:
/// human capacity `h = ν·E·y` and physical capital `k = μ·G·y`.
pub fn maintenance_stocks(y: f64, mu: f64, nu: f64, c: &ModelConstants) -> Result<(f64, f64)> {
    if !(y > 0.0 && mu > 0.0 && nu > 0.0) {
        return Err(Error::domain(
            "maintenance_stocks",
            format!("y, mu and nu must be positive, got y={y} mu={mu} nu={nu}"),
        ));
    }
    Ok((nu * c.evolution_lifetime * y, mu * c.capital_lifetime * y))
}

/// Required part of human capacity `h_s = y / (eps·(1 − 1/(μ_w·eps·G)))`.
///
/// Needs `μ_w·eps·G > 1`, otherwise working time would exceed its maximum.
pub fn required_capacity(y: f64, mu_w: f64, c: &ModelConstants) -> Result<f64> {
    let eps = c.max_working_time;
    let leverage = mu_w * eps * c.capital_lifetime;
    if !(leverage > 1.0) {
        return Err(Error::domain(
            "required_capacity",
            format!("mu_w·eps·G = {leverage} must exceed 1"),
        ));
    }
    Ok(y / (eps * (1.0 - 1.0 / leverage)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth_model::solutions::evolution;
    use crate::types::{default_constants, NationParams};

    #[test]
    fn table_betas_from_support() {
        let c = default_constants();
        let cases = [("USA", 0.05), ("Japan", 0.09), ("Korea", 0.08)];
        for (name, expected) in cases {
            let n = NationParams::preset(name).unwrap();
            let b = beta_from_support(n.mu_bar, n.mu_e, &c).unwrap();
            assert!((b - expected).abs() < 1e-12, "{name}: {b}");
        }
        let de = NationParams::preset("germany").unwrap();
        let b = beta_from_support(de.mu_bar, de.mu_e, &c).unwrap();
        assert!((b - 0.085).abs() < 1e-12);
        assert!(beta_from_support(0.1, 0.2, &c).is_err());
        assert!(beta_from_support(0.1, 0.0, &c).is_err());
    }

    #[test]
    fn required_share_inverts_beta() {
        let c = default_constants();
        let mu_bar = mu_bar_required(0.09, 0.08, &c).unwrap();
        assert!((beta_from_support(mu_bar, 0.08, &c).unwrap() - 0.09).abs() < 1e-14);
    }

    #[test]
    fn evolution_rate_values() {
        let c = default_constants();
        assert!((evolution_rate(37500.0, &c).unwrap() - 1.0 / 124.0).abs() < 1e-15);
        assert!(evolution_rate(75000.0 - 1e-6, &c).unwrap() < 1e-12);
        let r = evolution_rate(20180.6, &c).unwrap();
        assert!((r - (1.0 - 20180.6 / 75000.0) / 62.0).abs() < 1e-15);
        assert!((r - 0.011789).abs() < 5e-7);
        assert!(evolution_rate(0.0, &c).is_err());
        assert!(evolution_rate(75000.0, &c).is_err());
    }

    #[test]
    fn national_rate_limits() {
        let c = default_constants();
        let a = evolution(2000.0, &c);
        let on_envelope = national_rate(a, a, 0.09, &c).unwrap();
        assert!((on_envelope - evolution_rate(a, &c).unwrap()).abs() < 1e-15);
        let early = national_rate(1e-6, a, 0.09, &c).unwrap();
        assert!((early - 0.09).abs() < 1e-9);
        assert!(national_rate(a * 1.01, a, 0.09, &c).is_err());
    }

    #[test]
    fn capital_function_cases() {
        let c = default_constants();
        assert_eq!(capital_function(0.25, 0.0, &c).unwrap(), 0.25);
        let mu_bar = mu_bar_required(0.09, 0.08, &c).unwrap();
        let mu = capital_function(mu_bar, 0.09, &c).unwrap();
        assert!((mu - 0.08).abs() < 1e-15);
        assert!((capital_function(0.25, 0.04, &c).unwrap() - 0.125).abs() < 1e-15);
        assert!(capital_function(0.25, -0.04, &c).is_err());
    }

    #[test]
    fn capacity_function_cases() {
        let c = default_constants();
        let nu0 = c.base_capacity_share();
        let nu = capacity_function(1.0 / 62.0, 2.0 * nu0, &c).unwrap();
        assert!((nu - nu0).abs() < 1e-15);
        assert_eq!(capacity_function(0.0, 0.3, &c).unwrap(), 0.3);
        let nu = capacity_function(1.0 / 124.0, 4.0 / 62.0, &c).unwrap();
        assert!((nu - (4.0 / 62.0) / 1.5).abs() < 1e-15);
        assert!((nu - 0.0430).abs() < 1e-4);
        assert!(capacity_function(-1.0, 0.3, &c).is_err());
    }

    #[test]
    fn maintenance_levels() {
        let c = default_constants();
        // agricultural level: μ0·eps·G = 1 keeps k equal to y0
        let (_, k0) = maintenance_stocks(900.0, 1.0 / 25.0, 0.01, &c).unwrap();
        assert!((k0 - 900.0).abs() < 1e-12);
        let (h, _) = maintenance_stocks(75000.0, 0.1, 4.0 / 62.0, &c).unwrap();
        assert!((h - 300_000.0).abs() < 1e-9);
        assert!(maintenance_stocks(0.0, 0.1, 0.1, &c).is_err());
    }

    #[test]
    fn required_capacity_bound() {
        let c = default_constants();
        let hs = required_capacity(1.0, 0.15, &c).unwrap();
        assert!((hs - 15.0 / 11.0).abs() < 1e-15);
        assert!(hs < 1.4);
        assert!((hs / 4.0 - 0.341).abs() < 1e-3);
        let big = required_capacity(1.0, 1e9, &c).unwrap();
        assert!((big - 1.0).abs() < 1e-9);
        assert!(required_capacity(1.0, 0.04, &c).is_err());
    }
}
