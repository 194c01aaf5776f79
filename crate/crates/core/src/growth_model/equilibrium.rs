//! Demand/supply equilibrium between spare time, working time, and the two
//! storable quantities (the employed parts of human capacity and physical
//! capital).
//!
//! With `eps` the maximum annual working time and `y0` the agricultural GDP,
//! the generalized equilibrium reads
//!
//! ```text
//! (eps − w)·h_s + y0·w/eps = y = w·k_w
//! ```
//!
//! and resolving it gives the working time and the production function.

use crate::error::{Error, Result};
use crate::types::ModelConstants;

/// One consistent equilibrium point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumState {
    /// Working time, fraction of the maximum annual working time.
    pub w: f64,
    /// Spare time, same unit as `w`.
    pub s: f64,
    /// GDP per capita.
    pub y: f64,
    /// Required part of human capacity.
    pub h_s: f64,
    /// Employed part of physical capital.
    pub k_w: f64,
}

impl EquilibriumState {
    pub fn from_storables(h_s: f64, k_w: f64, c: &ModelConstants) -> Result<Self> {
        let w = working_time(h_s, k_w, c)?;
        Ok(Self {
            w,
            s: c.max_working_time - w,
            y: w * k_w,
            h_s,
            k_w,
        })
    }

    pub fn from_observables(w: f64, y: f64, c: &ModelConstants) -> Result<Self> {
        let (h_s, k_w) = storables_from_observables(w, y, c)?;
        Ok(Self {
            w,
            s: c.max_working_time - w,
            y,
            h_s,
            k_w,
        })
    }

    /// Largest relative violation of the two sides of the equilibrium condition.
    pub fn residual(&self, c: &ModelConstants) -> f64 {
        let demand = self.s * self.h_s + c.agrarian_gdp * self.w / c.max_working_time;
        let supply = self.w * self.k_w;
        let scale = self.y.abs().max(f64::MIN_POSITIVE);
        ((demand - self.y).abs() / scale).max((supply - self.y).abs() / scale)
    }
}

fn check_storables(op: &'static str, h_s: f64, k_w: f64, c: &ModelConstants) -> Result<f64> {
    if !(h_s > 0.0) {
        return Err(Error::domain(
            op,
            format!("h_s must be positive, got {h_s}"),
        ));
    }
    let floor = c.agrarian_gdp / c.max_working_time;
    if !(k_w >= floor) {
        return Err(Error::domain(
            op,
            format!("k_w must be at least y0/eps = {floor}, got {k_w}"),
        ));
    }
    let denom = h_s + k_w - floor;
    if !(denom > 0.0) {
        return Err(Error::domain(op, "h_s + k_w - y0/eps must be positive"));
    }
    Ok(denom)
}

/// Working time `w = eps·h_s / (h_s + k_w − y0/eps)`, in `(0, eps]`.
pub fn working_time(h_s: f64, k_w: f64, c: &ModelConstants) -> Result<f64> {
    let denom = check_storables("working_time", h_s, k_w, c)?;
    Ok(c.max_working_time * h_s / denom)
}

/// Production function `y = eps·h_s·k_w / (h_s + k_w − y0/eps)`.
///
/// Bounded by `eps·h_s` however large the employed capital grows.
pub fn production(h_s: f64, k_w: f64, c: &ModelConstants) -> Result<f64> {
    let denom = check_storables("production", h_s, k_w, c)?;
    Ok(c.max_working_time * h_s * k_w / denom)
}

/// Recovers `(h_s, k_w)` from observed working time and GDP.
///
/// Fails at `w = eps`, the pre-industrial state where `h_s` is undefined,
/// and when `y` does not exceed `y0·w/eps`, which would leave `h_s ≤ 0`.
pub fn storables_from_observables(w: f64, y: f64, c: &ModelConstants) -> Result<(f64, f64)> {
    const OP: &str = "storables_from_observables";
    let eps = c.max_working_time;
    if !(w > 0.0 && w < eps) {
        return Err(Error::domain(
            OP,
            format!("working time must lie in (0, {eps}), got {w}"),
        ));
    }
    if !(y > 0.0) {
        return Err(Error::domain(OP, format!("GDP must be positive, got {y}")));
    }
    let base = c.agrarian_gdp * w / eps;
    if !(y > base) {
        return Err(Error::domain(
            OP,
            format!("GDP {y} must exceed the agricultural share y0·w/eps = {base}"),
        ));
    }
    let k_w = y / w;
    let h_s = (y - base) / (eps - w);
    Ok((h_s, k_w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::default_constants;

    #[test]
    fn initial_state_works_full_time() {
        let c = default_constants();
        assert_eq!(working_time(900.0, 900.0, &c).unwrap(), 1.0);
        assert_eq!(production(900.0, 900.0, &c).unwrap(), 900.0);
    }

    #[test]
    fn symmetric_denominator_gives_half_time() {
        let c = default_constants();
        let k_w = 12_345.0;
        assert_eq!(working_time(k_w - 900.0, k_w, &c).unwrap(), 0.5);
    }

    #[test]
    fn worked_example() {
        let c = default_constants();
        let w = working_time(25000.0, 60000.0, &c).unwrap();
        let oracle_w = 25000.0 / 84100.0;
        assert!((w - oracle_w).abs() < 1e-15);
        assert!((w - 0.29727).abs() < 5e-6);
        let y = production(25000.0, 60000.0, &c).unwrap();
        assert!((y - oracle_w * 60000.0).abs() / y < 1e-12);
        assert!((y - 17835.9).abs() < 0.05);
    }

    #[test]
    fn production_saturates_below_capacity() {
        let c = default_constants();
        let h_s = 30000.0;
        let y = production(h_s, 1e12, &c).unwrap();
        assert!(y < h_s);
        assert!((y / h_s - 1.0).abs() < 1e-7);
    }

    #[test]
    fn invalid_storables_are_rejected() {
        let c = default_constants();
        assert!(working_time(0.0, 1000.0, &c).is_err());
        assert!(working_time(100.0, 899.0, &c).is_err());
        assert!(production(-1.0, 1000.0, &c).is_err());
    }

    #[test]
    fn observables_invert() {
        let c = default_constants();
        let (h_s, k_w) = storables_from_observables(0.5, 1800.0, &c).unwrap();
        assert!((k_w - 3600.0).abs() < 1e-9);
        assert!((h_s - 2700.0).abs() < 1e-9);
        assert!(storables_from_observables(1.0, 900.0, &c).is_err());
        assert!(storables_from_observables(0.5, 0.0, &c).is_err());
    }

    #[test]
    fn states_satisfy_trade_off_and_balance() {
        let c = default_constants();
        let st = EquilibriumState::from_storables(25000.0, 60000.0, &c).unwrap();
        assert_eq!(st.s + st.w, 1.0);
        assert!(st.residual(&c) < 1e-9);
        let st = EquilibriumState::from_observables(0.3, 20000.0, &c).unwrap();
        assert_eq!(st.s + st.w, 1.0);
        assert!(st.residual(&c) < 1e-9);
    }
}
