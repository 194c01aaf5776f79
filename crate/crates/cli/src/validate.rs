//! Consistency checks of the built-in constants and reference table against
//! the published figures.

use std::fmt;

use physgrowth::growth_model::{
    beta_from_support, capital, delta_t, delta_tau, evolution, life_expectancy, maintenance_stocks,
    required_capacity, working_time_curve,
};
use physgrowth::{ModelConstants, NationParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub status: Status,
}

impl Check {
    /// PASS within `pass`, WARN within `warn`, FAIL beyond.
    fn graded(name: impl Into<String>, expected: f64, computed: f64, pass: f64, warn: f64) -> Self {
        let diff = (computed - expected).abs();
        let status = if diff <= pass {
            Status::Pass
        } else if diff <= warn {
            Status::Warn
        } else {
            Status::Fail
        };
        Self {
            name: name.into(),
            expected,
            computed,
            status,
        }
    }

    fn within(name: impl Into<String>, expected: f64, computed: f64, tol: f64) -> Self {
        Self::graded(name, expected, computed, tol, tol)
    }

    fn below(name: impl Into<String>, bound: f64, computed: f64) -> Self {
        Self {
            name: name.into(),
            expected: bound,
            computed,
            status: if computed < bound {
                Status::Pass
            } else {
                Status::Fail
            },
        }
    }
}

/// Reference growth parameters are quoted to two decimals, so a gap of half a
/// unit in the last place still passes; up to 0.02 is a warning.
const BETA_PASS: f64 = 0.005 - 1e-9;
const BETA_WARN: f64 = 0.02;
const EXACT: f64 = 1e-9;

pub fn run_checks(c: &ModelConstants) -> Vec<Check> {
    let mut checks = vec![
        Check::within("E [yr]", 62.0, c.evolution_lifetime, 0.0),
        Check::within("G [yr]", 25.0, c.capital_lifetime, 0.0),
        Check::within("a_bar", 75000.0, c.max_gdp, 0.0),
        Check::within("T", 2040.0, c.evolution_halftime, 0.0),
        Check::within(
            "evolution at T",
            37500.0,
            evolution(c.evolution_halftime, c),
            EXACT,
        ),
        Check::within("capital delay dT [yr]", 21.0, delta_t(c), 0.1),
        Check::within(
            "exp(dT/E) - (1 + G/E)",
            0.0,
            (delta_t(c) / c.evolution_lifetime).exp()
                - (1.0 + c.capital_lifetime / c.evolution_lifetime),
            1e-12,
        ),
    ];
    checks.push(Check::within(
        "recovery delay dtau at beta 0.09 [yr]",
        13.1,
        delta_tau(0.09, c).unwrap_or(f64::NAN),
        0.05,
    ));
    checks.push(Check::within(
        "T - T_L [yr]",
        59.0,
        c.evolution_halftime - c.life_halftime,
        0.5,
    ));
    checks.push(Check::within(
        "L_bar/2 - (T - T_L) [yr]",
        0.0,
        c.life_max / 2.0 - (c.evolution_halftime - c.life_halftime),
        0.5,
    ));
    checks.push(Check::within(
        "life expectancy at T_L [yr]",
        74.0,
        life_expectancy(c.life_halftime, c),
        EXACT,
    ));

    for n in NationParams::reference_table() {
        let beta = beta_from_support(n.mu_bar, n.mu_e, c).unwrap_or(f64::NAN);
        checks.push(Check::graded(
            format!("{} beta from capital shares", n.name),
            n.beta,
            beta,
            BETA_PASS,
            BETA_WARN,
        ));
    }

    if let Some(china) = NationParams::preset("china") {
        checks.push(Check::graded(
            "China saturated mu_bar*G*eps",
            8.0,
            china.mu_bar * c.capital_lifetime * c.max_working_time,
            EXACT,
            0.5 + EXACT,
        ));
    }
    if let Some(germany) = NationParams::preset("germany") {
        checks.push(Check::within(
            "Germany capital asymptote mu_bar*G*a_bar",
            468750.0,
            capital(1e5, &germany, c),
            1e-6,
        ));
        checks.push(Check::within(
            "Germany working time 1800 [x 96 h/wk]",
            1.0,
            working_time_curve(1800.0, &germany, c),
            0.01,
        ));
    }

    let base_mu = 1.0 / (c.capital_lifetime * c.max_working_time);
    checks.push(Check::within(
        "base capital k0 = mu0*G*y0",
        c.agrarian_gdp,
        base_mu * c.capital_lifetime * c.agrarian_gdp,
        EXACT,
    ));
    let nu4 = 4.0 * c.base_capacity_share();
    let h = maintenance_stocks(c.max_gdp, base_mu, nu4, c).map_or(f64::NAN, |s| s.0);
    checks.push(Check::within(
        "capacity upper bound 4*a_bar/eps",
        300000.0,
        h,
        1e-6,
    ));
    let eps = c.max_working_time;
    let factor = required_capacity(1.0, 0.15, c)
        .map(|f| f * eps)
        .unwrap_or(f64::NAN);
    checks.push(Check::below(
        "required capacity factor (mu_w = 0.15)",
        1.4,
        factor,
    ));
    checks.push(Check::within(
        "required/total capacity h_s/h",
        1.0 / 3.0,
        factor / 4.0,
        0.01,
    ));
    checks
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.status != Status::Fail)
}

pub fn render(checks: &[Check]) -> String {
    let width = checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!(
        "{:<width$}  {:>14}  {:>14}  status\n",
        "check", "expected", "computed"
    );
    for c in checks {
        out.push_str(&format!(
            "{:<width$}  {:>14}  {:>14}  {}\n",
            c.name,
            fmt_num(c.expected),
            fmt_num(c.computed),
            c.status
        ));
    }
    let count = |s| checks.iter().filter(|c| c.status == s).count();
    out.push_str(&format!(
        "{} PASS, {} WARN, {} FAIL\n",
        count(Status::Pass),
        count(Status::Warn),
        count(Status::Fail)
    ));
    out
}

fn fmt_num(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e7) {
        format!("{v:.3e}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}
