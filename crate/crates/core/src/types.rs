//! Domain records shared by every module: the universal constants, national
//! recovery parameters, annual series and curve parameter sets.
//!
//! Working time is carried as a fraction of the maximum annual working time,
//! so `max_working_time` is 1.0 and 96 hours per week is display-only.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::s_function;

/// Hours per week corresponding to the maximum annual working time.
pub const HOURS_PER_WEEK_AT_MAX: f64 = 96.0;

/// Employed-capital share used when splitting total capital (UK/Germany value).
pub const DEFAULT_EMPLOYED_CAPITAL_SHARE: f64 = 0.15;

/// The universal constants of the growth theory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConstants {
    /// Lifetime of human capacity, years.
    pub evolution_lifetime: f64,
    /// Lifetime of physical capital, years.
    pub capital_lifetime: f64,
    /// Maximum annual working time (the unit of working time).
    pub max_working_time: f64,
    /// Agricultural GDP per capita, 1991 US$ p.a.
    pub agrarian_gdp: f64,
    /// Asymptotic maximum GDP per capita.
    pub max_gdp: f64,
    /// Calendar year at which the industrial evolution reaches half its amplitude.
    pub evolution_halftime: f64,
    /// Pre-industrial life expectancy, years.
    pub life_floor: f64,
    /// Maximum unisex life expectancy, years.
    pub life_max: f64,
    pub life_halftime: f64,
}

impl Default for ModelConstants {
    fn default() -> Self {
        Self {
            evolution_lifetime: 62.0,
            capital_lifetime: 25.0,
            max_working_time: 1.0,
            agrarian_gdp: 900.0,
            max_gdp: 75000.0,
            evolution_halftime: 2040.0,
            life_floor: 30.0,
            life_max: 118.0,
            life_halftime: 1981.0,
        }
    }
}

/// The default constants.
pub fn default_constants() -> ModelConstants {
    ModelConstants::default()
}

impl ModelConstants {
    /// Keys accepted by [`ModelConstants::set`], short form first.
    pub const KEYS: [(&'static str, &'static str); 9] = [
        ("E", "evolution_lifetime"),
        ("G", "capital_lifetime"),
        ("eps_bar", "max_working_time"),
        ("y0", "agrarian_gdp"),
        ("a_bar", "max_gdp"),
        ("T", "evolution_halftime"),
        ("L0", "life_floor"),
        ("L_bar", "life_max"),
        ("T_L", "life_halftime"),
    ];

    /// Overrides one field by key. Both the short and the long key names work.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let field = Self::KEYS
            .iter()
            .find(|(short, long)| *short == key || *long == key)
            .map(|(_, long)| *long)
            .ok_or_else(|| Error::domain("constants", format!("unknown key `{key}`")))?;
        if !value.is_finite() {
            return Err(Error::domain("constants", format!("{key} must be finite")));
        }
        let slot = match field {
            "evolution_lifetime" => &mut self.evolution_lifetime,
            "capital_lifetime" => &mut self.capital_lifetime,
            "max_working_time" => &mut self.max_working_time,
            "agrarian_gdp" => &mut self.agrarian_gdp,
            "max_gdp" => &mut self.max_gdp,
            "evolution_halftime" => &mut self.evolution_halftime,
            "life_floor" => &mut self.life_floor,
            "life_max" => &mut self.life_max,
            _ => &mut self.life_halftime,
        };
        *slot = value;
        Ok(())
    }

    /// Checks every invariant of the constants.
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::domain("constants", reason));
        if !(self.evolution_lifetime > self.capital_lifetime && self.capital_lifetime > 0.0) {
            return fail(format!(
                "need E > G > 0, got E={} G={}",
                self.evolution_lifetime, self.capital_lifetime
            ));
        }
        if self.max_working_time != 1.0 {
            return fail(format!(
                "eps_bar must be 1.0, got {}",
                self.max_working_time
            ));
        }
        if !(self.max_gdp > self.agrarian_gdp && self.agrarian_gdp > 0.0) {
            return fail(format!(
                "need a_bar > y0 > 0, got a_bar={} y0={}",
                self.max_gdp, self.agrarian_gdp
            ));
        }
        if !(self.life_halftime < self.evolution_halftime) {
            return fail("life-expectancy halftime must precede the evolution halftime".into());
        }
        let lead = self.evolution_halftime - self.life_halftime;
        if (lead - self.life_max / 2.0).abs() > 0.5 {
            return fail(format!(
                "T - T_L = {lead} differs from L_bar/2 = {} by more than half a year",
                self.life_max / 2.0
            ));
        }
        Ok(())
    }

    /// Base capacity share `1/(eps_bar·E)`.
    pub fn base_capacity_share(&self) -> f64 {
        1.0 / (self.max_working_time * self.evolution_lifetime)
    }

    /// The industrial evolution as a simple S-curve.
    pub fn evolution_curve(&self) -> SCurve {
        SCurve {
            amplitude: self.max_gdp,
            halftime: self.evolution_halftime,
            growth_param: 1.0 / self.evolution_lifetime,
            floor: 0.0,
        }
    }

    /// Life expectancy as a simple S-curve sitting on the pre-industrial floor.
    pub fn life_curve(&self) -> SCurve {
        SCurve {
            amplitude: self.life_max - self.life_floor,
            halftime: self.life_halftime,
            growth_param: 1.0 / self.evolution_lifetime,
            floor: self.life_floor,
        }
    }
}

/// Per-nation recovery parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NationParams {
    pub name: String,
    /// Halftime of the national recovery, calendar year.
    pub tau: f64,
    /// Gross fixed capital share.
    pub mu_bar: f64,
    /// Entrance value of the capital function.
    pub mu_e: f64,
    /// Initial growth rate of recovery, per year.
    pub beta: f64,
    /// Gross fixed capacity share; `None` means `4/(eps_bar·E)`.
    pub nu_bar: Option<f64>,
    /// Employed-capital share.
    pub mu_w: f64,
}

impl NationParams {
    pub fn new(name: &str, tau: f64, mu_bar: f64, mu_e: f64, beta: f64) -> Self {
        Self {
            name: name.to_string(),
            tau,
            mu_bar,
            mu_e,
            beta,
            nu_bar: None,
            mu_w: DEFAULT_EMPLOYED_CAPITAL_SHARE,
        }
    }

    /// The five reference nations with their published recovery parameters.
    pub fn reference_table() -> Vec<NationParams> {
        vec![
            Self::new("USA", 1965.0, 0.18, 0.08, 0.05),
            Self::new("Germany", 1970.0, 0.25, 0.08, 0.09),
            Self::new("Japan", 1971.0, 0.26, 0.08, 0.09),
            Self::new("Korea", 2010.0, 0.27, 0.09, 0.08),
            Self::new("China", 2040.0, 0.34, 0.11, 0.10),
        ]
    }

    /// Looks up a reference nation by case-insensitive name.
    pub fn preset(name: &str) -> Option<NationParams> {
        Self::reference_table()
            .into_iter()
            .find(|n| n.name.eq_ignore_ascii_case(name))
    }

    pub fn nu_bar(&self, c: &ModelConstants) -> f64 {
        self.nu_bar.unwrap_or(4.0 * c.base_capacity_share())
    }

    pub fn validate(&self) -> Result<()> {
        let fail =
            |reason: String| Err(Error::domain("nation", format!("{}: {reason}", self.name)));
        if !(0.0 < self.mu_e && self.mu_e < self.mu_bar && self.mu_bar < 1.0) {
            return fail(format!(
                "need 0 < mu_e < mu_bar < 1, got mu_e={} mu_bar={}",
                self.mu_e, self.mu_bar
            ));
        }
        if !(self.beta > 0.0) {
            return fail(format!("beta must be positive, got {}", self.beta));
        }
        if !(1800.0..=2100.0).contains(&self.tau) {
            return fail(format!("tau {} outside [1800, 2100]", self.tau));
        }
        if let Some(nu) = self.nu_bar {
            if !(nu > 0.0) {
                return fail(format!("nu_bar must be positive, got {nu}"));
            }
        }
        if !(self.mu_w > 0.0 && self.mu_w < 1.0) {
            return fail(format!("mu_w must lie in (0, 1), got {}", self.mu_w));
        }
        Ok(())
    }

    pub fn recovery_curve(&self, c: &ModelConstants) -> RecoveryCurve {
        RecoveryCurve::new(c, self.beta, self.tau)
    }
}

/// Unit tag of an [`AnnualSeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Unit {
    /// Flow per year: GDP, employed capital, required capacity.
    #[default]
    CurrencyFlow,
    /// Accumulated stock: total physical capital.
    CurrencyStock,
    Years,
    DimensionlessFraction,
}

impl Unit {
    pub fn tag(self) -> &'static str {
        match self {
            Unit::CurrencyFlow => "currency-flow",
            Unit::CurrencyStock => "currency-stock",
            Unit::Years => "years",
            Unit::DimensionlessFraction => "dimensionless-fraction",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "currency-flow" => Ok(Unit::CurrencyFlow),
            "currency-stock" => Ok(Unit::CurrencyStock),
            "years" => Ok(Unit::Years),
            "dimensionless-fraction" => Ok(Unit::DimensionlessFraction),
            other => Err(Error::InvalidSeries(format!("unknown unit tag `{other}`"))),
        }
    }
}

/// A validated annual time series: strictly increasing integer years, finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnualSeries {
    points: Vec<(i32, f64)>,
    unit: Unit,
}

impl AnnualSeries {
    pub fn new(points: Vec<(i32, f64)>, unit: Unit) -> Result<Self> {
        for w in points.windows(2) {
            let (prev, year) = (w[0].0, w[1].0);
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
        if let Some((year, v)) = points.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "value {v} at {year} is not finite"
            )));
        }
        Ok(Self { points, unit })
    }

    /// Samples `f` at every year in `from..=to`.
    pub fn from_fn(from: i32, to: i32, unit: Unit, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((from..=to).map(|y| (y, f(f64::from(y)))).collect(), unit)
    }

    pub fn points(&self) -> &[(i32, f64)] {
        &self.points
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    /// Value at an exact year, if present.
    pub fn get(&self, year: i32) -> Option<f64> {
        self.points
            .binary_search_by_key(&year, |p| p.0)
            .ok()
            .map(|i| self.points[i].1)
    }

    pub fn first_year(&self) -> Option<i32> {
        self.points.first().map(|p| p.0)
    }

    pub fn last_year(&self) -> Option<i32> {
        self.points.last().map(|p| p.0)
    }

    /// Applies `f` to every value, keeping years; the result is re-validated.
    pub fn map_values(&self, unit: Unit, f: impl Fn(i32, f64) -> f64) -> Result<Self> {
        Self::new(
            self.points.iter().map(|&(y, v)| (y, f(y, v))).collect(),
            unit,
        )
    }

    /// Linear interpolation at a fractional year; `None` outside the covered range.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        let first = f64::from(self.first_year()?);
        let last = f64::from(self.last_year()?);
        if t < first || t > last {
            return None;
        }
        let idx = self.points.partition_point(|p| f64::from(p.0) <= t);
        if idx == 0 {
            return Some(self.points[0].1);
        }
        if idx == self.points.len() {
            return Some(self.points[idx - 1].1);
        }
        let (t0, v0) = self.points[idx - 1];
        let (t1, v1) = self.points[idx];
        let frac = (t - f64::from(t0)) / f64::from(t1 - t0);
        Some(v0 + frac * (v1 - v0))
    }
}

/// A simple S-curve `floor + amplitude / (1 + exp(growth·(halftime − t)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SCurve {
    pub amplitude: f64,
    pub halftime: f64,
    pub growth_param: f64,
    pub floor: f64,
}

impl SCurve {
    pub fn eval(&self, t: f64) -> f64 {
        self.floor + s_function(self.amplitude, &[self.growth_param * (self.halftime - t)])
    }

    /// Time derivative.
    pub fn slope(&self, t: f64) -> f64 {
        let s = self.eval(t) - self.floor;
        self.growth_param * s * (1.0 - s / self.amplitude)
    }
}

/// Parameters of the two-term recovery S-function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryCurve {
    pub max_gdp: f64,
    pub evolution_halftime: f64,
    pub evolution_lifetime: f64,
    pub beta: f64,
    pub tau: f64,
}

impl RecoveryCurve {
    pub fn new(c: &ModelConstants, beta: f64, tau: f64) -> Self {
        Self {
            max_gdp: c.max_gdp,
            evolution_halftime: c.evolution_halftime,
            evolution_lifetime: c.evolution_lifetime,
            beta,
            tau,
        }
    }

    /// Whether the recovery runs faster than the envelope it converges into.
    ///
    /// Not enforced: callers warn when this is false.
    pub fn converges_from_below(&self) -> bool {
        self.beta > 1.0 / self.evolution_lifetime
    }

    /// Exponents of the evolution and recovery terms at `t`.
    pub(crate) fn exponents(&self, t: f64) -> [f64; 2] {
        [
            (self.evolution_halftime - t) / self.evolution_lifetime,
            self.beta * (self.tau - t),
        ]
    }
}

/// Result of any estimation operation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitReport {
    pub params: BTreeMap<String, f64>,
    /// Residual sum of squares in the units of the data.
    pub rss: f64,
    pub n_points: usize,
    pub converged: bool,
    pub iterations: usize,
    /// Free-form notes: degenerate input, guard hits, start selection.
    pub diagnostics: Vec<String>,
}

impl FitReport {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }
}

impl fmt::Display for FitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in &self.params {
            writeln!(f, "{name} = {value}")?;
        }
        writeln!(f, "rss = {}", self.rss)?;
        writeln!(f, "n_points = {}", self.n_points)?;
        writeln!(f, "iterations = {}", self.iterations)?;
        writeln!(f, "converged = {}", self.converged)?;
        for note in &self.diagnostics {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}
