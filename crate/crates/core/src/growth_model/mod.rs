//! Closed-form evaluation of the growth theory.

mod equilibrium;
mod solutions;
mod support;

pub use equilibrium::{production, storables_from_observables, working_time, EquilibriumState};
pub use solutions::{
    capital, capital_weighted_gdp, capital_weighted_log_slope, capital_weighted_ratio, delta_t,
    delta_tau, evolution, evolution_capital, evolution_slope, life_expectancy, national_gdp,
    national_gdp_inverse_form, national_gdp_log_slope, working_time_curve,
};
pub use support::{
    beta_from_support, capacity_function, capital_function, evolution_rate, maintenance_stocks,
    mu_bar_required, national_rate, required_capacity,
};
