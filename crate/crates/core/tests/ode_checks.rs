use physgrowth::growth_model::{evolution, life_expectancy, national_gdp};
use physgrowth::ode_verify::{
    integrate_evolution, integrate_national, residual_capital_balance, residual_capital_tradeoff,
    residual_incapacity_decay,
};
use physgrowth::{default_constants, NationParams};

/// Largest relative deviation of an integration from the closed form.
fn evolution_error(step: f64) -> f64 {
    let c = default_constants();
    let traj = integrate_evolution(evolution(1850.0, &c), 1850.0, 2100.0, step, &c).unwrap();
    traj.max_rel_deviation(|t| evolution(t, &c))
}

fn national_error(nation: &str, step: f64) -> f64 {
    let c = default_constants();
    let r = NationParams::preset(nation).unwrap().recovery_curve(&c);
    let traj = integrate_national(national_gdp(1850.0, &r), 1850.0, 2100.0, step, &r, &c).unwrap();
    traj.max_rel_deviation(|t| national_gdp(t, &r))
}

#[test]
fn integrated_evolution_matches_closed_form() {
    let err = evolution_error(0.01);
    assert!(err < 1e-9, "{err:e}");
}

#[test]
fn integrated_recoveries_match_closed_form() {
    for nation in ["usa", "germany", "japan", "korea", "china"] {
        let err = national_error(nation, 0.01);
        assert!(err < 1e-9, "{nation}: {err:e}");
    }
}

#[test]
fn rk4_error_falls_with_fourth_power_of_step() {
    let e: Vec<f64> = [1.0, 0.5, 0.25]
        .iter()
        .map(|&h| evolution_error(h))
        .collect();
    let n: Vec<f64> = [1.0, 0.5, 0.25]
        .iter()
        .map(|&h| national_error("germany", h))
        .collect();
    for errs in [e, n] {
        for pair in errs.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!(
                (14.0..=18.0).contains(&ratio),
                "ratio {ratio} from {errs:?}"
            );
        }
    }
}

#[test]
fn capital_trade_off_exact_in_single_term_limits() {
    let c = default_constants();
    for n in NationParams::reference_table() {
        // Recovery term dead: pure evolution.
        let late = residual_capital_tradeoff(&n, (2400.0, 2600.0), 201, &c).unwrap();
        // Evolution term dominates the denominator far in the past.
        let early = residual_capital_tradeoff(&n, (1400.0, 1500.0), 101, &c).unwrap();
        assert!(late.max_rel_residual < 1e-12, "{}: {late:?}", n.name);
        assert!(early.max_rel_residual < 1e-12, "{}: {early:?}", n.name);
    }
}

#[test]
fn capital_trade_off_crossover_regression() {
    // Measured once at 4.4e-16 for Germany over 1950–2100.
    const FROZEN: f64 = 1e-14;
    let c = default_constants();
    for n in NationParams::reference_table() {
        let report = residual_capital_tradeoff(&n, (1900.0, 2150.0), 1501, &c).unwrap();
        assert!(report.max_rel_residual < FROZEN, "{}: {report:?}", n.name);
    }
}

#[test]
fn capital_balance_holds_with_finite_difference_derivative() {
    let c = default_constants();
    for n in NationParams::reference_table() {
        let report = residual_capital_balance(&n, (1900.0, 2150.0), 251, &c).unwrap();
        assert!(report.max_rel_residual < 1e-7, "{}: {report:?}", n.name);
    }
}

#[test]
fn incapacity_gap_decays_at_beta() {
    let c = default_constants();
    for n in NationParams::reference_table() {
        let r = n.recovery_curve(&c);
        let report = residual_incapacity_decay(&r, (1950.0, 2100.0), 301, &c).unwrap();
        assert!(report.max_rel_residual < 1e-9, "{}: {report:?}", n.name);

        // Independent check: log-slope of the gap between two years.
        let gap = |t: f64| 1.0 / national_gdp(t, &r) - 1.0 / evolution(t, &c);
        let slope = (gap(1960.0).ln() - gap(2000.0).ln()) / 40.0;
        assert!(
            (slope - n.beta).abs() < 1e-9 * n.beta,
            "{}: {slope}",
            n.name
        );
    }
}

#[test]
fn life_expectancy_leads_the_evolution_by_59_years() {
    let c = default_constants();
    let lead = c.evolution_halftime - c.life_halftime;
    assert_eq!(lead, 59.0);
    assert!((lead - c.life_max / 2.0).abs() <= 0.5);

    let ratio = |t: f64| (life_expectancy(t, &c) - c.life_floor) / evolution(t + lead, &c);
    let expected = (c.life_max - c.life_floor) / c.max_gdp;
    let mut t = 1850.0;
    while t <= 2100.0 {
        assert!((ratio(t) - expected).abs() <= 1e-9 * expected, "t={t}");
        t += 0.5;
    }

    let lagged = |t: f64| (life_expectancy(t, &c) - c.life_floor) / evolution(t - lead, &c);
    assert!(lagged(1850.0) / lagged(2100.0) > 2.0);
}
