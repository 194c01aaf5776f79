//! Small numerical helpers shared by the closed-form evaluators.

/// Largest exponent evaluated directly; above this `exp` overflows.
const EXP_LIMIT: f64 = 700.0;

/// Evaluates `amplitude / (1 + Σ exp(x_i))` without overflow.
///
/// When the largest exponent exceeds [`EXP_LIMIT`] numerator and denominator
/// are scaled by `exp(-max)`, which yields the asymptotic form
/// `amplitude · exp(-max)` far below the halftime.
pub(crate) fn s_function(amplitude: f64, exponents: &[f64]) -> f64 {
    let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= EXP_LIMIT {
        let denom = 1.0 + exponents.iter().map(|x| x.exp()).sum::<f64>();
        return amplitude / denom;
    }
    let scale = (-max).exp();
    let denom = scale + exponents.iter().map(|x| (x - max).exp()).sum::<f64>();
    amplitude * scale / denom
}

/// `ln(1 + x) / x`, continuous at zero.
pub(crate) fn ln1p_over_x(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        // ln(1+x)/x = 1 - x/2 + x²/3 - ...
        1.0 - x / 2.0 + x * x / 3.0
    } else {
        x.ln_1p() / x
    }
}
