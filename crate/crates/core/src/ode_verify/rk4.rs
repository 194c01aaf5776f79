//! Fixed-step classic Runge–Kutta integrator.
//!
//! ```text
//! k1 = f(t,       x)
//! k2 = f(t + h/2, x + h·k1/2)
//! k3 = f(t + h/2, x + h·k2/2)
//! k4 = f(t + h,   x + h·k3)
//! x' = x + h·(k1 + 2k2 + 2k3 + k4)/6
//! ```

use crate::error::{Error, Result};

fn axpy<const N: usize>(x: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| x[i] + h * k[i])
}

/// One RK4 step of `dx/dt = f(t, x)`.
pub fn rk4_step<const N: usize, F>(f: &F, t: f64, x: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k1 = f(t, x);
    let k2 = f(t + 0.5 * h, &axpy(x, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(x, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(x, h, &k3));
    std::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates from `t_start` to `t_end` on a uniform grid no coarser than
/// `step`, returning every grid point including both ends.
///
/// The step is shrunk slightly when it does not divide the interval.
pub fn integrate<const N: usize, F>(
    f: F,
    x0: [f64; N],
    t_start: f64,
    t_end: f64,
    step: f64,
) -> Result<Vec<(f64, [f64; N])>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::domain(
            "rk4",
            format!("step must be positive, got {step}"),
        ));
    }
    if !(t_end > t_start) {
        return Err(Error::domain(
            "rk4",
            format!("empty interval [{t_start}, {t_end}]"),
        ));
    }
    let span = t_end - t_start;
    let ratio = span / step;
    let n = if (ratio - ratio.round()).abs() < 1e-9 {
        ratio.round()
    } else {
        ratio.ceil()
    } as usize;
    let h = span / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    let mut x = x0;
    out.push((t_start, x));
    for i in 0..n {
        let t = t_start + i as f64 * h;
        x = rk4_step(&f, t, &x, h);
        let t_next = if i + 1 == n {
            t_end
        } else {
            t_start + (i + 1) as f64 * h
        };
        out.push((t_next, x));
    }
    Ok(out)
}
