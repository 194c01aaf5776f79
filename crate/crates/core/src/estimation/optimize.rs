//! Derivative-free minimizers used by the fitting routines: a Nelder–Mead
//! simplex for the global search and a Levenberg–Marquardt polish on the
//! residual vector with a finite-difference Jacobian.

/// Outcome of a minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead settings.
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Converged when every vertex lies within this distance of the best one
    /// in every coordinate.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-8,
            max_iter: 5000,
        }
    }
}

/// Minimizes `f` starting from `x0` with an axis-aligned initial simplex of
/// edge lengths `steps`.
pub fn nelder_mead<F>(f: F, x0: &[f64], steps: &[f64], opts: SimplexOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let dim = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let spread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(best).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread < opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
            .collect();
        let toward = |coef: f64, worst: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };
        let worst = simplex[dim].0.clone();
        let f_worst = simplex[dim].1;
        let f_best = simplex[0].1;
        let f_second = simplex[dim - 1].1;

        let xr = toward(REFLECT, &worst);
        let fr = eval(&xr);
        if fr < f_best {
            let xe = toward(EXPAND, &worst);
            let fe = eval(&xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < f_worst {
            let xc = toward(CONTRACT, &worst);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = toward(-CONTRACT, &worst);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < fr.min(f_worst) {
            simplex[dim] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            for (x, b) in vertex.0.iter_mut().zip(&best) {
                *x = b + SHRINK * (*x - b);
            }
            vertex.1 = eval(&vertex.0);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        iterations,
        converged,
    }
}

/// Levenberg–Marquardt on `Σ r_i(x)²` with a central-difference Jacobian.
///
/// Intended as a polish from a point already near the minimum; it never
/// accepts a step that raises the objective.
pub fn levenberg_marquardt<F>(residuals: F, x0: &[f64], max_iter: usize) -> Minimum
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let dim = x0.len();
    let sum_sq = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
    let mut x = x0.to_vec();
    let mut r = residuals(&x);
    let mut value = sum_sq(&r);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let jac: Vec<Vec<f64>> = (0..dim)
            .map(|j| {
                let h = 1e-6 * x[j].abs().max(1e-3);
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let rp = residuals(&xp);
                let rm = residuals(&xm);
                rp.iter()
                    .zip(&rm)
                    .map(|(p, m)| (p - m) / (2.0 * h))
                    .collect()
            })
            .collect();
        let mut jtj = vec![vec![0.0; dim]; dim];
        let mut jtr = vec![0.0; dim];
        for a in 0..dim {
            for b in 0..dim {
                jtj[a][b] = jac[a].iter().zip(&jac[b]).map(|(p, q)| p * q).sum();
            }
            jtr[a] = -jac[a].iter().zip(&r).map(|(p, q)| p * q).sum::<f64>();
        }

        let mut improved = false;
        for _ in 0..30 {
            let mut damped = jtj.clone();
            for (k, row) in damped.iter_mut().enumerate() {
                row[k] += lambda * jtj[k][k].max(f64::MIN_POSITIVE);
            }
            let Some(step) = solve_linear(damped, jtr.clone()) else {
                lambda *= 10.0;
                continue;
            };
            let candidate: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
            let r_new = residuals(&candidate);
            let v_new = sum_sq(&r_new);
            if v_new.is_finite() && v_new <= value {
                let small = step
                    .iter()
                    .zip(&x)
                    .all(|(s, xi)| s.abs() <= 1e-12 * xi.abs().max(1.0));
                x = candidate;
                r = r_new;
                value = v_new;
                lambda = (lambda / 10.0).max(1e-12);
                improved = true;
                if small {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // No descent left at machine precision.
            converged = true;
        }
        if converged {
            break;
        }
    }
    Minimum {
        x,
        value,
        iterations,
        converged,
    }
}

/// Solves `a·x = b` by Gaussian elimination with partial pivoting.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 || !a[pivot][col].is_finite() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for (offset, row) in lower.iter_mut().enumerate() {
            let factor = row[col] / pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * p;
            }
            b[col + 1 + offset] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}
