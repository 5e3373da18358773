//! The modified conformal functional and its minimization.
//!
//! For a conformal factor `u > 0` on a closed four-manifold, the functional
//! is `F_s(u) = E(u) / (int |u|^s dv)^(2/s)` with
//! `E(u) = int (sigma u^2 + 6 |grad u|^2) dv`, minimized at subcritical
//! exponents `s < 4` and continued toward the critical exponent. The
//! Euler-Lagrange equation is `-6 lap u + sigma u = mu u^(s-1)`.

use crate::error::{Error, Result};
use crate::grid::Grid;
use serde::Serialize;

/// Transform of the modified scalar curvature under `g -> u^2 g`:
/// `sigma_new = u^-3 (-6 lap u + sigma u)` at each node.
pub fn sigma_transform(grid: &Grid, sigma: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    if u.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::precondition("conformal factor must be positive"));
    }
    let mut lap = vec![0.0; u.len()];
    grid.apply_laplacian(u, &mut lap);
    Ok((0..u.len())
        .map(|i| (-6.0 * lap[i] + sigma[i] * u[i]) / u[i].powi(3))
        .collect())
}

/// Energy, constraint norm, and quotient of one configuration.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FunctionalValue {
    pub energy: f64,
    /// `(int |u|^s dv)^(2/s)`.
    pub denom: f64,
    pub quotient: f64,
}

pub fn functional_fs(grid: &Grid, sigma: &[f64], u: &[f64], s: f64) -> Result<FunctionalValue> {
    let n = grid.len();
    if u.len() != n || sigma.len() != n {
        return Err(Error::precondition("field length does not match grid"));
    }
    if !(s > 2.0 && s <= 4.0) {
        return Err(Error::precondition(format!("exponent s = {s} outside (2, 4]")));
    }
    let w = grid.weights();
    let mut lap = vec![0.0; n];
    grid.apply_laplacian(u, &mut lap);
    // int 6 |grad u|^2 = -6 int u lap u for the self-adjoint discrete operator.
    let mut energy = 0.0;
    let mut mass = 0.0;
    for i in 0..n {
        energy += (sigma[i] * u[i] * u[i] - 6.0 * u[i] * lap[i]) * w[i];
        mass += u[i].abs().powf(s) * w[i];
    }
    if !(mass > 0.0) {
        return Err(Error::precondition("constraint norm vanished"));
    }
    let denom = mass.powf(2.0 / s);
    Ok(FunctionalValue { energy, denom, quotient: energy / denom })
}

/// Gradient of `F_s` in the weighted inner product, evaluated at `u` with the
/// current quotient value; zero exactly at Euler-Lagrange solutions.
fn quotient_gradient(
    grid: &Grid,
    sigma: &[f64],
    u: &[f64],
    s: f64,
    val: &FunctionalValue,
    out: &mut [f64],
) {
    let n = grid.len();
    let mut lap = vec![0.0; n];
    grid.apply_laplacian(u, &mut lap);
    // d/du [E/D] = (2/D) [ sigma u - 6 lap u - (E/D) |u|^(s-2) u * D / mass ].
    // With D = mass^(2/s), D/mass = mass^(2/s - 1).
    let mass = val.denom.powf(s / 2.0);
    let scale = mass.powf(2.0 / s - 1.0);
    for i in 0..n {
        let el = sigma[i] * u[i] - 6.0 * lap[i];
        let constraint = val.quotient * scale * u[i].abs().powf(s - 2.0) * u[i];
        out[i] = 2.0 * (el - constraint) / val.denom;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubcriticalSolve {
    pub s: f64,
    pub quotient: f64,
    /// Lagrange multiplier of the normalized minimizer: for a converged run
    /// this equals the quotient when the minimizer is scaled to unit
    /// constraint norm.
    pub multiplier: f64,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    pub minimizer: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_iterations: 20_000, gradient_tolerance: 1e-9 }
    }
}

fn weighted_norm(w: &[f64], v: &[f64]) -> f64 {
    v.iter().zip(w).map(|(x, wi)| x * x * wi).sum::<f64>().sqrt()
}

/// Normalize `u` to unit `s`-norm, in place.
fn normalize(w: &[f64], u: &mut [f64], s: f64) {
    let mass: f64 = u.iter().zip(w).map(|(x, wi)| x.abs().powf(s) * wi).sum();
    let factor = mass.powf(-1.0 / s);
    for x in u.iter_mut() {
        *x *= factor;
    }
}

/// Projected gradient descent with Barzilai-Borwein steps and a positivity
/// backtracking line search. The iterate stays positive and normalized; the
/// returned flag reports whether the gradient tolerance was met.
pub fn minimize_subcritical(
    grid: &Grid,
    sigma: &[f64],
    initial: &[f64],
    s: f64,
    opts: SolveOptions,
) -> Result<SubcriticalSolve> {
    let n = grid.len();
    if initial.len() != n {
        return Err(Error::precondition("initial field length does not match grid"));
    }
    if initial.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::precondition("initial field must be positive"));
    }
    let w = grid.weights();

    let mut u = initial.to_vec();
    normalize(w, &mut u, s);
    let mut val = functional_fs(grid, sigma, &u, s)?;
    let mut grad = vec![0.0; n];
    quotient_gradient(grid, sigma, &u, s, &val, &mut grad);

    let mut prev_u: Option<Vec<f64>> = None;
    let mut prev_grad: Option<Vec<f64>> = None;
    let mut step = 1e-2;
    let mut iterations = 0;
    let mut gnorm = weighted_norm(w, &grad);
    let tol = opts.gradient_tolerance * (1.0 + val.quotient.abs());
    // Nonmonotone reference values: Barzilai-Borwein steps are allowed to
    // raise the quotient as long as they stay under the recent maximum.
    let mut recent = std::collections::VecDeque::from([val.quotient]);

    while iterations < opts.max_iterations && gnorm > tol {
        // Barzilai-Borwein step from the previous secant pair.
        if let (Some(pu), Some(pg)) = (&prev_u, &prev_grad) {
            let mut sy = 0.0;
            let mut yy = 0.0;
            for i in 0..n {
                let si = u[i] - pu[i];
                let yi = grad[i] - pg[i];
                sy += si * yi * w[i];
                yy += yi * yi * w[i];
            }
            if sy > 0.0 && yy > 0.0 {
                step = (sy / yy).clamp(1e-8, 1e3);
            }
        }

        // Cap the trial step so no node loses more than a factor of ten per
        // iteration: an uncapped overshoot can flatten tail nodes to
        // denormals, after which no positive candidate exists and the
        // search would wedge.
        let mut t_cap = f64::INFINITY;
        for i in 0..n {
            if grad[i] > 0.0 {
                t_cap = t_cap.min(0.9 * u[i] / grad[i]);
            }
        }

        // Backtrack to keep the iterate positive and the value below the
        // recent reference.
        let reference = recent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut t = step.min(t_cap);
        let mut accepted = false;
        for _ in 0..60 {
            let mut cand: Vec<f64> = (0..n).map(|i| u[i] - t * grad[i]).collect();
            if cand.iter().all(|&v| v > 0.0) {
                normalize(w, &mut cand, s);
                let cval = functional_fs(grid, sigma, &cand, s)?;
                if cval.quotient <= reference + 1e-14 * (1.0 + reference.abs()) {
                    prev_u = Some(std::mem::replace(&mut u, cand));
                    val = cval;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        recent.push_back(val.quotient);
        if recent.len() > 10 {
            recent.pop_front();
        }

        let mut g_new = vec![0.0; n];
        quotient_gradient(grid, sigma, &u, s, &val, &mut g_new);
        prev_grad = Some(std::mem::replace(&mut grad, g_new));
        gnorm = weighted_norm(w, &grad);
        iterations += 1;
    }

    // Multiplier from the Euler-Lagrange equation at the normalized iterate:
    // weighted Rayleigh fit of (-6 lap u + sigma u) against u^(s-1).
    let mut lap = vec![0.0; n];
    grid.apply_laplacian(&u, &mut lap);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let el = -6.0 * lap[i] + sigma[i] * u[i];
        let p = u[i].powf(s - 1.0);
        num += el * p * w[i];
        den += p * p * w[i];
    }
    let multiplier = num / den;

    Ok(SubcriticalSolve {
        s,
        quotient: val.quotient,
        multiplier,
        iterations,
        converged: gnorm <= tol,
        gradient_norm: gnorm,
        minimizer: u,
    })
}

/// Default exponent schedule approaching the critical exponent 4.
pub fn continuation_schedule() -> Vec<f64> {
    vec![3.0, 3.5, 3.8, 3.9, 3.95, 3.99]
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuationOutcome {
    pub stages: Vec<SubcriticalSolve>,
    /// Quotient at the last completed stage.
    pub final_quotient: f64,
    /// Set when the iterates concentrate: sup norm grows by 1000x over the
    /// initial while the region above half the maximum shrinks by 10x.
    pub blow_up: bool,
}

/// Run the subcritical solves along a schedule, feeding each minimizer to the
/// next stage, and watch for concentration.
pub fn continuation_to_critical(
    grid: &Grid,
    sigma: &[f64],
    initial: &[f64],
    schedule: &[f64],
    opts: SolveOptions,
) -> Result<ContinuationOutcome> {
    if schedule.is_empty() {
        return Err(Error::precondition("empty continuation schedule"));
    }
    let w = grid.weights();
    let sup0 = initial.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let spread0 = half_max_spread(w, initial);

    let mut stages: Vec<SubcriticalSolve> = Vec::with_capacity(schedule.len());
    let mut current = initial.to_vec();
    let mut blow_up = false;
    for &s in schedule {
        let solve = minimize_subcritical(grid, sigma, &current, s, opts)?;
        current = solve.minimizer.clone();
        let sup = current.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let spread = half_max_spread(w, &current);
        stages.push(solve);
        if sup > 1e3 * sup0 && spread < 0.1 * spread0 {
            blow_up = true;
            break;
        }
    }
    let final_quotient = stages.last().map(|st| st.quotient).unwrap_or(f64::NAN);
    Ok(ContinuationOutcome { stages, final_quotient, blow_up })
}

/// Measure of the region where `u` exceeds half its maximum.
fn half_max_spread(w: &[f64], u: &[f64]) -> f64 {
    let sup = u.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    u.iter()
        .zip(w)
        .filter(|(&v, _)| v.abs() >= 0.5 * sup)
        .map(|(_, &wi)| wi)
        .sum()
}
