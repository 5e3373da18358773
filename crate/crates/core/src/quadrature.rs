//! Product quadrature over a chart box.
//!
//! Non-periodic axes use composite Gauss-Legendre panels; periodic axes use
//! the uniform (trapezoid) rule, which is spectrally accurate there. Sums are
//! accumulated with a fixed pairwise tree in index order, so results are
//! bit-identical across runs and thread counts.

use crate::chart::{AxisRule, ChartDomain};
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Order of one Gauss-Legendre panel in composite mode.
const PANEL_ORDER: usize = 12;
/// Requested counts up to this bound become a single panel of exactly that
/// order instead of a composite rule.
const SINGLE_PANEL_MAX: usize = 16;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && n <= 64, "panel order out of range");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by upward recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// One axis of a product rule.
#[derive(Clone, Debug)]
pub struct AxisQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn axis_rule(rule: AxisRule, lo: f64, hi: f64, m: usize) -> AxisQuadrature {
    let width = hi - lo;
    match rule {
        AxisRule::PeriodicUniform => {
            let h = width / m as f64;
            AxisQuadrature {
                nodes: (0..m).map(|i| lo + (i as f64 + 0.5) * h).collect(),
                weights: vec![h; m],
            }
        }
        AxisRule::GaussLegendre => {
            let (panels, order) = if m <= SINGLE_PANEL_MAX {
                (1, m)
            } else {
                ((m + PANEL_ORDER - 1) / PANEL_ORDER, PANEL_ORDER)
            };
            let (xs, ws) = gauss_legendre(order);
            let pw = width / panels as f64;
            let mut nodes = Vec::with_capacity(panels * order);
            let mut weights = Vec::with_capacity(panels * order);
            for p in 0..panels {
                let a = lo + p as f64 * pw;
                let mid = a + 0.5 * pw;
                for (x, w) in xs.iter().zip(&ws) {
                    nodes.push(mid + 0.5 * pw * x);
                    weights.push(0.5 * pw * w);
                }
            }
            AxisQuadrature { nodes, weights }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Quadrature {
    pub axes: [AxisQuadrature; 4],
}

/// Build the product rule for a chart at per-axis resolution `m` (at least
/// `m` nodes on each axis; composite Gauss-Legendre rounds up to whole
/// panels).
pub fn build_quadrature(chart: &ChartDomain, m: usize) -> Result<Quadrature> {
    if m < 2 {
        return Err(Error::precondition("resolution must be at least 2"));
    }
    let axes = std::array::from_fn(|k| {
        axis_rule(chart.axes[k], chart.bounds[k][0], chart.bounds[k][1], m)
    });
    Ok(Quadrature { axes })
}

impl Quadrature {
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.nodes.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Integrate several scalar densities in one sweep. The integrand
    /// receives the coordinate point and its product weight; it multiplies in
    /// the volume density itself. Slabs along axis 0 run in parallel; the
    /// final combination is a fixed pairwise tree, so the result does not
    /// depend on the thread schedule.
    pub fn integrate_many<const K: usize, F>(&self, f: F) -> Result<[f64; K]>
    where
        F: Fn(&[f64; 4], f64) -> Result<[f64; K]> + Sync,
    {
        let [a0, a1, a2, a3] = &self.axes;
        let slabs: Vec<Result<[f64; K]>> = (0..a0.nodes.len())
            .into_par_iter()
            .map(|i0| {
                let x0 = a0.nodes[i0];
                let w0 = a0.weights[i0];
                let mut terms: Vec<[f64; K]> =
                    Vec::with_capacity(a1.nodes.len() * a2.nodes.len() * a3.nodes.len());
                for (i1, &x1) in a1.nodes.iter().enumerate() {
                    let w01 = w0 * a1.weights[i1];
                    for (i2, &x2) in a2.nodes.iter().enumerate() {
                        let w012 = w01 * a2.weights[i2];
                        for (i3, &x3) in a3.nodes.iter().enumerate() {
                            let w = w012 * a3.weights[i3];
                            terms.push(f(&[x0, x1, x2, x3], w)?);
                        }
                    }
                }
                Ok(pairwise_sum_arrays(&terms))
            })
            .collect();
        let mut slab_values = Vec::with_capacity(slabs.len());
        for s in slabs {
            slab_values.push(s?);
        }
        Ok(pairwise_sum_arrays(&slab_values))
    }

    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&[f64; 4], f64) -> Result<f64> + Sync,
    {
        let [v] = self.integrate_many(|x, w| f(x, w).map(|v| [v]))?;
        Ok(v)
    }
}

/// Pairwise tree sum of fixed-size arrays, componentwise.
pub fn pairwise_sum_arrays<const K: usize>(terms: &[[f64; K]]) -> [f64; K] {
    match terms.len() {
        0 => [0.0; K],
        1 => terms[0],
        n => {
            if n <= 8 {
                let mut acc = [0.0; K];
                for t in terms {
                    for k in 0..K {
                        acc[k] += t[k];
                    }
                }
                acc
            } else {
                let mid = n / 2;
                let left = pairwise_sum_arrays(&terms[..mid]);
                let right = pairwise_sum_arrays(&terms[mid..]);
                std::array::from_fn(|k| left[k] + right[k])
            }
        }
    }
}
