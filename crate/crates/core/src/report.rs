//! Integrated invariants of a presented metric: volume, total scalar
//! curvature, the Euler characteristic from curvature, Weyl energies, and the
//! spectral comparisons built from them.

use crate::chart::ManifoldSpec;
use crate::curvature::curvature_at;
use crate::decomp::decompose;
use crate::error::{Error, Result};
use crate::jet::evaluate_jet;
use crate::quadrature::build_quadrature;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct FunctionalReport {
    pub manifold: String,
    pub orientation: i8,
    /// Requested per-axis resolution.
    pub resolution: usize,
    /// Actual number of product nodes after panel rounding.
    pub node_count: usize,
    pub volume: f64,
    /// Integral of scalar curvature.
    pub total_scalar: f64,
    /// `total_scalar / sqrt(volume)`: the normalized quotient of the
    /// presented metric (an upper bound for its conformal class).
    pub yamabe_quotient: f64,
    /// Euler characteristic from the curvature integral.
    pub chi_estimate: f64,
    /// Integral of the squared self-dual Weyl block.
    pub weyl_plus_l2: f64,
    pub weyl_minus_l2: f64,
    /// Integral of `max(lambda_max_plus, lambda_max_minus)^2`.
    pub lambda_max_sq_integral: f64,
    /// Integral of `lambda_max_plus^2 + lambda_max_minus^2`.
    pub lambda_sum_sq_integral: f64,
    /// Integral of the modified scalar curvature `R - 6 lambda_max`.
    pub sigma_integral: f64,
    /// Smallest value of the modified scalar curvature over interior nodes
    /// (nodes within 3% of an open-axis endpoint are skipped because the
    /// chart degenerates there).
    pub sigma_min: f64,
    /// Same Euler estimate at half resolution, as a convergence indicator.
    pub chi_half_resolution: Option<f64>,
}

fn sweep(spec: &ManifoldSpec, m: usize) -> Result<(usize, [f64; 8], f64)> {
    let chart = spec.chart(0)?;
    let quad = build_quadrature(chart, m)?;
    let node_count = quad.len();

    // Nodes too close to an endpoint of an open (Gauss-Legendre) axis sit
    // next to coordinate degeneracies where curvature round-off blows up;
    // sup-type statistics skip them. Integrals keep every node because the
    // product weights vanish fast at those corners.
    let margin_ok: [Vec<bool>; 4] = std::array::from_fn(|k| {
        let [lo, hi] = chart.bounds[k];
        let pad = 0.03 * (hi - lo);
        quad.axes[k]
            .nodes
            .iter()
            .map(|&x| match chart.axes[k] {
                crate::chart::AxisRule::GaussLegendre => x >= lo + pad && x <= hi - pad,
                crate::chart::AxisRule::PeriodicUniform => true,
            })
            .collect()
    });

    // One fused pass per slab along axis 0: pairwise-summed integrals plus
    // the pointwise minimum (min is exactly associative, so the parallel
    // reduction stays deterministic).
    let [a0, a1, a2, a3] = &quad.axes;
    let slabs: Vec<Result<([f64; 8], f64)>> = (0..a0.nodes.len())
        .into_par_iter()
        .map(|i0| {
            let w0 = a0.weights[i0];
            let mut terms: Vec<[f64; 8]> =
                Vec::with_capacity(a1.nodes.len() * a2.nodes.len() * a3.nodes.len());
            let mut local_min = f64::INFINITY;
            for (i1, &x1) in a1.nodes.iter().enumerate() {
                let w01 = w0 * a1.weights[i1];
                for (i2, &x2) in a2.nodes.iter().enumerate() {
                    let w012 = w01 * a2.weights[i2];
                    for (i3, &x3) in a3.nodes.iter().enumerate() {
                        let w = w012 * a3.weights[i3];
                        let x = [a0.nodes[i0], x1, x2, x3];
                        let jet = evaluate_jet(chart, x)?;
                        let point = curvature_at(&jet)?;
                        let blocks = decompose(&point, spec.orientation);
                        let dv = w * jet.sqrt_det;
                        let lmax = blocks.lambda_max_plus.max(blocks.lambda_max_minus);
                        if margin_ok[0][i0] && margin_ok[1][i1] && margin_ok[2][i2]
                            && margin_ok[3][i3]
                        {
                            local_min = local_min.min(blocks.sigma);
                        }
                        terms.push([
                            dv,
                            point.scalar * dv,
                            blocks.euler_density(point.trace_free_ricci_norm2) * dv,
                            blocks.weyl_plus_norm2() * dv,
                            blocks.weyl_minus_norm2() * dv,
                            lmax * lmax * dv,
                            (blocks.lambda_max_plus * blocks.lambda_max_plus
                                + blocks.lambda_max_minus * blocks.lambda_max_minus)
                                * dv,
                            blocks.sigma * dv,
                        ]);
                    }
                }
            }
            Ok((crate::quadrature::pairwise_sum_arrays(&terms), local_min))
        })
        .collect();

    let mut slab_sums = Vec::with_capacity(slabs.len());
    let mut sigma_min = f64::INFINITY;
    for s in slabs {
        let (sum, min) = s?;
        slab_sums.push(sum);
        sigma_min = sigma_min.min(min);
    }
    let sums = crate::quadrature::pairwise_sum_arrays(&slab_sums);
    Ok((node_count, sums, sigma_min))
}

pub fn functional_report(spec: &ManifoldSpec, m: usize) -> Result<FunctionalReport> {
    let (node_count, s, sigma_min) = sweep(spec, m)?;
    let volume = s[0];
    if !(volume > 0.0) {
        return Err(Error::Internal(format!("non-positive volume {volume}")));
    }
    let chi_scale = 1.0 / (8.0 * std::f64::consts::PI.powi(2));
    let chi_half_resolution = if m / 2 >= 2 {
        let (_, sh, _) = sweep(spec, m / 2)?;
        Some(sh[2] * chi_scale)
    } else {
        None
    };
    Ok(FunctionalReport {
        manifold: spec.name.clone(),
        orientation: spec.orientation,
        resolution: m,
        node_count,
        volume,
        total_scalar: s[1],
        yamabe_quotient: s[1] / volume.sqrt(),
        chi_estimate: s[2] * chi_scale,
        weyl_plus_l2: s[3],
        weyl_minus_l2: s[4],
        lambda_max_sq_integral: s[5],
        lambda_sum_sq_integral: s[6],
        sigma_integral: s[7],
        sigma_min,
        chi_half_resolution,
    })
}

/// One side-by-side comparison of a curvature integral against a multiple of
/// the squared quotient.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralComparison {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; nonnegative when the bound holds.
    pub margin: f64,
    /// False when the quotient is nonpositive, in which case the comparison
    /// carries no information.
    pub applicable: bool,
}

fn comparison(lhs: f64, quotient: f64, divisor: f64) -> SpectralComparison {
    let applicable = quotient > 0.0;
    let rhs = quotient * quotient / divisor;
    SpectralComparison { lhs, rhs, margin: rhs - lhs, applicable }
}

/// Total Weyl energy against `Q^2 / 24`.
pub fn weyl_energy_comparison(r: &FunctionalReport) -> SpectralComparison {
    comparison(r.weyl_plus_l2 + r.weyl_minus_l2, r.yamabe_quotient, 24.0)
}

/// Top-eigenvalue energy against `Q^2 / 36`.
pub fn top_eigenvalue_comparison(r: &FunctionalReport) -> SpectralComparison {
    comparison(r.lambda_max_sq_integral, r.yamabe_quotient, 36.0)
}
