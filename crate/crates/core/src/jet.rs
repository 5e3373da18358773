//! Second-order jets of the metric, extracted with dual numbers.
//!
//! A single chart evaluation over [`Dual2`](crate::scalar::Dual2) seeded in
//! directions `i` and `j` yields `g`, both first partials, and the mixed
//! second partial, all exact to machine precision. Ten seeded evaluations
//! (one per unordered index pair) fill the full jet.

use crate::chart::ChartDomain;
use crate::error::{Error, Result};
use crate::linalg::{det4, inv4, Mat4};
use crate::scalar::{Dual2, Real};

#[derive(Clone, Debug)]
pub struct MetricJet<T> {
    pub x: [T; 4],
    pub g: Mat4<T>,
    /// `dg[k][i][j] = d g_ij / d x^k`
    pub dg: [Mat4<T>; 4],
    /// `ddg[k][l][i][j] = d^2 g_ij / (d x^k d x^l)`, symmetric in `(k, l)`.
    pub ddg: [[Mat4<T>; 4]; 4],
    pub ginv: Mat4<T>,
    pub det: T,
    pub sqrt_det: T,
}

/// Maximum off-diagonal symmetry defect of an evaluated matrix, relative to
/// its largest entry.
fn symmetry_defect<T: Real>(g: &Mat4<T>) -> T {
    let mut scale = T::one();
    let mut defect = T::zero();
    for row in g {
        for v in row {
            scale = scale.max(v.abs());
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            defect = defect.max((g[i][j] - g[j][i]).abs());
        }
    }
    defect / scale
}

pub fn evaluate_jet<T: Real>(chart: &ChartDomain, x: [T; 4]) -> Result<MetricJet<T>> {
    let zero = T::zero();
    let mut g = [[zero; 4]; 4];
    let mut dg = [[[zero; 4]; 4]; 4];
    let mut ddg = [[[[zero; 4]; 4]; 4]; 4];

    for p in 0..4 {
        for q in p..4 {
            let seeded: [Dual2<T>; 4] = std::array::from_fn(|m| {
                let b = if m == p { T::one() } else { zero };
                let c = if m == q { T::one() } else { zero };
                Dual2::seeded(x[m], b, c)
            });
            let gd = chart.metric.eval(&seeded);
            for i in 0..4 {
                for j in 0..4 {
                    if p == 0 && q == 0 {
                        g[i][j] = gd[i][j].a;
                    }
                    if q == p {
                        dg[p][i][j] = gd[i][j].b;
                    }
                    ddg[p][q][i][j] = gd[i][j].d;
                    ddg[q][p][i][j] = gd[i][j].d;
                }
            }
        }
    }

    let point = std::array::from_fn(|k| x[k].to_f64().unwrap_or(f64::NAN));
    let defect = symmetry_defect(&g);
    if defect > T::of(1e-12) {
        return Err(Error::Degenerate {
            point,
            detail: format!("metric symmetry defect {defect:?} exceeds tolerance"),
        });
    }
    // Symmetrize to kill round-off skew before inversion.
    for i in 0..4 {
        for j in i + 1..4 {
            let avg = (g[i][j] + g[j][i]) * T::of(0.5);
            g[i][j] = avg;
            g[j][i] = avg;
        }
    }

    let det = det4(&g);
    if !(det > zero) {
        return Err(Error::Degenerate {
            point,
            detail: format!("metric determinant {det:?} not positive"),
        });
    }
    let ginv = inv4(&g).ok_or(Error::Degenerate {
        point,
        detail: "metric not invertible".into(),
    })?;

    Ok(MetricJet { x, g, dg, ddg, ginv, det, sqrt_det: det.sqrt() })
}
