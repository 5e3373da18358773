//! Pointwise curvature of a metric jet: connection coefficients, the full
//! curvature tensor, its contractions, and a metric-orthonormal frame.
//!
//! Sign conventions are fixed so that the round sphere has positive scalar
//! and sectional curvature: `R^r_{smn} = d_m G^r_{ns} - d_n G^r_{ms} + ...`
//! and `Ric_{sn} = R^m_{smn}`.

use crate::error::Result;
use crate::jet::MetricJet;
use crate::linalg::Mat4;
use crate::scalar::Real;

pub type Riemann<T> = [[[[T; 4]; 4]; 4]; 4];

#[derive(Clone, Debug)]
pub struct CurvaturePoint<T> {
    pub x: [T; 4],
    /// `G^k_{ij}`, symmetric in the lower pair.
    pub christoffel: [Mat4<T>; 4],
    /// Fully lowered tensor `R_{rsmn}`.
    pub riemann: Riemann<T>,
    pub ricci: Mat4<T>,
    pub scalar: T,
    /// `Ric - (R/4) g`.
    pub trace_free_ricci: Mat4<T>,
    /// Squared norm of the trace-free Ricci tensor with indices raised.
    pub trace_free_ricci_norm2: T,
    /// Squared norm `R_{rsmn} R^{rsmn}` of the full tensor.
    pub riemann_norm2: T,
    /// Rows are metric-orthonormal vectors, positively oriented with respect
    /// to the chart coordinate order.
    pub frame: Mat4<T>,
    /// Curvature components in the orthonormal frame,
    /// `frame_riemann[a][b][c][d] = Rm(f_a, f_b, f_c, f_d)`.
    pub frame_riemann: Riemann<T>,
    /// Largest violation of the first Bianchi identity; a pure round-off
    /// diagnostic for analytic charts.
    pub bianchi_residual: T,
    pub sqrt_det: T,
}

fn christoffel<T: Real>(jet: &MetricJet<T>) -> [Mat4<T>; 4] {
    let half = T::of(0.5);
    let mut gamma = [[[T::zero(); 4]; 4]; 4];
    for k in 0..4 {
        for i in 0..4 {
            for j in i..4 {
                let mut acc = T::zero();
                for l in 0..4 {
                    acc += jet.ginv[k][l] * (jet.dg[i][j][l] + jet.dg[j][i][l] - jet.dg[l][i][j]);
                }
                let v = half * acc;
                gamma[k][i][j] = v;
                gamma[k][j][i] = v;
            }
        }
    }
    gamma
}

/// `d_m G^k_{ij}` from the second-order jet, using
/// `d_m g^{kl} = -(g^-1 dg_m g^-1)^{kl}`.
fn christoffel_derivative<T: Real>(jet: &MetricJet<T>) -> [[Mat4<T>; 4]; 4] {
    let half = T::of(0.5);
    let zero = T::zero();

    let mut dginv = [[[zero; 4]; 4]; 4];
    for m in 0..4 {
        for k in 0..4 {
            for l in 0..4 {
                let mut acc = zero;
                for a in 0..4 {
                    for b in 0..4 {
                        acc += jet.ginv[k][a] * jet.dg[m][a][b] * jet.ginv[b][l];
                    }
                }
                dginv[m][k][l] = -acc;
            }
        }
    }

    let mut dgamma = [[[[zero; 4]; 4]; 4]; 4];
    for m in 0..4 {
        for k in 0..4 {
            for i in 0..4 {
                for j in i..4 {
                    let mut acc = zero;
                    for l in 0..4 {
                        let sym = jet.dg[i][j][l] + jet.dg[j][i][l] - jet.dg[l][i][j];
                        let dsym =
                            jet.ddg[m][i][j][l] + jet.ddg[m][j][i][l] - jet.ddg[m][l][i][j];
                        acc += dginv[m][k][l] * sym + jet.ginv[k][l] * dsym;
                    }
                    let v = half * acc;
                    dgamma[m][k][i][j] = v;
                    dgamma[m][k][j][i] = v;
                }
            }
        }
    }
    dgamma
}

/// Gram-Schmidt rows against the metric inner product. Starting from the
/// coordinate basis gives a lower-triangular coefficient matrix with positive
/// diagonal, hence a frame positively oriented in chart coordinates.
fn orthonormal_frame<T: Real>(g: &Mat4<T>) -> Mat4<T> {
    let mut f = [[T::zero(); 4]; 4];
    for a in 0..4 {
        let mut v = [T::zero(); 4];
        v[a] = T::one();
        for b in 0..a {
            // <e_a, f_b>_g
            let mut dot = T::zero();
            for i in 0..4 {
                for j in 0..4 {
                    dot += v[i] * g[i][j] * f[b][j];
                }
            }
            for i in 0..4 {
                v[i] -= dot * f[b][i];
            }
        }
        let mut norm2 = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                norm2 += v[i] * g[i][j] * v[j];
            }
        }
        let inv = norm2.sqrt().recip();
        for i in 0..4 {
            f[a][i] = v[i] * inv;
        }
    }
    f
}

pub fn curvature_at<T: Real>(jet: &MetricJet<T>) -> Result<CurvaturePoint<T>> {
    let zero = T::zero();
    let gamma = christoffel(jet);
    let dgamma = christoffel_derivative(jet);

    // Mixed tensor R^r_{smn}.
    let mut rm_ud = [[[[zero; 4]; 4]; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut acc = dgamma[m][r][n][s] - dgamma[n][r][m][s];
                    for l in 0..4 {
                        acc += gamma[r][m][l] * gamma[l][n][s] - gamma[r][n][l] * gamma[l][m][s];
                    }
                    rm_ud[r][s][m][n] = acc;
                }
            }
       }
    }

    // Lowered tensor and contractions.
    let mut riemann = [[[[zero; 4]; 4]; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut acc = zero;
                    for a in 0..4 {
                        acc += jet.g[r][a] * rm_ud[a][s][m][n];
                    }
                    riemann[r][s][m][n] = acc;
                }
            }
        }
    }

    let mut ricci = [[zero; 4]; 4];
    for s in 0..4 {
        for n in 0..4 {
            let mut acc = zero;
            for m in 0..4 {
                acc += rm_ud[m][s][m][n];
            }
            ricci[s][n] = acc;
        }
    }

    let mut scalar = zero;
    for s in 0..4 {
        for n in 0..4 {
            scalar += jet.ginv[s][n] * ricci[s][n];
        }
    }

    let quarter_r = scalar * T::of(0.25);
    let mut tf = [[zero; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            tf[i][j] = ricci[i][j] - quarter_r * jet.g[i][j];
        }
    }

    // Raised-index norms.
    let mut tf_norm2 = zero;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    tf_norm2 += tf[i][j] * jet.ginv[i][k] * jet.ginv[j][l] * tf[k][l];
                }
            }
        }
    }

    let frame = orthonormal_frame(&jet.g);
    // Push the tensor into the frame one index at a time.
    let mut t1 = [[[[zero; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for j in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut acc = zero;
                    for i in 0..4 {
                        acc += frame[a][i] * riemann[i][j][m][n];
                    }
                    t1[a][j][m][n] = acc;
                }
            }
        }
    }
    let mut t2 = [[[[zero; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut acc = zero;
                    for j in 0..4 {
                        acc += frame[b][j] * t1[a][j][m][n];
                    }
                    t2[a][b][m][n] = acc;
                }
            }
        }
    }
    let mut t3 = [[[[zero; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for n in 0..4 {
                    let mut acc = zero;
                    for m in 0..4 {
                        acc += frame[c][m] * t2[a][b][m][n];
                    }
                    t3[a][b][c][n] = acc;
                }
            }
        }
    }
    let mut frame_riemann = [[[[zero; 4]; 4]; 4]; 4];
    let mut rm_norm2 = zero;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut acc = zero;
                    for n in 0..4 {
                        acc += frame[d][n] * t3[a][b][c][n];
                    }
                    frame_riemann[a][b][c][d] = acc;
                    rm_norm2 += acc * acc;
                }
            }
        }
    }

    let mut bianchi = zero;
    for r in 0..4 {
        for s in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let cyc = riemann[r][s][m][n] + riemann[r][m][n][s] + riemann[r][n][s][m];
                    bianchi = bianchi.max(cyc.abs());
                }
            }
        }
    }

    Ok(CurvaturePoint {
        x: jet.x,
        christoffel: gamma,
        riemann,
        ricci,
        scalar,
        trace_free_ricci: tf,
        trace_free_ricci_norm2: tf_norm2,
        riemann_norm2: rm_norm2,
        frame,
        frame_riemann,
        bianchi_residual: bianchi,
        sqrt_det: jet.sqrt_det,
    })
}
