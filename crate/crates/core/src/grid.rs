//! Discretizations for the conformal functional.
//!
//! Three kinds cover the solver's needs: a full periodic grid on a flat
//! torus (spectral second derivatives per axis), a circle fiber over a round
//! three-sphere, and a rotationally symmetric profile `ds^2 + rho(s)^2
//! g_{S^3}`. The two 1-D reductions use a conservative three-point flux
//! scheme (self-adjoint against the cell weights and exact on constants by
//! construction). Unlike a dense spectral matrix, the local stencil keeps
//! the sign structure of a diffusion operator, so minimizers that decay over
//! many orders of magnitude stay strictly positive and their second
//! derivatives retain full relative accuracy; the solver depends on both.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Grid {
    Torus {
        dims: [usize; 4],
        periods: [f64; 4],
        /// Dense spectral second-derivative matrix per axis (`None` for
        /// collapsed axes of size 1).
        d2: [Option<Vec<f64>>; 4],
        weights: Vec<f64>,
    },
    Circle {
        n: usize,
        circle: f64,
        sphere_radius: f64,
        step: f64,
        weights: Vec<f64>,
        sigma: Vec<f64>,
        positions: Vec<f64>,
    },
    Profile {
        positions: Vec<f64>,
        /// `rho^3` at the `n + 1` cell faces.
        face_coeff: Vec<f64>,
        /// `rho^3` at cell centers.
        center_density: Vec<f64>,
        step: f64,
        weights: Vec<f64>,
        sigma: Vec<f64>,
    },
}

/// Spectral second-derivative matrix for `n` uniform nodes on a period-`len`
/// circle. Requires even `n`.
fn spectral_d2(n: usize, len: f64) -> Result<Vec<f64>> {
    if n % 2 != 0 {
        return Err(Error::precondition(format!(
            "periodic spectral axis needs an even node count, got {n}"
        )));
    }
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let scale = (2.0 * std::f64::consts::PI / len).powi(2);
    let mut d2 = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let k = i as isize - j as isize;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let s = (k as f64 * h / 2.0).sin();
            d2[i * n + j] = scale * (-sign / (2.0 * s * s));
        }
        // The analytic diagonal is minus the off-diagonal row sum; writing it
        // that way annihilates constants exactly instead of to round-off.
        let row: f64 = (0..n).filter(|&j| j != i).map(|j| d2[i * n + j]).sum();
        d2[i * n + i] = -row;
    }
    Ok(d2)
}

impl Grid {
    pub fn flat_torus(dims: [usize; 4], periods: [f64; 4]) -> Result<Grid> {
        let mut d2: [Option<Vec<f64>>; 4] = [None, None, None, None];
        for k in 0..4 {
            if dims[k] == 0 {
                return Err(Error::precondition("grid axis of size zero"));
            }
            if dims[k] > 1 {
                d2[k] = Some(spectral_d2(dims[k], periods[k])?);
            }
        }
        let n: usize = dims.iter().product();
        let cell: f64 = (0..4).map(|k| periods[k] / dims[k] as f64).product();
        Ok(Grid::Torus { dims, periods, d2, weights: vec![cell; n] })
    }

    pub fn circle_fiber(n: usize, circle: f64, sphere_radius: f64) -> Result<Grid> {
        if n < 3 {
            return Err(Error::precondition("circle grid needs at least 3 nodes"));
        }
        let h = circle / n as f64;
        let fiber_vol = 2.0 * std::f64::consts::PI.powi(2) * sphere_radius.powi(3);
        let sigma_val = 6.0 / (sphere_radius * sphere_radius);
        Ok(Grid::Circle {
            n,
            circle,
            sphere_radius,
            step: h,
            weights: vec![fiber_vol * h; n],
            sigma: vec![sigma_val; n],
            positions: (0..n).map(|j| j as f64 * h).collect(),
        })
    }

    /// Rotationally symmetric profile metric `ds^2 + rho(s)^2 g_{S^3}` on
    /// `[0, s_max]`, with modified scalar curvature supplied pointwise. Cell
    /// centers sit at `(i + 1/2) h`; a vanishing `rho` at either endpoint
    /// closes the manifold there (the boundary flux coefficient is zero).
    pub fn from_profile(
        n: usize,
        s_max: f64,
        rho: impl Fn(f64) -> f64,
        sigma: impl Fn(f64) -> f64,
    ) -> Result<Grid> {
        if n < 3 {
            return Err(Error::precondition("profile grid needs at least 3 cells"));
        }
        if !(s_max > 0.0) {
            return Err(Error::precondition("profile length must be positive"));
        }
        let h = s_max / n as f64;
        let positions: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
        let face_coeff: Vec<f64> = (0..=n).map(|i| rho(i as f64 * h).powi(3)).collect();
        let center_density: Vec<f64> = positions.iter().map(|&s| rho(s).powi(3)).collect();
        for (i, &d) in center_density.iter().enumerate() {
            if !(d > 0.0) {
                return Err(Error::Degenerate {
                    point: [positions[i], 0.0, 0.0, 0.0],
                    detail: "profile radius vanishes at a cell center".into(),
                });
            }
        }
        let fiber = 2.0 * std::f64::consts::PI.powi(2);
        let weights = center_density.iter().map(|&d| fiber * d * h).collect();
        let sigma_vals = positions.iter().map(|&s| sigma(s)).collect();
        Ok(Grid::Profile {
            positions,
            face_coeff,
            center_density,
            step: h,
            weights,
            sigma: sigma_vals,
        })
    }

    /// Round sphere as a polar profile: `rho(s) = r sin(s/r)` on `[0, pi r]`.
    pub fn polar_sphere(n: usize, radius: f64) -> Result<Grid> {
        let r = radius;
        Grid::from_profile(n, std::f64::consts::PI * r, |s| r * (s / r).sin(), |_| 12.0 / (r * r))
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Torus { weights, .. }
            | Grid::Circle { weights, .. }
            | Grid::Profile { weights, .. } => weights.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weights(&self) -> &[f64] {
        match self {
            Grid::Torus { weights, .. }
            | Grid::Circle { weights, .. }
            | Grid::Profile { weights, .. } => weights,
        }
    }

    /// Modified scalar curvature at each node. Flat tori are identically
    /// zero.
    pub fn sigma(&self) -> std::borrow::Cow<'_, [f64]> {
        match self {
            Grid::Torus { weights, .. } => std::borrow::Cow::Owned(vec![0.0; weights.len()]),
            Grid::Circle { sigma, .. } | Grid::Profile { sigma, .. } => {
                std::borrow::Cow::Borrowed(sigma)
            }
        }
    }

    pub fn volume(&self) -> f64 {
        self.weights().iter().sum()
    }

    /// Representative chart coordinates of node `i`: full coordinates for the
    /// torus, the circle coordinate in slot 3 for the circle fiber, and the
    /// arclength coordinate in slot 0 for profiles.
    pub fn coords(&self, i: usize) -> [f64; 4] {
        match self {
            Grid::Torus { dims, periods, .. } => {
                let mut idx = i;
                let i3 = idx % dims[3];
                idx /= dims[3];
                let i2 = idx % dims[2];
                idx /= dims[2];
                let i1 = idx % dims[1];
                let i0 = idx / dims[1];
                [
                    i0 as f64 * periods[0] / dims[0] as f64,
                    i1 as f64 * periods[1] / dims[1] as f64,
                    i2 as f64 * periods[2] / dims[2] as f64,
                    i3 as f64 * periods[3] / dims[3] as f64,
                ]
            }
            Grid::Circle { positions, .. } => [0.0, 0.0, 0.0, positions[i]],
            Grid::Profile { positions, .. } => [positions[i], 0.0, 0.0, 0.0],
        }
    }

    /// Laplace-Beltrami operator applied to nodal values.
    pub fn apply_laplacian(&self, u: &[f64], out: &mut [f64]) {
        assert_eq!(u.len(), self.len());
        assert_eq!(out.len(), self.len());
        match self {
            Grid::Torus { dims, d2, .. } => {
                out.fill(0.0);
                let strides = [dims[1] * dims[2] * dims[3], dims[2] * dims[3], dims[3], 1];
                for axis in 0..4 {
                    let Some(m) = &d2[axis] else { continue };
                    let n = dims[axis];
                    // Iterate over all lines along `axis`.
                    let line_count = u.len() / n;
                    for line in 0..line_count {
                        // Decompose `line` into the three transverse indices.
                        let mut rem = line;
                        let mut base = 0;
                        for t in 0..4 {
                            if t == axis {
                                continue;
                            }
                            let size = dims[t];
                            let pos = rem % size;
                            rem /= size;
                            base += pos * strides[t];
                        }
                        for a in 0..n {
                            let mut acc = 0.0;
                            for b in 0..n {
                                acc += m[a * n + b] * u[base + b * strides[axis]];
                            }
                            out[base + a * strides[axis]] += acc;
                        }
                    }
                }
            }
            Grid::Circle { n, step, .. } => {
                let n = *n;
                let h2 = step * step;
                for i in 0..n {
                    let prev = u[(i + n - 1) % n];
                    let next = u[(i + 1) % n];
                    out[i] = ((next - u[i]) - (u[i] - prev)) / h2;
                }
            }
            Grid::Profile { face_coeff, center_density, step, .. } => {
                let n = u.len();
                let h2 = step * step;
                for i in 0..n {
                    let up = if i + 1 < n { face_coeff[i + 1] * (u[i + 1] - u[i]) } else { 0.0 };
                    let dn = if i > 0 { face_coeff[i] * (u[i] - u[i - 1]) } else { 0.0 };
                    out[i] = (up - dn) / (h2 * center_density[i]);
                }
            }
        }
    }
}
