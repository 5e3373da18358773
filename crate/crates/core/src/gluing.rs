//! Connected sums along cylindrical necks.
//!
//! A rotationally symmetric cap `dt^2 + w(t)^2 g_{S^3}` is modified in three
//! stages: the warp is *flattened* to `w(t) = t` inside radius `delta/2` (an
//! exactly Euclidean ball), the ball is *rescaled* by the conformal factor
//! `r^(-2 (1 - cutoff(2r/delta)))` so that it opens into a round unit
//! cylinder, and two such halves are *joined* across a neck of prescribed
//! length. The result is a single profile metric `ds^2 + rho(s)^2 g_{S^3}`
//! whose curvature is available in closed form through dual numbers.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grid::Grid;
use crate::quadrature::gauss_legendre;
use crate::scalar::{ChartScalar, Dual2};
use crate::yamabe::{functional_fs, minimize_subcritical, SolveOptions};
use num_traits::ToPrimitive;
use serde::Serialize;

/// Quintic transition: 0 below 1/2, 1 above 1, and the smoothstep
/// `6t^5 - 15t^4 + 10t^3` rescaled to `[1/2, 1]` in between. Twice
/// continuously differentiable, with `|d/dx| <= 3.75` and `|d^2/dx^2| < 24`.
pub fn cutoff<S: ChartScalar>(x: S) -> S {
    let v = x.value().to_f64().unwrap_or(f64::NAN);
    if v <= 0.5 {
        S::lit(0.0)
    } else if v >= 1.0 {
        S::lit(1.0)
    } else {
        let t = (x - S::lit(0.5)) * S::lit(2.0);
        let t3 = t * t * t;
        t3 * (S::lit(10.0) - S::lit(15.0) * t + S::lit(6.0) * t * t)
    }
}

/// Largest absolute first and second derivative of [`cutoff`], by dense
/// sampling with dual numbers.
pub fn cutoff_derivative_bounds(samples: usize) -> (f64, f64) {
    let mut d1: f64 = 0.0;
    let mut d2: f64 = 0.0;
    for i in 0..=samples {
        let x = 0.5 + 0.5 * i as f64 / samples as f64;
        let v = cutoff(Dual2::seeded(x, 1.0, 1.0));
        d1 = d1.max(v.b.abs());
        d2 = d2.max(v.d.abs());
    }
    (d1, d2)
}

/// Warp function of a rotationally symmetric cap, evaluable on dual numbers.
#[derive(Clone, Debug)]
pub enum Warp {
    /// Round sphere of the given radius: `w(t) = radius sin(t / radius)` on
    /// `[0, pi radius]`.
    Sphere { radius: f64 },
    /// Arbitrary expression in `x0 = t`.
    Formula(Expr),
}

impl Warp {
    pub fn eval<S: ChartScalar>(&self, t: S) -> S {
        match self {
            Warp::Sphere { radius } => {
                let r = S::lit(*radius);
                r * (t / r).sin()
            }
            Warp::Formula(e) => e.eval(&[t, S::lit(0.0), S::lit(0.0), S::lit(0.0)]),
        }
    }

    /// Domain length of the cap parameter.
    pub fn natural_extent(&self) -> Option<f64> {
        match self {
            Warp::Sphere { radius } => Some(std::f64::consts::PI * radius),
            Warp::Formula(_) => None,
        }
    }
}

/// Flattened warp: exactly `t` below `delta/2`, exactly the original warp
/// above `delta`, interpolated through `sqrt(t^2 + cutoff(t/delta)(w^2 - t^2))`
/// in between.
pub fn flattened_warp<S: ChartScalar>(warp: &Warp, delta: f64, t: S) -> S {
    let v = t.value().to_f64().unwrap_or(f64::NAN);
    if v <= 0.5 * delta {
        t
    } else if v >= delta {
        warp.eval(t)
    } else {
        let w = warp.eval(t);
        let xi = cutoff(t * S::lit(1.0 / delta));
        (t * t + xi * (w * w - t * t)).sqrt()
    }
}

/// Scalar curvature of the warped product `dt^2 + w(t)^2 g_{S^3}` at `t`,
/// from the profile jet: `R = 6 (-w''/w + (1 - w'^2)/w^2)`.
fn profile_scalar_curvature(u: f64, du: f64, ddu: f64) -> f64 {
    6.0 * (-ddu / u + (1.0 - du * du) / (u * u))
}

/// Largest relative deviation between the flattened and original metric over
/// the affected region `(0, delta]`, measured on the fiber block:
/// `sup |w_flat^2 / w^2 - 1|`. Scales like `delta^2` because the original
/// warp leaves the Euclidean profile only at second order.
pub fn flatten_metric_defect(warp: &Warp, delta: f64, samples: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 1..=samples {
        let t = delta * i as f64 / samples as f64;
        let flat = flattened_warp(warp, delta, t);
        let orig = warp.eval(t);
        worst = worst.max((flat * flat / (orig * orig) - 1.0).abs());
    }
    worst
}

/// Largest curvature norm `sup |Rm|` of the flattened profile over `(0, t_max)`.
pub fn flattened_curvature_sup(warp: &Warp, t_max: f64, delta: f64, samples: usize) -> f64 {
    let mut sup: f64 = 0.0;
    for i in 1..samples {
        let t = t_max * i as f64 / samples as f64;
        let p = flattened_warp(warp, delta, Dual2::seeded(t, 1.0, 1.0));
        let k1 = -p.d / p.a;
        let k2 = (1.0 - p.b * p.b) / (p.a * p.a);
        sup = sup.max((12.0 * (k1 * k1 + k2 * k2)).sqrt());
    }
    sup
}

/// Neck transition profile `rho(r) = r^cutoff(2r/delta)` and the arclength
/// density `F = rho / r`, as dual numbers in `r`.
fn transition_profile(delta: f64, r: f64) -> (Dual2<f64>, Dual2<f64>) {
    let rd = Dual2::seeded(r, 1.0, 1.0);
    let xi = cutoff(rd * Dual2::constant(2.0 / delta));
    let p = rd.powf(xi);
    (p, p / rd)
}

/// One half of a connected sum: a cap, its flattening scale, and half of the
/// neck cylinder.
#[derive(Clone, Debug)]
pub struct NeckHalf {
    pub warp: Warp,
    /// Cap parameter runs over `[0, t_max]`; the far pole is at `t_max`.
    pub t_max: f64,
    pub delta: f64,
    /// Length of exact cylinder contributed by this half.
    pub cylinder_length: f64,
    /// Arclength of the cap piece, `t_max - delta/2`.
    cap_length: f64,
    /// Arclength of the transition piece `r in [delta/4, delta/2]`.
    transition_length: f64,
}

impl NeckHalf {
    pub fn new(warp: Warp, t_max: f64, delta: f64, cylinder_length: f64) -> Result<NeckHalf> {
        if !(delta > 0.0) || delta >= 0.5 * t_max {
            return Err(Error::precondition(format!(
                "flattening scale delta = {delta} must lie in (0, t_max/2)"
            )));
        }
        if !(cylinder_length >= 0.0) {
            return Err(Error::precondition("cylinder length must be nonnegative"));
        }
        // Warp must be positive on (0, t_max) and close smoothly enough to
        // flatten: check a coarse sample.
        for i in 1..200 {
            let t = t_max * i as f64 / 200.0;
            let v = warp.eval(t);
            if i < 199 && !(v > 0.0) {
                return Err(Error::precondition(format!("warp not positive at t = {t}")));
            }
        }
        let transition_length = transition_arclength(delta, 0.5 * delta);
        Ok(NeckHalf {
            warp,
            t_max,
            delta,
            cylinder_length,
            cap_length: t_max - 0.5 * delta,
            transition_length,
        })
    }

    /// Total arclength of this half, pole to junction.
    pub fn length(&self) -> f64 {
        self.cap_length + self.transition_length + self.cylinder_length
    }

    /// Profile value and its first two arclength derivatives at distance `s`
    /// from the far pole.
    pub fn rho_jet(&self, s: f64) -> [f64; 3] {
        if s <= self.cap_length {
            // Cap: r = t_max - s, unit speed.
            let r = self.t_max - s;
            let p = flattened_warp(&self.warp, self.delta, Dual2::seeded(r, -1.0, -1.0));
            [p.a, p.b, p.d]
        } else if s < self.cap_length + self.transition_length {
            let target = s - self.cap_length;
            let r = invert_transition(self.delta, target);
            let (p, f) = transition_profile(self.delta, r);
            let du = -p.b / f.a;
            let ddu = (p.d * f.a - p.b * f.b) / (f.a * f.a * f.a);
            [p.a, du, ddu]
        } else {
            [1.0, 0.0, 0.0]
        }
    }
}

/// Arclength of the transition piece from `delta/4` up to `r`, by fixed
/// Gauss-Legendre quadrature of the smooth positive density.
fn transition_arclength(delta: f64, r: f64) -> f64 {
    let a = 0.25 * delta;
    if r <= a {
        return 0.0;
    }
    let (xs, ws) = gauss_legendre(24);
    let mid = 0.5 * (a + r);
    let half = 0.5 * (r - a);
    xs.iter()
        .zip(&ws)
        .map(|(x, w)| {
            let tau = mid + half * x;
            let (p, _) = transition_profile(delta, tau);
            w * half * (p.a / tau)
        })
        .sum()
}

/// Solve `arclength from the cap side = target` for `r in [delta/4, delta/2]`
/// by bisection refined with Newton steps (the density is the derivative).
fn invert_transition(delta: f64, target_from_cap: f64) -> f64 {
    let total = transition_arclength(delta, 0.5 * delta);
    let target = (total - target_from_cap).clamp(0.0, total);
    let mut lo = 0.25 * delta;
    let mut hi = 0.5 * delta;
    let mut r = 0.5 * (lo + hi);
    for _ in 0..80 {
        let val = transition_arclength(delta, r);
        if (val - target).abs() < 1e-14 * delta.max(1.0) {
            break;
        }
        if val < target {
            lo = r;
        } else {
            hi = r;
        }
        let (p, _) = transition_profile(delta, r);
        let density = p.a / r;
        let newton = r - (val - target) / density;
        r = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    r
}

/// Two capped halves joined across an exact round cylinder.
#[derive(Clone, Debug)]
pub struct ConnectedSum {
    pub left: NeckHalf,
    pub right: NeckHalf,
}

/// Everything the verification sweep records for one neck length.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub neck_length: f64,
    /// Subcritical quotient of the minimizer on the glued manifold.
    pub glued_quotient: f64,
    /// Critical quotient of the same minimizer.
    pub glued_critical_quotient: f64,
    /// Critical quotient of the transplanted pair on the disjoint union.
    pub union_quotient: f64,
    /// `union - glued` at the critical exponent.
    pub gap: f64,
    /// Total fourth-power mass of the transplanted pair.
    pub union_mass: f64,
    /// Fourth-power mass of the glued minimizer itself. The union keeps all
    /// of it and adds the decay ramps, so `union_mass` exceeds this.
    pub glued_mass: f64,
    /// Cutting position measured along the cylinder from its left end.
    pub slice_position: f64,
    /// Energy of the cutting cross-section.
    pub slice_energy: f64,
    /// Mean cross-section energy over the neck; the cut never exceeds it.
    pub slice_mean_energy: f64,
    pub converged: bool,
}

impl ConnectedSum {
    pub fn new(left: NeckHalf, right: NeckHalf) -> ConnectedSum {
        ConnectedSum { left, right }
    }

    /// Symmetric sum of two equal spheres with total neck length `l`.
    pub fn symmetric_spheres(radius: f64, delta: f64, l: f64) -> Result<ConnectedSum> {
        let t_max = std::f64::consts::PI * radius;
        let half = NeckHalf::new(Warp::Sphere { radius }, t_max, delta, 0.5 * l)?;
        Ok(ConnectedSum::new(half.clone(), half))
    }

    pub fn total_length(&self) -> f64 {
        self.left.length() + self.right.length()
    }

    pub fn neck_length(&self) -> f64 {
        self.left.cylinder_length + self.right.cylinder_length
    }

    /// Arclength interval occupied by the exact cylinder.
    pub fn neck_interval(&self) -> [f64; 2] {
        let a = self.left.cap_length + self.left.transition_length;
        [a, a + self.neck_length()]
    }

    pub fn rho_jet(&self, s: f64) -> [f64; 3] {
        let ll = self.left.length();
        if s <= ll {
            self.left.rho_jet(s)
        } else {
            let [u, du, ddu] = self.right.rho_jet(self.total_length() - s);
            [u, -du, ddu]
        }
    }

    pub fn rho(&self, s: f64) -> f64 {
        self.rho_jet(s)[0]
    }

    /// Modified scalar curvature; rotationally symmetric profiles have
    /// vanishing Weyl tensor, so this is the scalar curvature itself.
    pub fn sigma(&self, s: f64) -> f64 {
        let [u, du, ddu] = self.rho_jet(s);
        profile_scalar_curvature(u, du, ddu)
    }

    /// The two sectional curvatures: planes containing the profile direction
    /// and fiber planes.
    pub fn sectional_pair(&self, s: f64) -> [f64; 2] {
        let [u, du, ddu] = self.rho_jet(s);
        [-ddu / u, (1.0 - du * du) / (u * u)]
    }

    /// Squared norm of the full curvature tensor.
    pub fn riemann_norm2(&self, s: f64) -> f64 {
        let [k1, k2] = self.sectional_pair(s);
        12.0 * (k1 * k1 + k2 * k2)
    }

    /// Density whose integral against the volume element gives the Euler
    /// characteristic times `8 pi^2`.
    pub fn euler_density(&self, s: f64) -> f64 {
        let [k1, k2] = self.sectional_pair(s);
        6.0 * k1 * k2
    }

    pub fn grid(&self, n: usize) -> Result<Grid> {
        Grid::from_profile(n, self.total_length(), |s| self.rho(s), |s| self.sigma(s))
    }
}

/// Slice energy of a circle-invariant function on the unit cylinder:
/// `2 pi^2 (u'^2 + u^2)` at one cross-section.
pub fn slice_energy(value: f64, derivative: f64) -> f64 {
    2.0 * std::f64::consts::PI.powi(2) * (derivative * derivative + value * value)
}

/// A selected cross-section of the neck.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Slice {
    /// Arclength position on the glued manifold.
    pub s: f64,
    pub index: usize,
    pub energy: f64,
    /// Average slice energy over the scanned interval.
    pub mean_energy: f64,
}

/// Find the minimum-energy cross-section of `u` over the sub-interval
/// `[a, b]` of the neck. The minimum never exceeds the mean, so its energy is
/// bounded by the neck energy divided by the scanned length.
pub fn best_slice(grid: &Grid, cs: &ConnectedSum, u: &[f64], a: f64, b: f64) -> Result<Slice> {
    let Grid::Profile { positions, step, .. } = grid else {
        return Err(Error::precondition("slice scan needs a profile grid"));
    };
    let [na, nb] = cs.neck_interval();
    if a < na - 1e-9 || b > nb + 1e-9 || !(b > a) {
        return Err(Error::precondition("scan interval must lie inside the neck"));
    }
    let mut best: Option<(usize, f64)> = None;
    let mut total = 0.0;
    let mut count = 0usize;
    let n = positions.len();
    for i in 0..n {
        let s = positions[i];
        if s < a || s > b {
            continue;
        }
        let du = if i == 0 {
            (u[1] - u[0]) / step
        } else if i == n - 1 {
            (u[n - 1] - u[n - 2]) / step
        } else {
            (u[i + 1] - u[i - 1]) / (2.0 * step)
        };
        let e = slice_energy(u[i], du);
        total += e;
        count += 1;
        if best.map_or(true, |(_, be)| e < be) {
            best = Some((i, e));
        }
    }
    let (index, energy) =
        best.ok_or_else(|| Error::precondition("no grid nodes inside the scan interval"))?;
    Ok(Slice { s: positions[index], index, energy, mean_energy: total / count as f64 })
}

/// Replace `u` beyond the slice with a linear decay to zero over one unit of
/// cylinder length, on the side that walks away from `keep_left`'s cap.
/// Returns the modified field. For a slice value `c`, the decay adds exactly
/// `2 pi^2 c^2` of gradient energy and `2 pi^2 c^2 / 3` of squared mass on
/// the cylinder.
pub fn transplant(grid: &Grid, slice: &Slice, u: &[f64], keep_left: bool) -> Result<Vec<f64>> {
    let Grid::Profile { positions, .. } = grid else {
        return Err(Error::precondition("transplant needs a profile grid"));
    };
    let c = u[slice.index];
    let mut out = u.to_vec();
    for (i, &s) in positions.iter().enumerate() {
        let offset = if keep_left { s - slice.s } else { slice.s - s };
        if offset <= 0.0 {
            continue;
        }
        out[i] = if offset >= 1.0 { 0.0 } else { c * (1.0 - offset) };
    }
    Ok(out)
}

/// Quotient of the disjoint-union configuration `(u_left, u_right)`:
/// energies and masses add across the union.
pub fn union_quotient(
    grid: &Grid,
    sigma: &[f64],
    u_left: &[f64],
    u_right: &[f64],
) -> Result<(f64, f64)> {
    let a = functional_fs(grid, sigma, u_left, 4.0)?;
    let b = functional_fs(grid, sigma, u_right, 4.0)?;
    let mass_a = a.denom.powi(2);
    let mass_b = b.denom.powi(2);
    let mass = mass_a + mass_b;
    Ok(((a.energy + b.energy) / mass.sqrt(), mass))
}

/// One side of the cut, re-hosted on its own grid: the kept cells keep the
/// glued geometry and field values verbatim (same cell size, same faces), and
/// the discarded side is replaced by a true unit round cylinder carrying the
/// linear decay ramp, exactly as a capped piece with an infinite end would.
/// Evaluating the ramp on the genuine cylinder matters: near the cut the
/// glued profile may already be bending into the opposite cap, and the gap
/// being measured is of the same order as the ramp's own energy.
fn transplanted_piece(
    cs: &ConnectedSum,
    n: usize,
    u: &[f64],
    index: usize,
    keep_left: bool,
) -> Result<(Grid, Vec<f64>)> {
    let total = cs.total_length();
    let h = total / n as f64;
    let kept = if keep_left { index + 1 } else { n - index };
    let ramp_cells = (1.0 / h).ceil() as usize + 1;
    let cells = kept + ramp_cells;
    let cut = kept as f64 * h;
    let c = u[index];

    let to_glued = move |s: f64| if keep_left { s } else { total - s };
    let rho = |s: f64| if s < cut { cs.rho(to_glued(s)) } else { 1.0 };
    let sig = |s: f64| if s < cut { cs.sigma(to_glued(s)) } else { 6.0 };
    let grid = Grid::from_profile(cells, cells as f64 * h, rho, sig)?;

    let mut field = Vec::with_capacity(cells);
    for k in 0..kept {
        field.push(if keep_left { u[k] } else { u[n - 1 - k] });
    }
    for t in 0..ramp_cells {
        let offset = (t + 1) as f64 * h;
        field.push(if offset >= 1.0 { 0.0 } else { c * (1.0 - offset) });
    }
    Ok((grid, field))
}

/// Options for the neck-length sweep.
#[derive(Clone, Copy, Debug)]
pub struct GapOptions {
    pub cells: usize,
    pub exponent: f64,
    pub solve: SolveOptions,
}

impl Default for GapOptions {
    fn default() -> Self {
        // Mid-length necks sit near the constant-to-concentrated crossover,
        // where the landscape is flat and the solve needs a few tens of
        // thousands of steps.
        let solve = SolveOptions { max_iterations: 80_000, ..SolveOptions::default() };
        GapOptions { cells: 512, exponent: 3.9, solve }
    }
}

/// Minimize on the glued manifold, cut at the single minimum-energy
/// cross-section, transplant both sides onto the disjoint union, and report
/// the quotient gap.
///
/// One cut matters: the minimizer concentrates somewhere on the manifold,
/// and splitting the neck at a single section keeps the concentration intact
/// in exactly one of the two pieces. The cut lands where the cross-section
/// energy is smallest, so the decay ramps it adds are as cheap as the
/// mean-value bound allows.
pub fn connected_sum_gap(cs: &ConnectedSum, opts: GapOptions) -> Result<GapReport> {
    let grid = cs.grid(opts.cells)?;
    let sigma = grid.sigma().into_owned();
    let initial = vec![1.0; grid.len()];
    let solve = minimize_subcritical(&grid, &sigma, &initial, opts.exponent, opts.solve)?;
    let u = &solve.minimizer;

    let [na, nb] = cs.neck_interval();
    let slice = best_slice(&grid, cs, u, na, nb)?;
    let (grid_l, u_left) = transplanted_piece(cs, opts.cells, u, slice.index, true)?;
    let (grid_r, u_right) = transplanted_piece(cs, opts.cells, u, slice.index, false)?;

    let glued_critical = functional_fs(&grid, &sigma, u, 4.0)?;
    let a = functional_fs(&grid_l, &grid_l.sigma(), &u_left, 4.0)?;
    let b = functional_fs(&grid_r, &grid_r.sigma(), &u_right, 4.0)?;
    let union_mass = a.denom.powi(2) + b.denom.powi(2);
    let union_q = (a.energy + b.energy) / union_mass.sqrt();

    Ok(GapReport {
        neck_length: cs.neck_length(),
        glued_quotient: solve.quotient,
        glued_critical_quotient: glued_critical.quotient,
        union_quotient: union_q,
        gap: union_q - glued_critical.quotient,
        union_mass,
        glued_mass: glued_critical.denom.powi(2),
        slice_position: slice.s - na,
        slice_energy: slice.energy,
        slice_mean_energy: slice.mean_energy,
        converged: solve.converged,
    })
}

/// Sweep of neck lengths with a shared cap geometry; used to exhibit the
/// `C / l` decay of the gap.
pub fn neck_length_sweep(
    radius: f64,
    delta: f64,
    lengths: &[f64],
    opts: GapOptions,
) -> Result<Vec<GapReport>> {
    lengths
        .iter()
        .map(|&l| {
            let cs = ConnectedSum::symmetric_spheres(radius, delta, l)?;
            connected_sum_gap(&cs, opts)
        })
        .collect()
}

/// Least-squares fit of `y = c / x`; returns `(c, rms_residual)`.
pub fn fit_inverse_law(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| y / x).sum();
    let den: f64 = xs.iter().map(|x| 1.0 / (x * x)).sum();
    let c = num / den;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - c / x;
            r * r
        })
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();
    (c, rms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_is_monotone_bounded_transition() {
        assert_eq!(cutoff(0.2), 0.0);
        assert_eq!(cutoff(0.5), 0.0);
        assert_eq!(cutoff(1.0), 1.0);
        assert_eq!(cutoff(3.0), 1.0);
        assert!((cutoff(0.75) - 0.5).abs() < 1e-15);
        let (d1, d2) = cutoff_derivative_bounds(4000);
        assert!(d1 <= 8.0, "first derivative bound {d1}");
        assert!(d2 <= 64.0, "second derivative bound {d2}");
    }

    #[test]
    fn flattened_sphere_warp_pieces() {
        let w = Warp::Sphere { radius: 1.0 };
        let d = 0.2;
        assert_eq!(flattened_warp(&w, d, 0.05), 0.05);
        let t = 0.4;
        assert!((flattened_warp(&w, d, t) - t.sin()).abs() < 1e-15);
        // Transition stays between the two envelopes.
        let mid = flattened_warp(&w, d, 0.15);
        assert!(mid <= 0.15 && mid >= 0.15f64.sin());
    }

    #[test]
    fn cylinder_region_is_exactly_round() {
        let cs = ConnectedSum::symmetric_spheres(1.0, 0.2, 6.0).unwrap();
        let [a, b] = cs.neck_interval();
        assert!((b - a - 6.0).abs() < 1e-12);
        for f in [0.1, 0.5, 0.9] {
            let s = a + f * (b - a);
            let [u, du, ddu] = cs.rho_jet(s);
            assert_eq!(u, 1.0);
            assert_eq!(du, 0.0);
            assert_eq!(ddu, 0.0);
            assert!((cs.sigma(s) - 6.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cap_region_matches_round_sphere() {
        let cs = ConnectedSum::symmetric_spheres(1.0, 0.2, 4.0).unwrap();
        // Well inside the cap, away from flattening: rho = sin(s), sigma = 12.
        let s = 1.0;
        let [u, du, _] = cs.rho_jet(s);
        assert!((u - s.sin()).abs() < 1e-13);
        assert!((du + s.cos()).abs() < 1e-13 || (du - s.cos()).abs() < 1e-13);
        assert!((cs.sigma(s) - 12.0).abs() < 1e-10);
        assert!((cs.riemann_norm2(s) - 24.0).abs() < 1e-9);
    }

    #[test]
    fn profile_is_continuous_across_pieces() {
        let cs = ConnectedSum::symmetric_spheres(1.0, 0.2, 4.0).unwrap();
        let total = cs.total_length();
        let mut prev = cs.rho(0.001);
        let n = 8000;
        // The neck transition is steep: |rho'| reaches roughly
        // |cutoff' * (2r/delta) ln r| ~ 12 for delta = 0.2.
        let slope_bound = 20.0;
        for i in 1..n {
            let s = total * i as f64 / n as f64;
            let v = cs.rho(s);
            assert!((v - prev).abs() < slope_bound * total / n as f64, "jump at s = {s}");
            prev = v;
        }
    }

    #[test]
    fn slice_minimum_no_larger_than_mean() {
        let cs = ConnectedSum::symmetric_spheres(1.0, 0.2, 6.0).unwrap();
        let grid = cs.grid(256).unwrap();
        let Grid::Profile { positions, .. } = &grid else { unreachable!() };
        let u: Vec<f64> = positions.iter().map(|&s| 1.0 + 0.3 * (s * 1.7).sin()).collect();
        let [a, b] = cs.neck_interval();
        let slice = best_slice(&grid, &cs, &u, a, b).unwrap();
        assert!(slice.energy <= slice.mean_energy);
    }

    #[test]
    fn transplant_decay_energy_closed_form() {
        // Exponential slice data on a long cylinder: e(t) checks against
        // 2 pi^2 (u'^2 + u^2) with u = exp(-t).
        let u = |t: f64| (-t).exp();
        let e = slice_energy(u(1.0), -u(1.0));
        let expect = 2.0 * std::f64::consts::PI.powi(2) * 2.0 * (-2.0f64).exp();
        assert!((e - expect).abs() < 1e-12);
    }
}
