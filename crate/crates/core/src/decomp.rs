//! Splitting of the curvature operator on two-forms into its self-dual and
//! anti-self-dual Weyl blocks, and the scalar invariants built from them.
//!
//! The six-dimensional space of two-forms is spanned by frame bivectors
//! indexed by [`PAIR_INDICES`]; the pairing `i <-> i+3` is Hodge duality, so
//! `(f_a ^ f_b +/- f_c ^ f_d)/sqrt(2)` diagonalize the star operator.

use crate::curvature::CurvaturePoint;
use crate::linalg::{sym_eig3, Mat3};
use crate::scalar::Real;

/// Index pairs `(a, b)` of the bivector basis `f_a ^ f_b`. Entry `i` and
/// entry `i + 3` are Hodge duals of each other in a positively oriented
/// frame.
pub const PAIR_INDICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

/// The curvature operator as a symmetric 6x6 matrix over the bivector basis:
/// `M[p][q] = Rm(f_a, f_b, f_c, f_d)` for `PAIR_INDICES[p] = (a, b)`,
/// `PAIR_INDICES[q] = (c, d)`.
pub fn curvature_operator<T: Real>(point: &CurvaturePoint<T>) -> [[T; 6]; 6] {
    let mut m = [[T::zero(); 6]; 6];
    for (p, &(a, b)) in PAIR_INDICES.iter().enumerate() {
        for (q, &(c, d)) in PAIR_INDICES.iter().enumerate() {
            m[p][q] = point.frame_riemann[a][b][c][d];
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct CurvatureBlocks<T> {
    /// Self-dual Weyl block plus scalar part, acting on `Lambda^+`.
    pub plus_block: Mat3<T>,
    /// Anti-self-dual counterpart on `Lambda^-`.
    pub minus_block: Mat3<T>,
    /// Mixed block; its squared norm is a quarter of the trace-free Ricci's.
    pub mixed_block: Mat3<T>,
    pub scalar: T,
    /// Eigenvalues of the trace-free self-dual Weyl operator, descending.
    pub weyl_plus_eigs: [T; 3],
    pub weyl_minus_eigs: [T; 3],
    pub lambda_max_plus: T,
    pub lambda_max_minus: T,
    /// `R - 6 max(lambda_max_plus, lambda_max_minus)`.
    pub sigma: T,
    /// `R - 6 lambda_max_plus`; only the self-dual side.
    pub sigma_plus: T,
    /// Smallest eigenvalue of `(R/6) I - W` over both halves; equals
    /// `sigma / 6`.
    pub pic_margin: T,
    /// Squared Frobenius norm of the mixed block.
    pub mixed_norm2: T,
}

impl<T: Real> CurvatureBlocks<T> {
    /// Half-norm convention: `|W+|^2` is the squared Frobenius norm of the
    /// 3x3 self-dual block, which makes the Euler-characteristic density come
    /// out with weight 1 on `|W+|^2 + |W-|^2`.
    pub fn weyl_plus_norm2(&self) -> T {
        self.weyl_plus_eigs.iter().map(|&l| l * l).fold(T::zero(), |s, v| s + v)
    }

    pub fn weyl_minus_norm2(&self) -> T {
        self.weyl_minus_eigs.iter().map(|&l| l * l).fold(T::zero(), |s, v| s + v)
    }

    /// Integrand of the Euler characteristic before the `1/(8 pi^2)` factor:
    /// `|W+|^2 + |W-|^2 + R^2/24 - |tf Ric|^2 / 2`.
    pub fn euler_density(&self, trace_free_ricci_norm2: T) -> T {
        self.weyl_plus_norm2() + self.weyl_minus_norm2() + self.scalar * self.scalar / T::of(24.0)
            - trace_free_ricci_norm2 * T::of(0.5)
    }

    /// Pointwise positivity verdict for the modified scalar invariant, with a
    /// tolerance scaled to the curvature magnitude.
    pub fn is_positive(&self, rel_tol: T) -> bool {
        self.sigma > rel_tol * T::one().max(self.scalar.abs())
    }
}

/// Split the curvature operator. `orientation = -1` reverses which half of
/// the two-form bundle is called self-dual, which swaps the two Weyl blocks
/// and transposes the mixed one.
pub fn decompose<T: Real>(point: &CurvaturePoint<T>, orientation: i8) -> CurvatureBlocks<T> {
    let m = curvature_operator(point);
    let half = T::of(0.5);
    let mut a = [[T::zero(); 3]; 3];
    let mut c = [[T::zero(); 3]; 3];
    let mut b = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = half * (m[i][j] + m[i][j + 3] + m[i + 3][j] + m[i + 3][j + 3]);
            c[i][j] = half * (m[i][j] - m[i][j + 3] - m[i + 3][j] + m[i + 3][j + 3]);
            b[i][j] = half * (m[i][j] - m[i][j + 3] + m[i + 3][j] - m[i + 3][j + 3]);
        }
    }

    if orientation < 0 {
        std::mem::swap(&mut a, &mut c);
        for i in 0..3 {
            for j in (i + 1)..3 {
                let t = b[i][j];
                b[i][j] = b[j][i];
                b[j][i] = t;
            }
        }
    }

    let scalar = point.scalar;
    let twelfth = scalar / T::of(12.0);
    let mut wp = a;
    let mut wm = c;
    for i in 0..3 {
        wp[i][i] -= twelfth;
        wm[i][i] -= twelfth;
    }

    let weyl_plus_eigs = sym_eig3(&wp);
    let weyl_minus_eigs = sym_eig3(&wm);
    let lambda_max_plus = weyl_plus_eigs[0];
    let lambda_max_minus = weyl_minus_eigs[0];
    let lmax = lambda_max_plus.max(lambda_max_minus);
    let sigma = scalar - T::of(6.0) * lmax;
    let sigma_plus = scalar - T::of(6.0) * lambda_max_plus;

    let mut mixed_norm2 = T::zero();
    for row in &b {
        for &v in row {
            mixed_norm2 += v * v;
        }
    }

    CurvatureBlocks {
        plus_block: a,
        minus_block: c,
        mixed_block: b,
        scalar,
        weyl_plus_eigs,
        weyl_minus_eigs,
        lambda_max_plus,
        lambda_max_minus,
        sigma,
        sigma_plus,
        pic_margin: sigma / T::of(6.0),
        mixed_norm2,
    }
}
