//! Small fixed-size linear algebra used in the pointwise curvature pipeline.
//!
//! Everything here is deterministic: no pivot tie-breaking on equal values,
//! no parallelism, and a fixed-shape pairwise tree for summation so results
//! do not depend on accumulation order chosen at run time.

use crate::scalar::Real;

pub type Mat4<T> = [[T; 4]; 4];
pub type Mat3<T> = [[T; 3]; 3];

pub fn zeros4<T: Real>() -> Mat4<T> {
    [[T::zero(); 4]; 4]
}

pub fn identity4<T: Real>() -> Mat4<T> {
    let mut m = zeros4();
    for i in 0..4 {
        m[i][i] = T::one();
    }
    m
}

pub fn mat4_mul<T: Real>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut out = zeros4();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Determinant by LU with partial pivoting.
pub fn det4<T: Real>(m: &Mat4<T>) -> T {
    let mut a = *m;
    let mut det = T::one();
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col] == T::zero() {
            return T::zero();
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                let s = a[col][c];
                a[r][c] -= f * s;
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan with partial pivoting. Returns `None` when a pivot
/// degenerates, which the callers report as a metric degeneracy.
pub fn inv4<T: Real>(m: &Mat4<T>) -> Option<Mat4<T>> {
    let mut a = *m;
    let mut inv = identity4();
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col] == T::zero() {
            return None;
        }
        a.swap(piv, col);
        inv.swap(piv, col);
        let p = a[col][col];
        for c in 0..4 {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for r in 0..4 {
            if r == col {
                continue;
            }
            let f = a[r][col];
            if f == T::zero() {
                continue;
            }
            for c in 0..4 {
                let (s, t) = (a[col][c], inv[col][c]);
                a[r][c] -= f * s;
                inv[r][c] -= f * t;
            }
        }
    }
    Some(inv)
}

/// Eigenvalues of a symmetric 3x3 matrix by cyclic Jacobi rotations,
/// returned in descending order.
pub fn sym_eig3<T: Real>(m: &Mat3<T>) -> [T; 3] {
    let mut a = *m;
    // Cyclic sweeps; quadratic convergence makes 32 sweeps far more than
    // enough for any matrix that is finite.
    for _ in 0..32 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        let diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
        if off <= T::epsilon() * T::epsilon() * (diag + off) {
            break;
        }
        for p in 0..2 {
            for q in p + 1..3 {
                jacobi_rotate(&mut a, p, q);
            }
        }
    }
    let mut eigs = [a[0][0], a[1][1], a[2][2]];
    eigs.sort_by(|x, y| y.partial_cmp(x).expect("non-NaN eigenvalues"));
    eigs
}

fn jacobi_rotate<T: Real>(a: &mut Mat3<T>, p: usize, q: usize) {
    let apq = a[p][q];
    if apq == T::zero() {
        return;
    }
    let theta = (a[q][q] - a[p][p]) / (T::of(2.0) * apq);
    // Stable tangent of the rotation angle.
    let t = {
        let s = if theta >= T::zero() { T::one() } else { -T::one() };
        s / (theta.abs() + (T::one() + theta * theta).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    let app = a[p][p];
    let aqq = a[q][q];
    a[p][p] = app - t * apq;
    a[q][q] = aqq + t * apq;
    a[p][q] = T::zero();
    a[q][p] = T::zero();
    for r in 0..3 {
        if r != p && r != q {
            let arp = a[r][p];
            let arq = a[r][q];
            a[r][p] = c * arp - s * arq;
            a[p][r] = a[r][p];
            a[r][q] = c * arq + s * arp;
            a[q][r] = a[r][q];
        }
    }
}

/// Deterministic pairwise summation over a fixed index-ordered slice.
///
/// The reduction tree depends only on the length, never on thread count or
/// chunking, so integrals are bit-reproducible.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Frobenius norm squared of a 3x3 block.
pub fn frob3<T: Real>(m: &Mat3<T>) -> T {
    let mut s = T::zero();
    for row in m {
        for v in row {
            s += *v * *v;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_spd_matrix() {
        let m: Mat4<f64> = [
            [2.0, 0.3, 0.0, 0.1],
            [0.3, 1.5, -0.2, 0.0],
            [0.0, -0.2, 1.1, 0.4],
            [0.1, 0.0, 0.4, 0.9],
        ];
        let inv = inv4(&m).unwrap();
        let prod = mat4_mul(&m, &inv);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[i][j] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn det_of_diagonal() {
        let mut m = zeros4::<f64>();
        for (i, v) in [2.0, 3.0, 4.0, 0.5].iter().enumerate() {
            m[i][i] = *v;
        }
        assert!((det4(&m) - 12.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_known_symmetric() {
        // Eigenvalues of [[2,1,0],[1,2,0],[0,0,5]] are {5, 3, 1}.
        let m: Mat3<f64> = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]];
        let e = sym_eig3(&m);
        assert!((e[0] - 5.0).abs() < 1e-14);
        assert!((e[1] - 3.0).abs() < 1e-14);
        assert!((e[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pairwise_matches_naive_on_smooth_data() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.01 - 0.5).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-10);
    }
}
