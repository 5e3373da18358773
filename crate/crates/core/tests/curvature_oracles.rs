//! Pointwise oracles: dual-number jets against high-order finite differences,
//! curvature values of the catalog geometries against their closed forms, and
//! chart independence of the invariants.

use conformal4::chart::{
    self, flat_torus, fubini_study, product_s2_s2, product_s3_s1, round_sphere, spec_from_json,
    ChartDomain, ManifoldSpec,
};
use conformal4::curvature::curvature_at;
use conformal4::decomp::{decompose, PAIR_INDICES};
use conformal4::jet::evaluate_jet;

/// Fourth-order central first derivative of the metric in direction `k`.
fn fd_dg(chart: &ChartDomain, x: [f64; 4], k: usize, h: f64) -> [[f64; 4]; 4] {
    let eval = |offset: f64| {
        let mut y = x;
        y[k] += offset;
        chart.metric.eval(&y)
    };
    let (m2, m1, p1, p2) = (eval(-2.0 * h), eval(-h), eval(h), eval(2.0 * h));
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (m2[i][j] - 8.0 * m1[i][j] + 8.0 * p1[i][j] - p2[i][j]) / (12.0 * h);
        }
    }
    out
}

/// Fourth-order second partial: the first-derivative stencil applied twice.
fn fd_ddg(chart: &ChartDomain, x: [f64; 4], k: usize, l: usize, h: f64) -> [[f64; 4]; 4] {
    let eval = |offset: f64| {
        let mut y = x;
        y[l] += offset;
        fd_dg(chart, y, k, h)
    };
    let (m2, m1, p1, p2) = (eval(-2.0 * h), eval(-h), eval(h), eval(2.0 * h));
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (m2[i][j] - 8.0 * m1[i][j] + 8.0 * p1[i][j] - p2[i][j]) / (12.0 * h);
        }
    }
    out
}

fn check_jet_against_fd(spec: &ManifoldSpec, h: f64, tol: f64, seed: u64) {
    let chart = &spec.charts[0];
    for x in chart.sample_interior(24, 0.1, seed) {
        let jet = evaluate_jet(chart, x).unwrap();
        let mut scale: f64 = 1.0;
        for row in &jet.g {
            for v in row {
                scale = scale.max(v.abs());
            }
        }
        for k in 0..4 {
            let fd = fd_dg(chart, x, k, h);
            for i in 0..4 {
                for j in 0..4 {
                    let err = (jet.dg[k][i][j] - fd[i][j]).abs();
                    assert!(
                        err <= tol * scale,
                        "{}: dg[{k}][{i}][{j}] dual {} vs fd {} at {:?}",
                        spec.name,
                        jet.dg[k][i][j],
                        fd[i][j],
                        x
                    );
                }
            }
            for l in 0..4 {
                let fd2 = fd_ddg(chart, x, k, l, h);
                for i in 0..4 {
                    for j in 0..4 {
                        let err = (jet.ddg[k][l][i][j] - fd2[i][j]).abs();
                        assert!(
                            err <= 10.0 * tol * scale,
                            "{}: ddg[{k}][{l}][{i}][{j}] dual {} vs fd {} at {:?}",
                            spec.name,
                            jet.ddg[k][l][i][j],
                            fd2[i][j],
                            x
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn jets_match_finite_differences_on_catalog() {
    check_jet_against_fd(&round_sphere(1.3), 1e-3, 1e-6, 11);
    check_jet_against_fd(&fubini_study(), 1e-3, 1e-6, 12);
    check_jet_against_fd(&product_s2_s2(1.0, 0.7), 1e-3, 1e-6, 13);
}

#[test]
fn jets_match_finite_differences_tightly_on_hopf_product() {
    // Entries are products of simple trig functions; the sharper step shows
    // the dual jets at nearly full precision.
    check_jet_against_fd(&product_s3_s1(1.0, 4.0), 1e-4, 1e-8, 14);
}

#[test]
fn jets_match_finite_differences_on_custom_expressions() {
    let doc = r#"{
        "name": "bumpy-torus",
        "chart": {
            "bounds": [[0,1],[0,1],[0,1],[0,1]],
            "periodic": [true,true,true,true],
            "metric": [
                ["1 + 0.3*sin(2*pi*x0)*cos(2*pi*x1)", "0.1*sin(2*pi*x0)*sin(2*pi*x1)", "0", "0"],
                ["0.1*sin(2*pi*x0)*sin(2*pi*x1)", "1.2", "0", "0"],
                ["0", "0", "1 + 0.2*cos(2*pi*x2)", "0"],
                ["0", "0", "0", "0.8"]
            ]
        }
    }"#;
    let spec = spec_from_json(doc).unwrap();
    check_jet_against_fd(&spec, 1e-3, 1e-6, 15);
}

fn sym_matrix_eigs4(m: &[[f64; 4]; 4]) -> [f64; 4] {
    // Jacobi rotations for the 4x4 symmetric case; used only as a test oracle.
    let mut a = *m;
    for _ in 0..64 {
        let mut p = 0;
        let mut q = 1;
        let mut biggest = 0.0f64;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if a[i][j].abs() > biggest {
                    biggest = a[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if biggest < 1e-14 {
            break;
        }
        let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        for k in 0..4 {
            let akp = a[k][p];
            let akq = a[k][q];
            a[k][p] = c * akp - s * akq;
            a[k][q] = s * akp + c * akq;
        }
        for k in 0..4 {
            let apk = a[p][k];
            let aqk = a[q][k];
            a[p][k] = c * apk - s * aqk;
            a[q][k] = s * apk + c * aqk;
        }
    }
    let mut eigs = [a[0][0], a[1][1], a[2][2], a[3][3]];
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eigs
}

/// Eigenvalues of the Ricci tensor with one index raised.
fn ricci_eigs(jet: &conformal4::Jet, ricci: &[[f64; 4]; 4]) -> [f64; 4] {
    // Symmetrize g^-1 Ric through the frame: components Ric(f_a, f_b).
    let curv = curvature_at(jet).unwrap();
    let mut m = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    acc += curv.frame[a][i] * curv.frame[b][j] * ricci[i][j];
                }
            }
            m[a][b] = acc;
        }
    }
    sym_matrix_eigs4(&m)
}

#[test]
fn catalog_curvature_closed_forms() {
    let cases: Vec<(ManifoldSpec, f64, [f64; 4])> = vec![
        // (spec, scalar, descending Ricci eigenvalues)
        (round_sphere(1.0), 12.0, [3.0; 4]),
        (flat_torus([1.0; 4]), 0.0, [0.0; 4]),
        (product_s3_s1(1.0, 5.0), 6.0, [2.0, 2.0, 2.0, 0.0]),
        (fubini_study(), 24.0, [6.0; 4]),
        (product_s2_s2(1.0, 1.0), 4.0, [1.0; 4]),
    ];
    for (spec, scalar, ric) in cases {
        let chart = &spec.charts[0];
        for x in chart.sample_interior(40, 0.05, 99) {
            let jet = evaluate_jet(chart, x).unwrap();
            let c = curvature_at(&jet).unwrap();
            assert!(
                (c.scalar - scalar).abs() < 1e-8,
                "{}: scalar {} at {:?}",
                spec.name,
                c.scalar,
                x
            );
            let eigs = ricci_eigs(&jet, &c.ricci);
            for (got, want) in eigs.iter().zip(ric) {
                assert!((got - want).abs() < 1e-7, "{}: ricci {eigs:?}", spec.name);
            }
            assert!(c.bianchi_residual < 1e-9, "{}: bianchi {}", spec.name, c.bianchi_residual);
        }
    }
}

#[test]
fn hopf_product_blocks_and_mixed_norm() {
    let spec = product_s3_s1(1.0, 3.0);
    let chart = &spec.charts[0];
    for x in chart.sample_interior(25, 0.05, 5) {
        let jet = evaluate_jet(chart, x).unwrap();
        let c = curvature_at(&jet).unwrap();
        let blocks = decompose(&c, 1);
        // Conformally flat: both Weyl halves vanish.
        for l in blocks.weyl_plus_eigs.iter().chain(blocks.weyl_minus_eigs.iter()) {
            assert!(l.abs() < 1e-9, "weyl {l}");
        }
        assert!((blocks.sigma - 6.0).abs() < 1e-9);
        // Trace-free Ricci norm 3, and the mixed block carries a quarter.
        assert!((c.trace_free_ricci_norm2 - 3.0).abs() < 1e-8);
        assert!((blocks.mixed_norm2 - 0.75).abs() < 1e-8);
        // Euler density vanishes pointwise for this homogeneous metric.
        assert!(blocks.euler_density(c.trace_free_ricci_norm2).abs() < 1e-8);
    }
}

#[test]
fn stereographic_ball_matches_angle_chart() {
    // The same round sphere in a different chart: invariants agree with the
    // hyperspherical presentation, and the origin values are exact.
    let doc = r#"{
        "name": "stereographic-sphere",
        "chart": {
            "bounds": [[-0.8,0.9],[-0.8,0.9],[-0.8,0.9],[-0.8,0.9]],
            "periodic": [false,false,false,false],
            "metric": [
                ["4 / (1 + x0^2 + x1^2 + x2^2 + x3^2)^2", "0", "0", "0"],
                ["0", "4 / (1 + x0^2 + x1^2 + x2^2 + x3^2)^2", "0", "0"],
                ["0", "0", "4 / (1 + x0^2 + x1^2 + x2^2 + x3^2)^2", "0"],
                ["0", "0", "0", "4 / (1 + x0^2 + x1^2 + x2^2 + x3^2)^2"]
            ]
        }
    }"#;
    let spec = spec_from_json(doc).unwrap();
    let chart = &spec.charts[0];

    // At the origin the metric is 4 times the identity and the connection
    // coefficients vanish.
    let jet0 = evaluate_jet(chart, [0.0f64; 4]).unwrap();
    let c0 = curvature_at(&jet0).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let expect = if i == j { 4.0 } else { 0.0 };
            assert!((jet0.g[i][j] - expect).abs() < 1e-15);
            for k in 0..4 {
                assert!(c0.christoffel[k][i][j].abs() < 1e-14);
            }
        }
    }

    for x in chart.sample_interior(30, 0.05, 21) {
        let jet = evaluate_jet(chart, x).unwrap();
        let c = curvature_at(&jet).unwrap();
        let blocks = decompose(&c, 1);
        assert!((c.scalar - 12.0).abs() < 1e-9, "scalar {} at {x:?}", c.scalar);
        assert!(c.trace_free_ricci_norm2 < 1e-9);
        assert!((blocks.sigma - 12.0).abs() < 1e-9);
        assert!((blocks.euler_density(c.trace_free_ricci_norm2) - 6.0).abs() < 1e-8);
    }
}

#[test]
fn bivector_basis_diagonalizes_hodge_star() {
    // Levi-Civita oracle: in a positively oriented orthonormal frame the
    // star operator must send pair p to pair p + 3 with coefficient +1.
    fn eps(p: [usize; 4]) -> f64 {
        let mut sign = 1.0;
        let mut v = p;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if v[i] == v[j] {
                    return 0.0;
                }
                if v[i] > v[j] {
                    v.swap(i, j);
                    sign = -sign;
                }
            }
        }
        sign
    }
    for (p, &(a, b)) in PAIR_INDICES.iter().enumerate() {
        for (q, &(c, d)) in PAIR_INDICES.iter().enumerate() {
            // Coefficient of f_c ^ f_d in star(f_a ^ f_b).
            let coeff = eps([a, b, c, d]);
            let expect = if (p + 3) % 6 == q && (p % 3) == (q % 3) { 1.0 } else { 0.0 };
            assert_eq!(coeff, expect, "star pairing at ({p}, {q})");
        }
    }
}

#[test]
fn chart_rejects_degenerate_custom_metric() {
    let doc = r#"{
        "chart": {
            "bounds": [[0,1],[0,1],[0,1],[0,1]],
            "periodic": [true,true,true,true],
            "metric": [
                ["x0 - 0.5", "0", "0", "0"],
                ["0", "1", "0", "0"],
                ["0", "0", "1", "0"],
                ["0", "0", "0", "1"]
            ]
        }
    }"#;
    let spec = spec_from_json(doc).unwrap();
    let err = chart::check_positive_definite::<f64>(&spec, 64, 3).unwrap_err();
    assert!(matches!(err, conformal4::Error::Degenerate { .. }));
}
