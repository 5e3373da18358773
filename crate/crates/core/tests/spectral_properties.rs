//! Algebraic properties of the block decomposition: trace identities, the
//! eigenvalue inequality behind the one-sided curvature quantity, and
//! orientation behaviour, checked on random inputs.

use conformal4::chart::{product_s3_s1, spec_from_json, ManifoldSpec};
use conformal4::curvature::curvature_at;
use conformal4::decomp::decompose;
use conformal4::jet::evaluate_jet;
use conformal4::linalg::sym_eig3;
use proptest::prelude::*;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bumpy_torus() -> ManifoldSpec {
    // Generic non-Einstein metric with no special holonomy; off-diagonal
    // terms keep every code path honest.
    let doc = r#"{
        "name": "bumpy",
        "chart": {
            "bounds": [[0,1],[0,1],[0,1],[0,1]],
            "periodic": [true,true,true,true],
            "metric": [
                ["1.3 + 0.4*sin(2*pi*x0)*cos(2*pi*x1)", "0.15*sin(2*pi*x0)*sin(2*pi*x3)", "0", "0.05*cos(2*pi*x2)"],
                ["0.15*sin(2*pi*x0)*sin(2*pi*x3)", "1.1 + 0.3*cos(2*pi*x1)", "0.1*sin(2*pi*x1)*sin(2*pi*x2)", "0"],
                ["0", "0.1*sin(2*pi*x1)*sin(2*pi*x2)", "0.9 + 0.2*sin(2*pi*x2)", "0"],
                ["0.05*cos(2*pi*x2)", "0", "0", "1.4 + 0.25*cos(2*pi*x0 + 2*pi*x3)"]
            ]
        }
    }"#;
    spec_from_json(doc).unwrap()
}

#[test]
fn eigenvalue_floor_on_random_trace_free_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let entry = Uniform::new(-1.0f64, 1.0);
    let scale = Uniform::new(-3.0f64, 3.0);
    for _ in 0..100_000 {
        let s = 10f64.powf(scale.sample(&mut rng));
        let a = entry.sample(&mut rng) * s;
        let b = entry.sample(&mut rng) * s;
        let d = entry.sample(&mut rng) * s;
        let e = entry.sample(&mut rng) * s;
        let f = entry.sample(&mut rng) * s;
        let m = [[a, d, e], [d, b, f], [e, f, -a - b]];
        let eigs = sym_eig3(&m);
        let norm2: f64 = eigs.iter().map(|l| l * l).sum();
        let floor = 1.5 * eigs[0] * eigs[0];
        assert!(
            norm2 >= floor - 1e-12 * norm2.max(1e-300),
            "norm2 {norm2} < 1.5 lmax^2 {floor} for eigs {eigs:?}"
        );
    }
}

#[test]
fn eigenvalue_floor_is_attained() {
    // Spectrum proportional to (2, -1, -1) meets the floor exactly.
    let m = [[2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    let eigs = sym_eig3(&m);
    let norm2: f64 = eigs.iter().map(|l| l * l).sum();
    assert!((norm2 - 1.5 * eigs[0] * eigs[0]).abs() < 1e-14);
}

#[test]
fn block_trace_identities_on_generic_metric() {
    let spec = bumpy_torus();
    let chart = &spec.charts[0];
    for x in chart.sample_interior(40, 0.0, 7) {
        let point = curvature_at(&evaluate_jet(chart, x).unwrap()).unwrap();
        let blocks = decompose(&point, 1);
        let r4 = point.scalar / 4.0;
        let tr_plus: f64 = (0..3).map(|i| blocks.plus_block[i][i]).sum();
        let tr_minus: f64 = (0..3).map(|i| blocks.minus_block[i][i]).sum();
        let scale = 1.0 + point.riemann_norm2;
        assert!((tr_plus - r4).abs() < 1e-10 * scale, "trace+ {tr_plus} vs {r4}");
        assert!((tr_minus - r4).abs() < 1e-10 * scale, "trace- {tr_minus} vs {r4}");

        // Self-dual and anti-self-dual Weyl eigenvalues are trace free.
        let sum_p: f64 = blocks.weyl_plus_eigs.iter().sum();
        let sum_m: f64 = blocks.weyl_minus_eigs.iter().sum();
        assert!(sum_p.abs() < 1e-10 * scale);
        assert!(sum_m.abs() < 1e-10 * scale);

        // The mixed block carries exactly a quarter of the trace-free Ricci
        // energy.
        let mixed = blocks.mixed_norm2;
        let quarter = point.trace_free_ricci_norm2 / 4.0;
        assert!((mixed - quarter).abs() < 1e-10 * scale, "mixed {mixed} vs {quarter}");

        // The one-sided margin is one sixth of the one-sided quantity built
        // from both halves.
        assert!((blocks.pic_margin - blocks.sigma / 6.0).abs() < 1e-10 * scale);

        // Pointwise Gauss-Bonnet integrand assembled from blocks agrees with
        // the direct curvature contraction form.
        let via_blocks = blocks.weyl_plus_norm2() + blocks.weyl_minus_norm2()
            + point.scalar * point.scalar / 24.0
            - point.trace_free_ricci_norm2 / 2.0;
        assert!((via_blocks - blocks.euler_density(point.trace_free_ricci_norm2)).abs() < 1e-12 * scale);
    }
}

#[test]
fn full_curvature_norm_recovers_from_blocks() {
    // The fully contracted tensor norm decomposes against the operator
    // eigenvalue norms as 4(|W+|^2 + |W-|^2) + 2|Ric0|^2 + R^2/6.
    let spec = bumpy_torus();
    let chart = &spec.charts[0];
    for x in chart.sample_interior(25, 0.0, 8) {
        let point = curvature_at(&evaluate_jet(chart, x).unwrap()).unwrap();
        let blocks = decompose(&point, 1);
        let w2 = blocks.weyl_plus_norm2() + blocks.weyl_minus_norm2();
        let recon = 4.0 * w2 + 2.0 * point.trace_free_ricci_norm2
            + point.scalar * point.scalar / 6.0;
        let scale = 1.0 + point.riemann_norm2;
        assert!(
            (recon - point.riemann_norm2).abs() < 1e-9 * scale,
            "reconstructed {recon} vs {}",
            point.riemann_norm2
        );
    }
}

proptest! {
    #[test]
    fn orientation_flip_is_an_involution_on_blocks(
        u0 in 0.05f64..0.95,
        u1 in 0.05f64..0.95,
        u2 in 0.05f64..0.95,
        u3 in 0.05f64..0.95,
    ) {
        let spec = bumpy_torus();
        let chart = &spec.charts[0];
        let x = [u0, u1, u2, u3];
        let point = curvature_at(&evaluate_jet(chart, x).unwrap()).unwrap();
        let b = decompose(&point, 1);
        let br = decompose(&point, -1);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((b.plus_block[i][j] - br.minus_block[i][j]).abs() < 1e-12);
                prop_assert!((b.minus_block[i][j] - br.plus_block[i][j]).abs() < 1e-12);
                prop_assert!((b.mixed_block[i][j] - br.mixed_block[j][i]).abs() < 1e-12);
            }
        }
        prop_assert!((b.sigma - br.sigma).abs() < 1e-12);
        prop_assert!((b.lambda_max_plus - br.lambda_max_minus).abs() < 1e-10);
        prop_assert!((b.mixed_norm2 - br.mixed_norm2).abs() < 1e-12);
    }

    #[test]
    fn hopf_product_positivity_margin(eta in 0.1f64..1.4, tau in 0.5f64..5.5) {
        // Positive one-sided curvature at every point of the homogeneous
        // product, independent of position.
        let spec = product_s3_s1(1.0, 6.0);
        let chart = &spec.charts[0];
        let x = [eta, 1.0, 2.0, tau];
        let point = curvature_at(&evaluate_jet(chart, x).unwrap()).unwrap();
        let blocks = decompose(&point, 1);
        prop_assert!(blocks.is_positive(1e-9));
        prop_assert!((blocks.sigma - 6.0).abs() < 1e-9);
    }
}
