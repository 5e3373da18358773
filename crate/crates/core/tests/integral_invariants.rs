//! Global invariants of the catalog geometries: volumes, the curvature
//! integral that recovers the Euler characteristic, and the two spectral
//! integral comparisons with their equality cases.

use std::f64::consts::PI;

use conformal4::chart::{by_name, fubini_study, product_s2_s2, round_sphere};
use conformal4::curvature::curvature_at;
use conformal4::decomp::decompose;
use conformal4::jet::evaluate_jet;
use conformal4::report::{functional_report, top_eigenvalue_comparison, weyl_energy_comparison};

struct Expected {
    name: &'static str,
    volume: f64,
    chi: f64,
    sigma_min: f64,
}

#[test]
fn volumes_and_euler_characteristics() {
    let pi2 = PI * PI;
    let cases = [
        Expected { name: "s4", volume: 8.0 * pi2 / 3.0, chi: 2.0, sigma_min: 12.0 },
        Expected { name: "t4", volume: 1.0, chi: 0.0, sigma_min: 0.0 },
        Expected { name: "s3xs1", volume: 2.0 * pi2 * 2.0 * PI, chi: 0.0, sigma_min: 6.0 },
        Expected { name: "cp2-fs", volume: pi2 / 2.0, chi: 3.0, sigma_min: 0.0 },
        Expected { name: "s2xs2", volume: 16.0 * pi2, chi: 4.0, sigma_min: 0.0 },
    ];
    for case in cases {
        let spec = by_name(case.name).unwrap();
        let r = functional_report(&spec, 24).unwrap();
        let vol_err = (r.volume - case.volume).abs() / case.volume;
        assert!(vol_err < 1e-9, "{}: volume {} vs {}", case.name, r.volume, case.volume);
        assert!(
            (r.chi_estimate - case.chi).abs() < 1e-8,
            "{}: chi {} vs {}",
            case.name,
            r.chi_estimate,
            case.chi
        );
        let half = r.chi_half_resolution.unwrap();
        assert!(
            (r.chi_estimate - half).abs() < 1e-5,
            "{}: chi drifted between resolutions ({} vs {half})",
            case.name,
            r.chi_estimate
        );
        assert!(
            (r.sigma_min - case.sigma_min).abs() < 1e-7,
            "{}: sigma_min {}",
            case.name,
            r.sigma_min
        );
    }
}

#[test]
fn sphere_satisfies_both_bounds_strictly() {
    let r = functional_report(&round_sphere(1.0), 24).unwrap();
    let q = 12.0 * (8.0 * PI * PI / 3.0_f64).sqrt();
    assert!((r.yamabe_quotient - q).abs() / q < 1e-10);

    let weyl = weyl_energy_comparison(&r);
    assert!(weyl.applicable);
    assert!(weyl.lhs.abs() < 1e-10, "round metric has Weyl energy {}", weyl.lhs);
    assert!(weyl.margin > 0.99 * q * q / 24.0);

    let top = top_eigenvalue_comparison(&r);
    assert!(top.applicable);
    assert!(top.lhs.abs() < 1e-10);
    assert!(top.margin > 0.99 * q * q / 36.0);
}

#[test]
fn complex_projective_plane_attains_both_equalities() {
    let r = functional_report(&fubini_study(), 24).unwrap();
    let q = 12.0 * 2.0_f64.sqrt() * PI;
    assert!((r.yamabe_quotient - q).abs() / q < 1e-10);

    // Top-eigenvalue energy lands exactly on the threshold 8 pi^2.
    let top = top_eigenvalue_comparison(&r);
    assert!(top.applicable);
    let rel_gap = (top.lhs - top.rhs).abs() / top.rhs;
    assert!(rel_gap < 1e-6, "top eigenvalue gap {rel_gap}");
    assert!((top.lhs - 8.0 * PI * PI).abs() / (8.0 * PI * PI) < 1e-9);

    // Full Weyl energy lands exactly on 12 pi^2.
    let weyl = weyl_energy_comparison(&r);
    let rel_gap = (weyl.lhs - weyl.rhs).abs() / weyl.rhs;
    assert!(rel_gap < 1e-6, "weyl energy gap {rel_gap}");
    assert!((weyl.lhs - 12.0 * PI * PI).abs() / (12.0 * PI * PI) < 1e-9);

    // The anti-self-dual part carries nothing.
    assert!(r.weyl_minus_l2 < 1e-10);
}

#[test]
fn sphere_product_attains_top_eigenvalue_equality_only() {
    let r = functional_report(&product_s2_s2(1.0, 1.0), 24).unwrap();
    let q = 16.0 * PI;
    assert!((r.yamabe_quotient - q).abs() / q < 1e-10);

    let top = top_eigenvalue_comparison(&r);
    assert!(top.applicable);
    let rel_gap = (top.lhs - top.rhs).abs() / top.rhs;
    assert!(rel_gap < 1e-6, "top eigenvalue gap {rel_gap}");
    assert!((top.lhs - 64.0 * PI * PI / 9.0).abs() / top.rhs < 1e-9);

    // The full Weyl energy overshoots its threshold here: the product metric
    // sits outside the class where that bound applies, and the sign of the
    // margin records it.
    let weyl = weyl_energy_comparison(&r);
    assert!(weyl.applicable);
    assert!(weyl.margin < 0.0);
    assert!((weyl.lhs - 64.0 * PI * PI / 3.0).abs() / weyl.lhs < 1e-9);
}

#[test]
fn hopf_product_bounds_are_strict() {
    let spec = by_name("s3xs1").unwrap();
    let r = functional_report(&spec, 16).unwrap();
    assert!(r.yamabe_quotient > 0.0);
    let weyl = weyl_energy_comparison(&r);
    let top = top_eigenvalue_comparison(&r);
    assert!(weyl.lhs < 1e-10 && weyl.margin > 0.0);
    assert!(top.lhs < 1e-10 && top.margin > 0.0);
}

#[test]
fn flat_torus_comparisons_not_applicable() {
    let spec = by_name("t4").unwrap();
    let r = functional_report(&spec, 8).unwrap();
    assert!(r.yamabe_quotient.abs() < 1e-12);
    assert!(!weyl_energy_comparison(&r).applicable);
    assert!(!top_eigenvalue_comparison(&r).applicable);
}

#[test]
fn reversed_orientation_swaps_self_dual_roles() {
    let spec = fubini_study();
    let flipped = fubini_study().with_orientation(-1);
    let chart = &spec.charts[0];
    for x in chart.sample_interior(10, 0.05, 31) {
        let point = curvature_at(&evaluate_jet(chart, x).unwrap()).unwrap();
        let b = decompose(&point, spec.orientation);
        let br = decompose(&point, flipped.orientation);
        // Kaehler spectrum (4, -2, -2) moves wholesale to the other half.
        assert!((b.lambda_max_plus - 4.0).abs() < 1e-9);
        assert!(b.weyl_minus_eigs.iter().all(|l| l.abs() < 1e-9));
        assert!((br.lambda_max_minus - 4.0).abs() < 1e-9);
        assert!(br.weyl_plus_eigs.iter().all(|l| l.abs() < 1e-9));
        // With the self-dual half empty, the one-sided quantity returns to
        // the full scalar curvature.
        assert!((br.sigma_plus - 24.0).abs() < 1e-9);
        assert!((b.sigma_plus - 0.0).abs() < 1e-9);
        // The two-sided quantity is orientation independent.
        assert!((b.sigma - br.sigma).abs() < 1e-12);
    }

    let report_flipped = functional_report(&flipped, 16).unwrap();
    assert!((report_flipped.chi_estimate - 3.0).abs() < 1e-8);
    let top = top_eigenvalue_comparison(&report_flipped);
    assert!((top.lhs - 8.0 * PI * PI).abs() / (8.0 * PI * PI) < 1e-9);
}

#[test]
fn reports_are_bitwise_reproducible() {
    // The parallel sweep must not let thread scheduling into the sums:
    // repeated evaluations agree bit for bit.
    let spec = fubini_study();
    let a = functional_report(&spec, 16).unwrap();
    let b = functional_report(&spec, 16).unwrap();
    let ja = serde_json::to_string(&a).unwrap();
    let jb = serde_json::to_string(&b).unwrap();
    assert_eq!(ja, jb);
}

#[test]
fn resolution_semantics_single_panel_then_composite() {
    // Below the single-panel cutoff the axis gets exactly m nodes of one
    // rule; above it the panel count is the ceiling of m over 12.
    use conformal4::quadrature::build_quadrature;
    let spec = round_sphere(1.0);
    for (m, expect) in [(8, 8), (16, 16), (17, 24), (24, 24), (30, 36)] {
        let q = build_quadrature(&spec.charts[0], m).unwrap();
        assert_eq!(q.axes[0].nodes.len(), expect, "m = {m}");
    }
}
