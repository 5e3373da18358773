//! Quadrature commands: `gbchern` (the Euler characteristic from curvature)
//! and `invariant` (the full integrated report with spectral comparisons).

use conformal4::report::{functional_report, top_eigenvalue_comparison, weyl_energy_comparison};
use serde_json::json;

use crate::emit::{emit_csv, emit_json, fmt_f64, Failure, EXIT_OK};
use crate::manifold;
use crate::recipe::Recipe;
use crate::{Format, IntegralCommand};

const DEFAULT_RESOLUTION: usize = 24;

pub fn run_gbchern(args: IntegralCommand) -> Result<u8, Failure> {
    let (spec, manifold_value) = manifold::resolve(&args.manifold)?;
    let m = args.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let recipe =
        Recipe::new("gbchern", json!({ "manifold": manifold_value, "resolution": m }));

    let report = functional_report(&spec, m)?;
    let chi_nearest = report.chi_estimate.round();
    let result = json!({
        "manifold": report.manifold,
        "orientation": report.orientation,
        "resolution": report.resolution,
        "node_count": report.node_count,
        "volume": report.volume,
        "chi_estimate": report.chi_estimate,
        "chi_nearest": chi_nearest,
        "chi_distance": (report.chi_estimate - chi_nearest).abs(),
        "chi_half_resolution": report.chi_half_resolution,
    });

    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&recipe, result, args.output.out.as_deref())?,
        Format::Csv => {
            let header = ["manifold", "orientation", "resolution", "node_count", "volume", "chi_estimate", "chi_nearest", "chi_distance"];
            let rows = vec![vec![
                report.manifold.clone(),
                report.orientation.to_string(),
                report.resolution.to_string(),
                report.node_count.to_string(),
                fmt_f64(report.volume),
                fmt_f64(report.chi_estimate),
                fmt_f64(chi_nearest),
                fmt_f64((report.chi_estimate - chi_nearest).abs()),
            ]];
            emit_csv(&recipe, "gbchern-v1", &header, &rows, args.output.out.as_deref())?;
        }
    }
    Ok(EXIT_OK)
}

pub fn run_invariant(args: IntegralCommand) -> Result<u8, Failure> {
    let (spec, manifold_value) = manifold::resolve(&args.manifold)?;
    let m = args.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let recipe =
        Recipe::new("invariant", json!({ "manifold": manifold_value, "resolution": m }));

    let report = functional_report(&spec, m)?;
    let weyl = weyl_energy_comparison(&report);
    let top = top_eigenvalue_comparison(&report);

    let mut result = serde_json::to_value(&report).expect("report serializes");
    let obj = result.as_object_mut().expect("report is an object");
    obj.insert(
        "weyl_energy_vs_quotient".into(),
        serde_json::to_value(&weyl).expect("comparison serializes"),
    );
    obj.insert(
        "top_eigenvalue_vs_quotient".into(),
        serde_json::to_value(&top).expect("comparison serializes"),
    );

    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&recipe, result, args.output.out.as_deref())?,
        Format::Csv => {
            let header = [
                "manifold",
                "orientation",
                "resolution",
                "volume",
                "total_scalar",
                "yamabe_quotient",
                "chi_estimate",
                "weyl_plus_l2",
                "weyl_minus_l2",
                "lambda_max_sq_integral",
                "sigma_integral",
                "sigma_min",
            ];
            let rows = vec![vec![
                report.manifold.clone(),
                report.orientation.to_string(),
                report.resolution.to_string(),
                fmt_f64(report.volume),
                fmt_f64(report.total_scalar),
                fmt_f64(report.yamabe_quotient),
                fmt_f64(report.chi_estimate),
                fmt_f64(report.weyl_plus_l2),
                fmt_f64(report.weyl_minus_l2),
                fmt_f64(report.lambda_max_sq_integral),
                fmt_f64(report.sigma_integral),
                fmt_f64(report.sigma_min),
            ]];
            emit_csv(&recipe, "invariant-v1", &header, &rows, args.output.out.as_deref())?;
        }
    }
    Ok(EXIT_OK)
}

/// Shared so the catalog can reuse the same integral pipeline.
pub fn catalog_report(
    spec: &conformal4::chart::ManifoldSpec,
    m: usize,
) -> Result<conformal4::report::FunctionalReport, Failure> {
    Ok(functional_report(spec, m)?)
}
