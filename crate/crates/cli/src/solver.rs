//! The `yamabe` command: reduce a symmetric manifold to its one-dimensional
//! profile grid, run the subcritical continuation, and report the stages,
//! the final quotient, and the positivity certificate of the transformed
//! modified scalar curvature.

use std::f64::consts::PI;

use conformal4::chart::MetricField;
use conformal4::grid::Grid;
use conformal4::yamabe::{
    continuation_schedule, continuation_to_critical, sigma_transform, SolveOptions,
};
use serde_json::{json, Value};

use crate::config::{self, InitialField};
use crate::emit::{emit_csv, emit_json, fmt_f64, Failure, EXIT_OK, EXIT_UNCONVERGED};
use crate::manifold;
use crate::recipe::Recipe;
use crate::{Format, YamabeCommand};

pub fn run(args: YamabeCommand) -> Result<u8, Failure> {
    let (spec, manifold_value) = manifold::resolve(&args.manifold)?;
    let cfg = config::load(args.config.as_deref())?;

    let cells = cfg.cells.unwrap_or(128);
    let chart = spec.chart(0)?;
    let (grid, geometry) = match &chart.metric {
        MetricField::FlatTorus => {
            let periods = [chart.width(0), chart.width(1), chart.width(2), chart.width(3)];
            (Grid::flat_torus([cells, 1, 1, 1], periods)?, "flat-torus-profile")
        }
        MetricField::RoundSphere { radius } => {
            (Grid::polar_sphere(cells, *radius)?, "sphere-polar-profile")
        }
        MetricField::ProductS3S1 { radius } => {
            (Grid::circle_fiber(cells, chart.width(3), *radius)?, "circle-fiber-profile")
        }
        _ => {
            return Err(Failure::precondition(format!(
                "no one-dimensional reduction for `{}`; supported manifolds: s4, t4, s3xs1",
                spec.name
            )))
        }
    };

    let schedule = cfg.s_schedule.clone().unwrap_or_else(continuation_schedule);
    let defaults = SolveOptions::default();
    let opts = SolveOptions {
        max_iterations: cfg.max_iterations.unwrap_or(defaults.max_iterations),
        gradient_tolerance: cfg.gradient_tolerance.unwrap_or(defaults.gradient_tolerance),
    };
    let initial_field = cfg.initial.clone().unwrap_or(InitialField::Constant);

    let width = chart.width(0);
    let initial: Vec<f64> = match &initial_field {
        InitialField::Constant => vec![1.0; grid.len()],
        InitialField::Cosine { amplitude } => {
            if amplitude.abs() >= 1.0 {
                return Err(Failure::precondition(
                    "cosine amplitude must keep the initial field positive (|amplitude| < 1)",
                ));
            }
            (0..grid.len())
                .map(|i| 1.0 + amplitude * (2.0 * PI * grid.coords(i)[0] / width).cos())
                .collect()
        }
    };

    let recipe = Recipe::new(
        "yamabe",
        json!({
            "manifold": manifold_value,
            "cells": cells,
            "s_schedule": schedule,
            "max_iterations": opts.max_iterations,
            "gradient_tolerance": opts.gradient_tolerance,
            "initial": serde_json::to_value(&initial_field).expect("initial serializes"),
        }),
    );

    let sigma = grid.sigma().into_owned();
    let outcome = continuation_to_critical(&grid, &sigma, &initial, &schedule, opts)?;
    let all_converged = outcome.stages.iter().all(|st| st.converged);

    let last = outcome.stages.last().expect("schedule is nonempty");
    let transformed = sigma_transform(&grid, &sigma, &last.minimizer)?;
    let min_transformed = transformed.iter().cloned().fold(f64::INFINITY, f64::min);
    let u_min = last.minimizer.iter().cloned().fold(f64::INFINITY, f64::min);
    let u_max = last.minimizer.iter().cloned().fold(0.0f64, f64::max);
    let sigma_scale = sigma.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
    // The transform divides `-6 lap u + sigma u` by u^3. Both terms carry
    // round-off proportional to their own size, and the discrete Laplacian
    // can amplify by its operator norm (at most (pi n / width)^2 for either
    // discretization), so below this floor the reported minimum is round-off,
    // not geometry.
    let lap_scale = (PI * cells as f64 / width).powi(2);
    let cancellation_floor = f64::EPSILON * (6.0 * lap_scale + sigma_scale) * u_max
        / (u_min * u_min * u_min);

    let stage_rows: Vec<Value> = outcome
        .stages
        .iter()
        .enumerate()
        .map(|(k, st)| {
            let max_u = st.minimizer.iter().cloned().fold(0.0f64, f64::max);
            json!({
                "step": k,
                "s": st.s,
                "quotient": st.quotient,
                "multiplier": st.multiplier,
                "iterations": st.iterations,
                "converged": st.converged,
                "gradient_norm": st.gradient_norm,
                "max_u": max_u,
            })
        })
        .collect();

    let result = json!({
        "manifold": spec.name,
        "geometry": geometry,
        "cells": cells,
        "volume": grid.volume(),
        "stages": stage_rows,
        "final_quotient": outcome.final_quotient,
        "all_converged": all_converged,
        "blow_up": outcome.blow_up,
        "sphere_threshold": 8.0 * 6.0f64.sqrt() * PI,
        "transform_certificate": {
            "min_sigma_transform": min_transformed,
            "positive_at_all_nodes": min_transformed > 0.0,
            "cancellation_floor": cancellation_floor,
            "sign_decidable": min_transformed.abs() > cancellation_floor,
            "u_min": u_min,
            "u_max": u_max,
        },
        "final_minimizer": last.minimizer,
    });

    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&recipe, result, args.output.out.as_deref())?,
        Format::Csv => {
            let header = ["step", "s", "F_s", "residual", "max_u"];
            let rows: Vec<Vec<String>> = outcome
                .stages
                .iter()
                .enumerate()
                .map(|(k, st)| {
                    let max_u = st.minimizer.iter().cloned().fold(0.0f64, f64::max);
                    vec![
                        k.to_string(),
                        fmt_f64(st.s),
                        fmt_f64(st.quotient),
                        fmt_f64(st.gradient_norm),
                        fmt_f64(max_u),
                    ]
                })
                .collect();
            emit_csv(&recipe, "yamabe-v1", &header, &rows, args.output.out.as_deref())?;
        }
    }

    Ok(if all_converged { EXIT_OK } else { EXIT_UNCONVERGED })
}
