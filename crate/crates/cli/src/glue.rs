//! The `glue` command: sweep connected-sum neck lengths, minimizing on each
//! glued manifold, cutting at the cheapest cross-section, transplanting onto
//! the disjoint union, and reporting the quotient gaps with an inverse-length
//! fit.

use conformal4::gluing::{fit_inverse_law, neck_length_sweep, GapOptions};
use conformal4::yamabe::SolveOptions;
use serde_json::json;

use crate::config;
use crate::emit::{emit_csv, emit_json, fmt_f64, Failure, EXIT_OK, EXIT_UNCONVERGED};
use crate::recipe::Recipe;
use crate::{Format, GlueCommand};

pub fn run(args: GlueCommand) -> Result<u8, Failure> {
    let cfg = config::load(args.config.as_deref())?;

    let defaults = GapOptions::default();
    let radius = cfg.radius.unwrap_or(1.0);
    let delta = cfg.delta.unwrap_or(0.6);
    let lengths = cfg.lengths.clone().unwrap_or_else(|| vec![4.0, 8.0, 12.0, 16.0]);
    let opts = GapOptions {
        cells: cfg.cells.unwrap_or(defaults.cells),
        exponent: cfg.exponent.unwrap_or(defaults.exponent),
        solve: SolveOptions {
            max_iterations: cfg.max_iterations.unwrap_or(defaults.solve.max_iterations),
            gradient_tolerance: cfg
                .gradient_tolerance
                .unwrap_or(defaults.solve.gradient_tolerance),
        },
    };

    let recipe = Recipe::new(
        "glue",
        json!({
            "radius": radius,
            "delta": delta,
            "lengths": lengths,
            "cells": opts.cells,
            "exponent": opts.exponent,
            "max_iterations": opts.solve.max_iterations,
            "gradient_tolerance": opts.solve.gradient_tolerance,
        }),
    );

    let reports = neck_length_sweep(radius, delta, &lengths, opts)?;
    let all_converged = reports.iter().all(|r| r.converged);
    let gaps: Vec<f64> = reports.iter().map(|r| r.gap).collect();
    let (fit_c, fit_rms) = fit_inverse_law(&lengths, &gaps);

    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let result = json!({
                "radius": radius,
                "delta": delta,
                "cells": opts.cells,
                "exponent": opts.exponent,
                "reports": serde_json::to_value(&reports).expect("reports serialize"),
                "inverse_law_fit": { "c": fit_c, "rms": fit_rms },
                "all_converged": all_converged,
            });
            emit_json(&recipe, result, args.output.out.as_deref())?;
        }
        Format::Csv => {
            let header = ["l", "mu", "slice_energy", "gap"];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        fmt_f64(r.neck_length),
                        fmt_f64(r.glued_quotient),
                        fmt_f64(r.slice_energy),
                        fmt_f64(r.gap),
                    ]
                })
                .collect();
            emit_csv(&recipe, "glue-v1", &header, &rows, args.output.out.as_deref())?;
        }
    }

    Ok(if all_converged { EXIT_OK } else { EXIT_UNCONVERGED })
}
