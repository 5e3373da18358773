//! Sample-point commands: `curvature` (tensor magnitudes), `decompose` (Weyl
//! eigenvalues and modified scalar curvatures), and `pic` (the positivity
//! verdict with its margin).

use conformal4::chart::ManifoldSpec;
use conformal4::curvature::curvature_at;
use conformal4::decomp::{decompose, CurvatureBlocks};
use conformal4::jet::evaluate_jet;
use serde_json::{json, Value};

use crate::config;
use crate::emit::{emit_csv, emit_json, fmt_f64, Failure, EXIT_OK};
use crate::manifold;
use crate::recipe::Recipe;
use crate::{Format, PicCommand, SampleCommand, SigmaMode};

struct Sample {
    x: [f64; 4],
    point: conformal4::Curvature,
    blocks: CurvatureBlocks<f64>,
}

struct SampleSet {
    samples: usize,
    seed: u64,
    interior_margin: f64,
    rows: Vec<Sample>,
}

fn collect(
    spec: &ManifoldSpec,
    cfg: &config::RunConfig,
    default_samples: usize,
) -> Result<SampleSet, Failure> {
    let samples = cfg.samples.unwrap_or(default_samples);
    let seed = cfg.seed.unwrap_or(7);
    let interior_margin = cfg.interior_margin.unwrap_or(0.03);
    if samples == 0 {
        return Err(Failure::precondition("samples must be positive"));
    }
    if !(0.0..0.5).contains(&interior_margin) {
        return Err(Failure::precondition("interior_margin must lie in [0, 0.5)"));
    }
    let chart = spec.chart(0)?;
    let mut rows = Vec::with_capacity(samples);
    for x in chart.sample_interior(samples, interior_margin, seed) {
        let jet = evaluate_jet(chart, x)?;
        let point = curvature_at(&jet)?;
        let blocks = decompose(&point, spec.orientation);
        rows.push(Sample { x, point, blocks });
    }
    Ok(SampleSet { samples, seed, interior_margin, rows })
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

fn sampling_parameters(set: &SampleSet) -> Value {
    json!({
        "samples": set.samples,
        "seed": set.seed,
        "interior_margin": set.interior_margin,
    })
}

pub fn run_curvature(args: SampleCommand) -> Result<u8, Failure> {
    let (spec, manifold_value) = manifold::resolve(&args.manifold)?;
    let cfg = config::load(args.config.as_deref())?;
    let set = collect(&spec, &cfg, 64)?;

    let recipe = Recipe::new(
        "curvature",
        json!({ "manifold": manifold_value, "sampling": sampling_parameters(&set) }),
    );

    let (scalar_lo, scalar_hi) = range(set.rows.iter().map(|s| s.point.scalar));
    let (ricci_lo, ricci_hi) = range(set.rows.iter().map(|s| s.point.trace_free_ricci_norm2));
    let (rm_lo, rm_hi) = range(set.rows.iter().map(|s| s.point.riemann_norm2));
    let bianchi_max =
        set.rows.iter().map(|s| s.point.bianchi_residual).fold(0.0f64, f64::max);

    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let points: Vec<Value> = set
                .rows
                .iter()
                .map(|s| {
                    json!({
                        "x": s.x,
                        "scalar": s.point.scalar,
                        "trace_free_ricci_norm2": s.point.trace_free_ricci_norm2,
                        "riemann_norm2": s.point.riemann_norm2,
                        "weyl_plus_norm2": s.blocks.weyl_plus_norm2(),
                        "weyl_minus_norm2": s.blocks.weyl_minus_norm2(),
                    })
                })
                .collect();
            let result = json!({
                "manifold": spec.name,
                "orientation": spec.orientation,
                "sampling": sampling_parameters(&set),
                "summary": {
                    "scalar": { "min": scalar_lo, "max": scalar_hi },
                    "trace_free_ricci_norm2": { "min": ricci_lo, "max": ricci_hi },
                    "riemann_norm2": { "min": rm_lo, "max": rm_hi },
                    "bianchi_residual_max": bianchi_max,
                },
                "points": points,
            });
            emit_json(&recipe, result, args.output.out.as_deref())?;
        }
        Format::Csv => {
            let header = [
                "x0",
                "x1",
                "x2",
                "x3",
                "scalar",
                "trace_free_ricci_norm2",
                "riemann_norm2",
                "weyl_plus_norm2",
                "weyl_minus_norm2",
            ];
            let rows: Vec<Vec<String>> = set
                .rows
                .iter()
                .map(|s| {
                    let mut row: Vec<String> = s.x.iter().map(|&v| fmt_f64(v)).collect();
                    row.push(fmt_f64(s.point.scalar));
                    row.push(fmt_f64(s.point.trace_free_ricci_norm2));
                    row.push(fmt_f64(s.point.riemann_norm2));
                    row.push(fmt_f64(s.blocks.weyl_plus_norm2()));
                    row.push(fmt_f64(s.blocks.weyl_minus_norm2()));
                    row
                })
                .collect();
            emit_csv(&recipe, "curvature-v1", &header, &rows, args.output.out.as_deref())?;
        }
    }
    Ok(EXIT_OK)
}

pub fn run_decompose(args: SampleCommand) -> Result<u8, Failure> {
    let (spec, manifold_value) = manifold::resolve(&args.manifold)?;
    let cfg = config::load(args.config.as_deref())?;
    let set = collect(&spec, &cfg, 64)?;

    let recipe = Recipe::new(
        "decompose",
        json!({ "manifold": manifold_value, "sampling": sampling_parameters(&set) }),
    );

    let (sigma_lo, sigma_hi) = range(set.rows.iter().map(|s| s.blocks.sigma));
    let (plus_lo, plus_hi) = range(set.rows.iter().map(|s| s.blocks.sigma_plus));
    let margin_min = set.rows.iter().map(|s| s.blocks.pic_margin).fold(f64::INFINITY, f64::min);

    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let points: Vec<Value> = set
                .rows
                .iter()
                .map(|s| {
                    json!({
                        "x": s.x,
                        "scalar": s.blocks.scalar,
                        "weyl_plus_eigs": s.blocks.weyl_plus_eigs,
                        "weyl_minus_eigs": s.blocks.weyl_minus_eigs,
                        "sigma": s.blocks.sigma,
                        "sigma_plus": s.blocks.sigma_plus,
                        "pic_margin": s.blocks.pic_margin,
                    })
                })
                .collect();
            let result = json!({
                "manifold": spec.name,
                "orientation": spec.orientation,
                "sampling": sampling_parameters(&set),
                "summary": {
                    "sigma": { "min": sigma_lo, "max": sigma_hi },
                    "sigma_plus": { "min": plus_lo, "max": plus_hi },
                    "pic_margin_min": margin_min,
                },
                "points": points,
            });
            emit_json(&recipe, result, args.output.out.as_deref())?;
        }
        Format::Csv => {
            let header = [
                "x0", "x1", "x2", "x3", "scalar", "wp1", "wp2", "wp3", "wm1", "wm2", "wm3",
                "sigma", "sigma_plus", "pic_margin",
            ];
            let rows: Vec<Vec<String>> = set
                .rows
                .iter()
                .map(|s| {
                    let mut row: Vec<String> = s.x.iter().map(|&v| fmt_f64(v)).collect();
                    row.push(fmt_f64(s.blocks.scalar));
                    row.extend(s.blocks.weyl_plus_eigs.iter().map(|&v| fmt_f64(v)));
                    row.extend(s.blocks.weyl_minus_eigs.iter().map(|&v| fmt_f64(v)));
                    row.push(fmt_f64(s.blocks.sigma));
                    row.push(fmt_f64(s.blocks.sigma_plus));
                    row.push(fmt_f64(s.blocks.pic_margin));
                    row
                })
                .collect();
            emit_csv(&recipe, "decompose-v1", &header, &rows, args.output.out.as_deref())?;
        }
    }
    Ok(EXIT_OK)
}

pub fn run_pic(args: PicCommand) -> Result<u8, Failure> {
    let (spec, manifold_value) = manifold::resolve(&args.manifold)?;
    let cfg = config::load(args.config.as_deref())?;
    let set = collect(&spec, &cfg, 1000)?;
    let mode = match args.sigma_mode {
        SigmaMode::Full => "full",
        SigmaMode::Plus => "plus",
    };

    let recipe = Recipe::new(
        "pic",
        json!({
            "manifold": manifold_value,
            "sampling": sampling_parameters(&set),
            "sigma_mode": mode,
        }),
    );

    let selected = |s: &Sample| match args.sigma_mode {
        SigmaMode::Full => s.blocks.sigma,
        SigmaMode::Plus => s.blocks.sigma_plus,
    };
    let (sigma_lo, sigma_hi) = range(set.rows.iter().map(selected));
    let scalar_scale =
        set.rows.iter().map(|s| s.blocks.scalar.abs()).fold(1.0f64, f64::max);
    let tol = 1e-9 * scalar_scale;
    let verdict = if sigma_lo > tol {
        "positive"
    } else if sigma_lo >= -tol {
        "nonnegative"
    } else {
        "indefinite"
    };

    let result = json!({
        "manifold": spec.name,
        "orientation": spec.orientation,
        "sigma_mode": mode,
        "sampling": sampling_parameters(&set),
        "sigma_min": sigma_lo,
        "sigma_max": sigma_hi,
        "margin_min": sigma_lo / 6.0,
        "margin_max": sigma_hi / 6.0,
        "tolerance": tol,
        "verdict": verdict,
    });

    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&recipe, result, args.output.out.as_deref())?,
        Format::Csv => {
            let header =
                ["manifold", "orientation", "sigma_mode", "sigma_min", "sigma_max", "margin_min", "verdict"];
            let rows = vec![vec![
                spec.name.clone(),
                spec.orientation.to_string(),
                mode.to_string(),
                fmt_f64(sigma_lo),
                fmt_f64(sigma_hi),
                fmt_f64(sigma_lo / 6.0),
                verdict.to_string(),
            ]];
            emit_csv(&recipe, "pic-v1", &header, &rows, args.output.out.as_deref())?;
        }
    }
    Ok(EXIT_OK)
}
