//! JSON run configs. One optional-field document serves every command; each
//! command reads the fields it uses and records the effective values (with
//! defaults filled in) into the recipe. Unknown fields are rejected so typos
//! fail loudly instead of silently running defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::emit::Failure;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    // Point sampling.
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    /// Relative margin kept away from open-axis chart endpoints when sampling.
    pub interior_margin: Option<f64>,

    // One-dimensional solver.
    pub cells: Option<usize>,
    pub s_schedule: Option<Vec<f64>>,
    pub max_iterations: Option<usize>,
    pub gradient_tolerance: Option<f64>,
    pub initial: Option<InitialField>,

    // Connected-sum sweep.
    pub radius: Option<f64>,
    pub delta: Option<f64>,
    pub lengths: Option<Vec<f64>>,
    pub exponent: Option<f64>,
}

/// Initial field for the constrained descent.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialField {
    /// `u = 1` everywhere.
    Constant,
    /// `u = 1 + amplitude * cos(2 pi x0 / width)` over the grid's first axis.
    Cosine { amplitude: f64 },
}

/// Read and parse the config document, or produce the empty config.
pub fn load(path: Option<&Path>) -> Result<RunConfig, Failure> {
    let Some(path) = path else { return Ok(RunConfig::default()) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::parse(format!("config {}: {e}", path.display())))
}
