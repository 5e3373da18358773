//! Resolution of the `--manifold` flag: a catalog name or a path to a
//! manifold JSON document, combined with the `--orientation` flag. Returns
//! both the resolved `ManifoldSpec` and the recipe value that identifies it.

use conformal4::chart::{by_name, spec_from_json, ManifoldSpec};
use serde_json::{json, Value};

use crate::emit::Failure;
use crate::ManifoldArgs;

pub fn resolve(args: &ManifoldArgs) -> Result<(ManifoldSpec, Value), Failure> {
    let orientation = match args.orientation.as_deref() {
        None => 1,
        Some("+") | Some("+1") => 1,
        Some("-") | Some("-1") => -1,
        Some(other) => {
            return Err(Failure::precondition(format!(
                "orientation must be + or -, got `{other}`"
            )))
        }
    };

    if let Some(spec) = by_name(&args.manifold) {
        let spec = spec.with_orientation(orientation);
        let value = json!({ "catalog": args.manifold, "orientation": orientation });
        return Ok((spec, value));
    }

    let path = std::path::Path::new(&args.manifold);
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::parse(format!(
            "`{}` is not a catalog name (s4, t4, s3xs1, cp2-fs, s2xs2) and cannot be read as a file: {e}",
            args.manifold
        ))
    })?;
    let spec = spec_from_json(&text)?;
    let spec = if args.orientation.is_some() { spec.with_orientation(orientation) } else { spec };

    // Custom charts carry arbitrary coefficient expressions; probe positive
    // definiteness at seeded interior points before running anything on them.
    conformal4::chart::check_positive_definite::<f64>(&spec, 16, 0x9e3779b9)?;

    // Embed the parsed document (not the path) so the fingerprint follows the
    // content.
    let document: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::parse(format!("manifold document {}: {e}", path.display())))?;
    let value = json!({ "document": document, "orientation": spec.orientation });
    Ok((spec, value))
}
