//! The resolved recipe: everything that determines a run's output, gathered
//! into one serializable value. Its SHA-256 fingerprint goes into every
//! report, so identical inputs are recognizably identical and anything that
//! changes the numbers changes the hash.
//!
//! File references are resolved to their *contents* before fingerprinting:
//! moving a document does not change the recipe, editing it does.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub struct Recipe {
    pub command: &'static str,
    /// Fully resolved parameters: manifold document, effective config with
    /// defaults filled in, resolution, orientation, and so on.
    pub parameters: Value,
}

impl Recipe {
    pub fn new(command: &'static str, parameters: Value) -> Recipe {
        Recipe { command, parameters }
    }

    /// Canonical bytes: compact JSON of (command, parameters) with sorted
    /// keys, which `serde_json::Value` maps provide by construction.
    fn canonical(&self) -> String {
        let doc = json!({ "command": self.command, "parameters": self.parameters });
        serde_json::to_string(&doc).expect("recipe serializes")
    }

    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    /// The metadata block embedded in every JSON report.
    pub fn meta(&self) -> Value {
        let mut m = Map::new();
        m.insert("tool".into(), "conformal4".into());
        m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        m.insert("recipe_fingerprint".into(), self.fingerprint().into());
        m.insert("parameters".into(), self.parameters.clone());
        Value::Object(m)
    }
}
