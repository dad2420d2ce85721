use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use ihara_core::Error;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String, std::io::Error),
}

impl CliError {
    /// 2 input validation, 3 resource limit, 4 numeric non-convergence.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::ResourceLimit(_)) => 3,
            CliError::Core(Error::NonConvergence(_)) => 4,
            CliError::Core(_) | CliError::Io(..) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// What produced an output file. Wall time is printed with the summary
/// but kept out of the file so that equal manifests give equal bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub tool_version: String,
    /// SHA-256 of each input file, keyed by role.
    pub inputs: BTreeMap<String, String>,
    pub flags: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: BTreeMap::new(),
            flags: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn flag(&mut self, name: &str, value: impl Serialize) {
        self.flags
            .insert(name.to_string(), serde_json::to_value(value).expect("flag values serialize"));
    }

    /// Reads an input file and records its digest.
    pub fn read_input(&mut self, role: &str, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        self.inputs.insert(role.to_string(), hex::encode(Sha256::digest(&bytes)));
        String::from_utf8(bytes).map_err(|e| {
            CliError::Io(
                path.display().to_string(),
                std::io::Error::new(std::io::ErrorKind::InvalidData, e),
            )
        })
    }
}

pub struct Output {
    /// Canonical file contents.
    pub body: String,
    /// Human summary printed when the body goes to a file.
    pub summary: String,
    /// Set when the run completed but a numeric check failed.
    pub failure: Option<CliError>,
}

pub fn json_report(manifest: &RunManifest, result: Value) -> String {
    let mut body = serde_json::to_string_pretty(&serde_json::json!({
        "manifest": manifest,
        "result": result,
    }))
    .expect("reports serialize");
    body.push('\n');
    body
}

/// Integers as JSON numbers when they fit in an `i64`, otherwise as decimal strings.
pub fn int_value(s: String) -> Value {
    match s.parse::<i64>() {
        Ok(i) => Value::from(i),
        Err(_) => Value::String(s),
    }
}

pub fn complex_value(z: num_complex::Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}
