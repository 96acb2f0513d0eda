//! Reproducibility header attached to every output.

use serde::Serialize;

use crate::Command;

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    /// From `SOURCE_DATE_EPOCH` when set; otherwise omitted so reruns are byte-identical.
    pub timestamp: Option<String>,
}

impl Manifest {
    pub fn capture(cmd: &Command) -> Self {
        let (subcommand, seed) = match cmd {
            Command::Layout { .. } => ("layout", None),
            Command::Encode { .. } => ("encode", None),
            Command::Compile { .. } => ("compile", None),
            Command::Simulate { seed, .. } => ("simulate", Some(*seed)),
            Command::Verify { seed, .. } => ("verify", Some(*seed)),
            Command::Errors { seed, mc, .. } => ("errors", mc.map(|_| *seed)),
        };
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            args: std::env::args().skip(1).collect(),
            seed,
            timestamp: std::env::var("SOURCE_DATE_EPOCH").ok(),
        }
    }

    /// The manifest as a single `# {...}` comment line.
    pub fn comment_line(&self) -> String {
        format!("# {}\n", serde_json::to_string(self).expect("manifest serializes"))
    }
}
