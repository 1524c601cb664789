//! Versioned JSON scenario files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sim::Scenario;

/// The only file format version understood.
pub const FORMAT_VERSION: u32 = 1;

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    /// Write `timeseries.csv` next to the summary.
    #[serde(default = "yes")]
    pub timeseries: bool,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self { timeseries: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub scenario: Scenario,
    #[serde(default)]
    pub output: OutputOptions,
}

impl ScenarioFile {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            version: FORMAT_VERSION,
            scenario,
            output: OutputOptions::default(),
        }
    }

    /// Parse and validate a document.
    pub fn parse(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(invalid(format!(
                "unsupported version {} (expected {FORMAT_VERSION})",
                self.version
            )));
        }
        self.scenario.validate()
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario files always serialize");
        s.push('\n');
        s
    }
}
