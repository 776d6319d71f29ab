use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Everything that determines a run's output. Embedded verbatim in every
/// record so that a run can be repeated exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    /// Command parameters, keyed by flag name, in canonical text form.
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub precision: u32,
    pub precision_cap: u32,
    pub budget: u64,
    pub tail_window: usize,
    pub jobs: Option<usize>,
    pub out_dir: Option<String>,
    pub format: Format,
}

/// The header every JSON output starts with.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord<'a> {
    pub schema: &'static str,
    pub freqlab_version: &'static str,
    pub config: &'a RunConfig,
}

impl RunConfig {
    pub fn record(&self, schema: &'static str) -> RunRecord<'_> {
        RunRecord {
            schema,
            freqlab_version: VERSION,
            config: self,
        }
    }
}
