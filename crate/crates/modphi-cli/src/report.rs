//! Output envelope. Every file carries `schema: 1` and the run configuration
//! that produced it; nothing time- or host-dependent is written.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;
pub const DEFAULT_BUDGET: f64 = 1e10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    /// Arguments after the program name, verbatim, for replay.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub budget: f64,
    pub output: Format,
    pub path: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    Exact,
    BruteForce,
    MonteCarlo,
    Closed,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub model: String,
    pub params: Value,
    pub estimate: f64,
    pub oracle: Option<f64>,
    pub oracle_kind: Option<OracleKind>,
    pub stderr: Option<f64>,
    pub ratio: Option<f64>,
    pub flags: Vec<String>,
}

impl ComparisonRow {
    pub fn new(model: &str, params: Value, estimate: f64) -> Self {
        Self {
            model: model.into(),
            params,
            estimate,
            oracle: None,
            oracle_kind: None,
            stderr: None,
            ratio: None,
            flags: vec![],
        }
    }

    pub fn against(mut self, oracle: f64, kind: OracleKind) -> Self {
        self.oracle = Some(oracle);
        self.oracle_kind = Some(kind);
        self.ratio = (oracle != 0.0).then(|| self.estimate / oracle);
        self
    }

    pub fn with_stderr(mut self, se: f64) -> Self {
        self.stderr = Some(se);
        self
    }

    pub fn with_flags(mut self, flags: &[String]) -> Self {
        self.flags = flags.to_vec();
        self
    }
}

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: u32,
    pub config: &'a RunConfig,
    pub result: T,
}

pub fn to_json<T: Serialize>(config: &RunConfig, result: T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, config, result })?;
    s.push('\n');
    Ok(s)
}

/// CSV with a leading comment line holding the JSON-encoded configuration.
pub fn to_csv(config: &RunConfig, header: &[&str], rows: &[Vec<f64>]) -> serde_json::Result<String> {
    let mut s = format!("# schema={SCHEMA} config={}\n", serde_json::to_string(config)?);
    s.push_str(&header.join(","));
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:.10e}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    Ok(s)
}
