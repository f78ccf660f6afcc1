use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

/// One JSON object per run.
#[derive(Debug, Serialize)]
pub struct ExperimentRecord {
    pub command: String,
    pub parameters: Value,
    pub result: Value,
    /// Seconds.
    pub wall_time: f64,
    pub version: &'static str,
    /// Hex XXH64 of the graph file contents, when a graph was involved.
    pub graph_checksum: Option<String>,
}

impl ExperimentRecord {
    pub fn new(
        command: &str,
        parameters: Value,
        result: impl Serialize,
        started: Instant,
        checksum: Option<u64>,
    ) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            result: serde_json::to_value(result).expect("results serialize to JSON"),
            wall_time: started.elapsed().as_secs_f64(),
            version: env!("CARGO_PKG_VERSION"),
            graph_checksum: checksum.map(|c| format!("{c:016x}")),
        }
    }

    pub fn print(&self) {
        println!("{}", serde_json::to_string(self).expect("records serialize to JSON"));
    }
}
