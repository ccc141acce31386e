//! Command reports and their text or JSON serialization.
//!
//! JSON object keys are sorted, so for fixed input the bytes are fixed.
//! Timings appear only on request.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: CommandEcho,
    pub exit_code: i32,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    /// Human-readable rendering of `result`.
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Report {
    pub fn new(command: CommandEcho, exit_code: i32, result: Value, text: Vec<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            exit_code,
            result,
            elapsed_ms: None,
            text,
        }
    }
}

pub fn emit(report: &Report, format: OutputFormat) -> Vec<u8> {
    let mut out = match format {
        OutputFormat::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        OutputFormat::Text => {
            let mut lines = report.text.clone();
            if let Some(ms) = report.elapsed_ms {
                lines.push(format!("elapsed: {ms:.3} ms"));
            }
            lines.join("\n")
        }
    };
    out.push('\n');
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn serialization_is_stable() {
        let echo = CommandEcho {
            name: "ann".into(),
            args: vec!["x.alg.json".into()],
        };
        let r = Report::new(echo, 0, json!({"rank": 0, "basis": []}), vec!["rank 0".into()]);
        let a = emit(&r, OutputFormat::Json);
        assert_eq!(a, emit(&r.clone(), OutputFormat::Json));
        let text = String::from_utf8(a).unwrap();
        assert!(text.find("\"basis\"").unwrap() < text.find("\"rank\"").unwrap());
        assert!(!text.contains("elapsed_ms"));
        assert_eq!(emit(&r, OutputFormat::Text), b"rank 0\n");
    }
}
