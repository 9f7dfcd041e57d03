use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

/// What every verb returns. `elapsed_ms` is only serialized with `--timing` so
/// that plain `--json` output is reproducible byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub verb: String,
    pub status: Status,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    #[serde(skip)]
    pub summary: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    pub fn new(verb: &str, status: Status, summary: impl Into<String>, details: Value) -> Self {
        Self {
            verb: verb.to_string(),
            status,
            details,
            elapsed_ms: None,
            summary: summary.into(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn error(verb: &str, msg: impl std::fmt::Display) -> Self {
        let msg = msg.to_string();
        Self::new(
            verb,
            Status::Error,
            msg.clone(),
            serde_json::json!({ "error": msg }),
        )
    }

    pub fn emit(&self, json: bool, timing: bool) {
        if json {
            let mut out = self.clone();
            if timing {
                out.elapsed_ms = Some(self.elapsed.as_millis());
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("report serializes")
            );
            return;
        }
        match self.status {
            Status::Error => eprintln!("error: {}: {}", self.verb, self.summary),
            _ => println!("{}", self.summary),
        }
        if timing {
            eprintln!("elapsed: {} ms", self.elapsed.as_millis());
        }
    }
}
