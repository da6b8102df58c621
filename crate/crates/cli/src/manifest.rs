use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::render::Format;

/// Everything that determines a run's output. Two runs with equal manifests
/// write identical bytes apart from the timestamp line.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: String,
    /// fixed order per command, so the output is reproducible
    #[serde(serialize_with = "ordered_map")]
    pub parameters: Vec<(String, String)>,
    pub format: Format,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, config: String, parameters: Vec<(String, String)>, format: Format) -> Self {
        RunManifest {
            tool: env!("CARGO_BIN_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            parameters,
            format,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    /// Header lines for text and CSV output; the timestamp always comes last.
    pub fn comment_lines(&self) -> Vec<String> {
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        vec![
            format!("{} {} {}", self.tool, self.version, self.command),
            format!("config: {}", self.config),
            format!("parameters: {}", params.join(" ")),
            format!("format: {}", serde_json::to_value(self.format).unwrap().as_str().unwrap_or("")),
            format!("timestamp: {}", self.timestamp),
        ]
    }
}

fn ordered_map<S: Serializer>(pairs: &[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        map.serialize_entry(k, v)?;
    }
    map.end()
}
