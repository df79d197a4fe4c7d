//! Report envelope and the two output formats.
//!
//! serde_json's default map is ordered by key, so the JSON output of a given
//! invocation is byte-identical across runs.

use serde_json::{json, Value};

use crate::input::MatrixInput;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// How a command finished, mapped onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Undecided,
    Violation,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Undecided => 3,
            Status::Violation => 4,
        }
    }
}

pub struct Outcome {
    pub result: Value,
    pub status: Status,
}

impl Outcome {
    pub fn ok(result: Value) -> Self {
        Outcome {
            result,
            status: Status::Ok,
        }
    }
}

pub fn envelope(command: &str, inputs: &[&MatrixInput], outcome: &Outcome) -> Value {
    let inputs: Vec<Value> = inputs
        .iter()
        .map(|m| {
            json!({
                "label": m.label,
                "sha256": m.sha256(),
                "size": m.adj.size(),
            })
        })
        .collect();
    json!({
        "command": command,
        "version": sftdim::VERSION,
        "inputs": inputs,
        "status": match outcome.status {
            Status::Ok => "ok",
            Status::Undecided => "undecided",
            Status::Violation => "violation",
        },
        "result": outcome.result,
    })
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            flatten("", report, &mut out);
            out
        }
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        // lists of numbers, strings and nested lists of those print inline
        Value::Array(items) => items.iter().all(|x| !x.is_object() && is_leaf(x)),
        _ => true,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) if !is_leaf(v) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        Value::Null => out.push_str(&format!("{prefix}: -\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_flattening() {
        let v = json!({"b": {"x": [[1, 2], [3, 4]], "y": "z"}, "a": [{"k": null}], "c": 1.5});
        assert_eq!(
            render(&v, Format::Text),
            "a.0.k: -\nb.x: [[1,2],[3,4]]\nb.y: z\nc: 1.5\n"
        );
    }
}
