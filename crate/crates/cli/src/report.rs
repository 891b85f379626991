//! Report assembly and rendering. Reports carry no timings, so equal
//! inputs and seed give byte-identical output.

use serde_json::{json, Value};

use crate::docs::{Workspace, VERSION};

pub fn report(ws: &Workspace, command: &str, seed: u64, result: Value) -> Value {
    let inputs: Vec<Value> = ws
        .inputs
        .iter()
        .map(|(role, sha)| json!({"role": role, "sha256": sha}))
        .collect();
    json!({
        "kind": "report",
        "version": VERSION,
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "result": result,
    })
}

pub fn render_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// One line per result field; nested values stay compact JSON.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    out.push_str(&format!("command: {}\n", report["command"].as_str().unwrap_or("?")));
    for input in report["inputs"].as_array().into_iter().flatten() {
        out.push_str(&format!(
            "input {}: {}\n",
            input["role"].as_str().unwrap_or("?"),
            input["sha256"].as_str().unwrap_or("?")
        ));
    }
    out.push_str(&format!("seed: {}\n", report["seed"]));
    let result = &report["result"];
    if let Some(table) = result.get("suites").and_then(Value::as_array) {
        out.push_str(&suite_table(table));
        if let Some(ok) = result.get("passed") {
            out.push_str(&format!("passed: {ok}\n"));
        }
        return out;
    }
    match result.as_object() {
        Some(fields) => {
            for (k, v) in fields {
                match v {
                    Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                    other => out.push_str(&format!("{k}: {other}\n")),
                }
            }
        }
        None => out.push_str(&format!("result: {result}\n")),
    }
    out
}

fn suite_table(rows: &[Value]) -> String {
    let mut out = format!("{:<22} {:>9} {:>7} {:>7}  status\n", "suite", "criterion", "checks", "failed");
    for r in rows {
        let criterion = r["criterion"].as_u64().map_or_else(|| "-".to_string(), |c| c.to_string());
        let status = if r["passed"].as_bool() == Some(true) { "pass" } else { "FAIL" };
        out.push_str(&format!(
            "{:<22} {:>9} {:>7} {:>7}  {}\n",
            r["name"].as_str().unwrap_or("?"),
            criterion,
            r["checks"].as_u64().unwrap_or(0),
            r["failed"].as_u64().unwrap_or(0),
            status
        ));
    }
    out
}
