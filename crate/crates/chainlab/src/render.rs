use serde_json::Value;

/// The results as a pretty-printed JSON array with a trailing newline.
pub fn to_json(results: &[Value]) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Array(results.to_vec())).expect("JSON values serialize");
    s.push('\n');
    s
}

fn summary(r: &Value) -> String {
    let pick = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if let Some(v) = r.get("value") {
        pick(v)
    } else if let Some(v) = r.get("report") {
        pick(v)
    } else if let Some(e) = r.get("error") {
        format!("line {}: {}", e["line"], pick(&e["message"]))
    } else {
        String::new()
    }
}

/// One row per result: status, query, and the value (or report, or error).
pub fn to_table(results: &[Value]) -> String {
    let rows: Vec<(String, String, String)> = results
        .iter()
        .map(|r| {
            let status = r["status"].as_str().unwrap_or("").to_string();
            let query = r["query"].as_str().unwrap_or("").to_string();
            (status, query, summary(r))
        })
        .collect();
    let w = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(0).min(60);
    let mut out = String::new();
    for (status, query, result) in rows {
        out.push_str(&format!("{status:<5}  {query:<w$}  {result}\n"));
    }
    out
}
