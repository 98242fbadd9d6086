//! Aligned text rendering of a JSON report. Leaves are printed with the same
//! JSON encoding, so text and JSON output carry identical values.

use serde_json::Value;

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, child) in m {
                flatten(&key(k), child, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), child, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn text(report: &Value) -> String {
    if let Some(criteria) = report.get("criteria").and_then(Value::as_array) {
        return criteria.iter().map(criterion_line).collect();
    }
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn criterion_line(c: &Value) -> String {
    let verdict = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
    format!(
        "{verdict} criterion {:>2} {:<24} {}\n",
        c["id"],
        c["name"].as_str().unwrap_or(""),
        c["detail"].as_str().unwrap_or("")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn aligned_leaves() {
        let v = json!({"name": "GHZ", "local_ranks": [2, 2, 2], "diagnostics": {"det3": "1/4"}});
        assert_eq!(text(&v), "diagnostics.det3  1/4\nlocal_ranks       [2,2,2]\nname              GHZ\n");
    }
}
