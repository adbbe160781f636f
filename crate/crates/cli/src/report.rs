//! Report assembly: JSON with stable key order, CSV with a header row, every
//! float rounded to 12 significant digits.

use colombeau_core::ScalingFit;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::Path;

/// Key of the run timestamp, the one field excluded from determinism.
pub const TIMESTAMP_KEY: &str = "generated_unix";

/// `v` rounded to 12 significant digits; non-finite values become strings.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        let r: f64 = format!("{v:.11e}").parse().unwrap_or(v);
        json!(if r == 0.0 { 0.0 } else { r })
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| num(*x)).collect())
}

/// CSV cell for a float.
pub fn csv_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Ok,
    Degraded,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Ok => "OK",
            Status::Degraded => "DEGRADED",
            Status::Error => "ERROR",
        }
    }

    pub fn verdict(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitRow {
    pub object: String,
    pub key: String,
    pub fit: ScalingFit,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    pub result: Map<String, Value>,
    pub witnesses: Vec<Value>,
    pub fits: Vec<FitRow>,
    /// `(name, content)` of a `wf_<name>.json` file.
    pub wavefront: Option<(String, Value)>,
}

impl Outcome {
    pub fn new(status: Status, summary: impl Into<String>) -> Self {
        Self { status, summary: summary.into(), result: Map::new(), witnesses: Vec::new(), fits: Vec::new(), wavefront: None }
    }

    pub fn with(mut self, key: &str, v: Value) -> Self {
        self.result.insert(key.into(), v);
        self
    }
}

pub fn fit_json(f: &ScalingFit) -> Value {
    json!({
        "exponent": num(f.exponent),
        "residual": num(f.residual),
        "floor": f.floor_flag,
        "stable": f.is_stable(),
        "used_points": f.used_points,
    })
}

pub fn task_json(id: &str, kind: &str, o: &Outcome) -> Value {
    json!({
        "id": id,
        "kind": kind,
        "status": o.status.as_str(),
        "summary": o.summary,
        "result": Value::Object(o.result.clone()),
        "witnesses": o.witnesses,
    })
}

pub fn fits_csv(rows: &[(String, FitRow)]) -> String {
    let mut s = String::from("task,object,key,exponent,residual,floor,used_points\n");
    for (task, r) in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            csv_field(task),
            csv_field(&r.object),
            csv_field(&r.key),
            csv_num(r.fit.exponent),
            csv_num(r.fit.residual),
            r.fit.floor_flag,
            r.fit.used_points
        );
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Writes the files into `dir` through temporary names, so a failed run
/// never leaves a half-written report behind.
pub fn write_all(dir: &Path, files: &[(String, String)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, body) in files {
        let tmp = dir.join(format!(".{name}.tmp"));
        std::fs::write(&tmp, body)?;
        std::fs::rename(&tmp, dir.join(name))?;
    }
    Ok(())
}

/// Human-readable summary of one task of a report.
pub fn explain(report: &Value, task_id: &str) -> Option<String> {
    let task = report["tasks"].as_array()?.iter().find(|t| t["id"] == task_id)?;
    let mut s = String::new();
    let _ = writeln!(s, "task {} ({})", task_id, task["kind"].as_str().unwrap_or("?"));
    let _ = writeln!(s, "status: {}", task["status"].as_str().unwrap_or("?"));
    let _ = writeln!(s, "{}", task["summary"].as_str().unwrap_or(""));
    if let Some(r) = task["result"].as_object() {
        for (k, v) in r {
            let text = match v {
                Value::String(t) => t.clone(),
                other => serde_json::to_string(other).unwrap_or_default(),
            };
            let text = if text.len() > 160 { format!("{}…", &text[..text.floor_char_boundary(160)]) } else { text };
            let _ = writeln!(s, "  {k}: {text}");
        }
    }
    if let Some(w) = task["witnesses"].as_array().filter(|w| !w.is_empty()) {
        let _ = writeln!(s, "witnesses:");
        for x in w.iter().take(10) {
            let _ = writeln!(s, "  {x}");
        }
        if w.len() > 10 {
            let _ = writeln!(s, "  … {} more", w.len() - 10);
        }
    }
    Some(s)
}
