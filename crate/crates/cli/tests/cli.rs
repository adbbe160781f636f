//! End-to-end runs of the `colombeau` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_colombeau");

const HEADER: &str = r#"
[domain]
dim = 1
lo = [-3.141592653589793]
hi = [3.141592653589793]
points = 128
"#;

fn scenario(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("s.toml");
    std::fs::write(&p, format!("{HEADER}\n{body}")).unwrap();
    p
}

fn colombeau(args: &[&str], threads: Option<&str>) -> Output {
    let mut c = Command::new(BIN);
    c.args(args);
    match threads {
        Some(n) => c.env("COLOMBEAU_THREADS", n),
        None => c.env_remove("COLOMBEAU_THREADS"),
    };
    c.output().unwrap()
}

fn run(path: &Path, out: &Path) -> Output {
    colombeau(&["run", path.to_str().unwrap(), "--out", out.to_str().unwrap()], None)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn parse_error_reports_position() {
    let d = tempfile::tempdir().unwrap();
    let p = scenario(d.path(), "[objects]\ndelta = { functional = \"delta(0)\" \n");
    let o = colombeau(&["validate", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("s.toml:9:"), "{}", stderr(&o));
}

#[test]
fn unknown_key_is_a_parse_error() {
    let d = tempfile::tempdir().unwrap();
    let p = scenario(d.path(), "colour = 3\n");
    let o = colombeau(&["validate", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn undefined_object_fails_validation_and_writes_nothing() {
    let d = tempfile::tempdir().unwrap();
    let p = scenario(
        d.path(),
        "[objects]\nt = { functional = \"sum(delta(0), missing)\" }\n\n[[tasks]]\nid = \"a\"\nkind = \"classify\"\nobject = \"nowhere\"\n",
    );
    let out = d.path().join("out");
    let o = run(&p, &out);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let e = stderr(&o);
    assert!(e.contains("missing") && e.contains("nowhere"), "{e}");
    assert!(!out.exists());
}

#[test]
fn invalid_thread_count_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let p = scenario(d.path(), "");
    let out = d.path().join("out");
    let o = colombeau(&["run", p.to_str().unwrap(), "--out", out.to_str().unwrap()], Some("zero"));
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn empty_task_list_writes_an_empty_report() {
    let d = tempfile::tempdir().unwrap();
    let p = scenario(d.path(), "");
    let out = d.path().join("out");
    let o = run(&p, &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&out.join("report.json"));
    assert_eq!(r["tasks"].as_array().unwrap().len(), 0);
    assert_eq!(r["metadata"]["ladder"].as_array().unwrap().len(), 17);
    let csv = std::fs::read_to_string(out.join("fits.csv")).unwrap();
    assert_eq!(csv, "task,object,key,exponent,residual,floor,used_points\n");
}

#[test]
fn delta_wavefront_is_singular_only_at_the_origin() {
    let d = tempfile::tempdir().unwrap();
    let p = scenario(
        d.path(),
        "[objects]\ndelta = { functional = \"delta(0)\" }\n\n[[tasks]]\nid = \"wf\"\nkind = \"wavefront\"\nobject = \"delta\"\n",
    );
    let out = d.path().join("out");
    let o = run(&p, &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let wf = json(&out.join("wf_delta.json"));
    let cells = wf["cells"].as_array().unwrap();
    assert!(!cells.is_empty());
    for c in cells {
        let x = c["center"][0].as_f64().unwrap();
        let singular = c["classes"].as_array().unwrap().iter().all(|k| k == "Singular");
        let regular = c["classes"].as_array().unwrap().iter().all(|k| k == "RegularBoth");
        if x.abs() < 1e-9 {
            assert!(singular, "{c}");
        } else {
            assert!(regular, "{c}");
        }
    }
    let r = json(&out.join("report.json"));
    assert_eq!(r["tasks"][0]["status"], "OK");
}

#[test]
fn explain_summarizes_a_task() {
    let d = tempfile::tempdir().unwrap();
    let p = scenario(
        d.path(),
        "[objects]\nosc = { net = \"sin(x/eps)\" }\n\n[[tasks]]\nid = \"c\"\nkind = \"classify\"\nobject = \"osc\"\n",
    );
    let out = d.path().join("out");
    assert_eq!(run(&p, &out).status.code(), Some(0));
    let report = out.join("report.json");
    let o = colombeau(&["explain", report.to_str().unwrap(), "c"], None);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("task c (classify)") && s.contains("Moderate"), "{s}");
    let o = colombeau(&["explain", report.to_str().unwrap(), "nope"], None);
    assert_eq!(o.status.code(), Some(3));
}
