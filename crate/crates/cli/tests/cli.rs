use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bellgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellgraph"))
        .args(args)
        .env_remove("BELLGRAPH_OUT")
        .output()
        .expect("binary runs")
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn simulate_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    let o = bellgraph(&[
        "simulate", "--preset", "pr-box", "--iterations", "5000", "--seed", "3",
        "--format", "json,csv,svg,text", "--out", &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.starts_with("max_s "));
    assert_eq!(stdout.matches("wrote ").count(), 5);

    let v = bellgraph(&["verify", &out]);
    assert!(v.status.success(), "{}", String::from_utf8_lossy(&v.stderr));
    for f in ["report.json", "report.txt", "distribution.csv", "distribution.svg"] {
        let v = bellgraph(&["verify", dir.path().join(f).to_str().unwrap()]);
        assert!(v.status.success(), "{f}");
    }
}

#[test]
fn tampered_output_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    assert!(bellgraph(&["simulate", "--preset", "tsirelson", "--iterations", "3000", "--out", &out])
        .status
        .success());
    let path = dir.path().join("report.json");
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["report"]["delta"] = serde_json::json!(0.25);
    fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let v = bellgraph(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&v.stderr).contains("delta"));
}

#[test]
fn constraint_file_source() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.json");
    fs::write(&table, bellgraph::Preset::Classical.document().to_text()).unwrap();
    let out = out_arg(&dir.path().join("out"));
    let o = bellgraph(&[
        "simulate", "--constraints", table.to_str().unwrap(), "--iterations", "2000", "--out", &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(dir.path().join("out/report.txt")).unwrap();
    assert!(report.contains("source       classical"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    // no constraint source
    assert_eq!(bellgraph(&["simulate", "--out", &out]).status.code(), Some(2));
    // both sources
    assert_eq!(
        bellgraph(&["simulate", "--preset", "pr-box", "--constraints", "x.json", "--out", &out])
            .status
            .code(),
        Some(2)
    );
    // unreadable constraint file
    assert_eq!(
        bellgraph(&["simulate", "--constraints", "/nonexistent/t.json", "--out", &out])
            .status
            .code(),
        Some(1)
    );
    // malformed constraint file
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"table\": [[1, 2]]}").unwrap();
    assert_eq!(
        bellgraph(&["simulate", "--constraints", bad.to_str().unwrap(), "--out", &out])
            .status
            .code(),
        Some(2)
    );
    // descending sweep sizes
    assert_eq!(
        bellgraph(&["sweep", "--preset", "pr-box", "--iterations", "1000,100", "--out", &out])
            .status
            .code(),
        Some(2)
    );
    // sampler cannot meet its proposal cap
    assert_eq!(
        bellgraph(&[
            "simulate", "--preset", "pr-box", "--iterations", "10", "--method", "metropolis",
            "--out", &out,
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bellgraph"))
        .args(["simulate", "--preset", "classical", "--iterations", "1000", "--format", "csv"])
        .env("BELLGRAPH_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("distribution.csv").is_file());
}

#[test]
fn sweep_bench_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    let s = bellgraph(&[
        "sweep", "--preset", "pr-box", "--iterations", "500,5000", "--repeats", "2", "--out", &out,
    ]);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    let b = bellgraph(&[
        "bench", "--preset", "pr-box", "--iterations", "1000,4000", "--repeats", "2", "--out", &out,
    ]);
    assert!(b.status.success(), "{}", String::from_utf8_lossy(&b.stderr));
    assert!(String::from_utf8_lossy(&b.stdout).contains("log-log slope"));

    let sweep_svg = fs::read_to_string(dir.path().join("sweep.svg")).unwrap();
    assert_eq!(sweep_svg.matches("<polyline").count(), 2);

    let rendered = dir.path().join("again.svg");
    let r = bellgraph(&[
        "render",
        dir.path().join("bench.csv").to_str().unwrap(),
        "--output",
        rendered.to_str().unwrap(),
    ]);
    assert!(r.status.success());
    assert_eq!(
        fs::read_to_string(rendered).unwrap(),
        fs::read_to_string(dir.path().join("bench.svg")).unwrap()
    );

    let junk = dir.path().join("junk.csv");
    fs::write(&junk, "a,b\n1,2\n").unwrap();
    assert_eq!(bellgraph(&["render", junk.to_str().unwrap()]).status.code(), Some(2));
}
