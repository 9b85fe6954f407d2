use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn shimura(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shimura")).args(args).output().unwrap()
}

fn json_without_timing(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn json_output_is_identical_with_a_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("rational_d6_n5.cfg");
    let args = [
        "run",
        cfg.to_str().unwrap(),
        "--json",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ];
    let cold = json_without_timing(&shimura(&args));
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some());
    let warm = json_without_timing(&shimura(&args));
    assert_eq!(cold, warm);
    let uncached = json_without_timing(&shimura(&["run", cfg.to_str().unwrap(), "--json", "--no-cache"]));
    assert_eq!(cold, uncached);
    assert_eq!(cold["dim_h_plus"], 1);
}

#[test]
fn svg_has_one_arc_per_side() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("domain.svg");
    let cfg = fixture("rational_d6_n5.cfg");
    let out = shimura(&["run", cfg.to_str().unwrap(), "--json", "--no-cache", "--svg", svg.to_str().unwrap()]);
    let doc = json_without_timing(&out);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    let arcs = text.matches("<path").count();
    assert_eq!(arcs as u64, doc["components"][0]["sides"].as_u64().unwrap());
}

#[test]
fn text_output_goes_to_the_configured_path() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("result.txt");
    let body = std::fs::read_to_string(fixture("rational_d6_n5.cfg")).unwrap();
    let cfg = write(dir.path(), "job.cfg", &format!("{body}output.path = {}\n", target.display()));
    let out = shimura(&["run", &cfg, "--no-cache", "--primes-up-to", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.contains("dim.H_plus = 1"));
    assert!(text.contains("operator.7:(7,7).kind = Hecke"));
    assert!(!text.contains("operator.11:"));
}

#[test]
fn configuration_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    assert_eq!(shimura(&["run", missing.to_str().unwrap()]).status.code(), Some(2));
    for text in [
        "field.poly = 0,1\nalgebra.a = 1\n",
        "field.poly = 0,1\nalgebra.a = -1\nalgebra.b = -1\nmystery = 3\n",
        "field.poly = -4,0,1\nalgebra.a = -1\nalgebra.b = -1\n",
        "field.poly = -2,0,1\nalgebra.a = 1\nalgebra.b = 1\n",
    ] {
        let cfg = write(dir.path(), "bad.cfg", text);
        let out = shimura(&["run", &cfg, "--no-cache"]);
        assert_eq!(out.status.code(), Some(2), "{text}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn exhausted_search_bounds_exit_with_3() {
    let cfg = fixture("cubic.cfg");
    let out = shimura(&["run", cfg.to_str().unwrap(), "--no-cache", "--precision-bits", "8"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unwritable_outputs_exit_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("no/such/dir/domain.svg");
    let cfg = fixture("rational_d6_n5.cfg");
    let out = shimura(&["run", cfg.to_str().unwrap(), "--no-cache", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}
