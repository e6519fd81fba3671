use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn vk(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vk"));
    cmd.current_dir(dir).args(args).env_remove("VK_THREADS");
    if let Some(t) = threads {
        cmd.env("VK_THREADS", t);
    }
    cmd.output().unwrap()
}

const MICRO: &str = r#"
mode = "micro"
seed = 3

[micro]
n = 300
c = 1.0
k_theta = 5.0
k_omega = 5.0
alpha2 = 0.125
beta2 = 0.125
radius = 1.0
length = 8.0
dt = 0.01
t_end = 1.0

[init]
kind = "uniform_random"

[output]
dir = "OUT"
snapshot_every = 0.25
"#;

const MACRO: &str = r#"
mode = "macro"
seed = 1

[macro]
kappa = 8.0
dt = 0.005
nx = 16
length = 1.0
t_end = 0.5

[init]
kind = "random"

[output]
dir = "OUT"
snapshot_every = 0.1
"#;

fn write_config(dir: &Path, name: &str, template: &str, out: &str) -> String {
    fs::write(dir.join(name), template.replace("OUT", out)).unwrap();
    name.to_string()
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn coeffs_prints_one_json_object() {
    let tmp = tempfile::tempdir().unwrap();
    let out = vk(tmp.path(), &["coeffs", "--kappa", "8"], None);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["kappa", "c1", "c2", "K1", "K2", "quad_error"] {
        assert!(v[key].is_number(), "missing {key}");
    }
    assert_eq!(v["kappa"], 8.0);
    assert!((v["c1"].as_f64().unwrap() - 0.9352354935294389).abs() < 1e-12);
}

#[test]
fn bad_kappa_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(vk(tmp.path(), &["coeffs", "--kappa", "-1"], None).status.code(), Some(2));
}

#[test]
fn config_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let name = write_config(tmp.path(), "bad.toml", &MICRO.replace("dt = 0.01", "dt = 0.01\nbogus = 1"), "o");
    let out = vk(tmp.path(), &["micro", "--config", &name], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let stiff = write_config(tmp.path(), "stiff.toml", &MICRO.replace("k_theta = 5.0", "k_theta = 71.0"), "s");
    assert_eq!(vk(tmp.path(), &["micro", "--config", &stiff], None).status.code(), Some(2));
    let out = vk(tmp.path(), &["micro", "--config", &stiff, "--allow-stiff"], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn numerical_abort_exits_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let name = write_config(tmp.path(), "cfl.toml", &MACRO.replace("dt = 0.005", "dt = 0.2"), "o");
    let out = vk(tmp.path(), &["macro", "--config", &name], None);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn micro_runs_are_byte_identical_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let a = write_config(tmp.path(), "a.toml", MICRO, "a");
    let b = write_config(tmp.path(), "b.toml", MICRO, "b");
    assert!(vk(tmp.path(), &["micro", "--config", &a], Some("1")).status.success());
    assert!(vk(tmp.path(), &["micro", "--config", &b], Some("3")).status.success());
    let (da, db) = (dir_bytes(&tmp.path().join("a")), dir_bytes(&tmp.path().join("b")));
    assert_eq!(da.len(), 7, "five snapshots, config and series");
    // The config copies differ in their output directory only.
    let strip = |v: Vec<(String, Vec<u8>)>| v.into_iter().filter(|(n, _)| n != "config.toml").collect::<Vec<_>>();
    assert_eq!(strip(da), strip(db));
}

#[test]
fn analyze_reads_a_macro_run() {
    let tmp = tempfile::tempdir().unwrap();
    let name = write_config(tmp.path(), "m.toml", MACRO, "m");
    let run = vk(tmp.path(), &["macro", "--config", &name], None);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let out = vk(tmp.path(), &["analyze", "m", "--json"], None);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "macro");
    assert_eq!(v["snapshots"], 6);
    assert_eq!(v["series_from_run"], true);
    assert!(v["pattern"].is_string());
    let text = vk(tmp.path(), &["analyze", "m"], None);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("pattern: "));
}

#[test]
fn analyze_of_missing_directory_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let out = vk(tmp.path(), &["analyze", "nowhere"], None);
    assert!(!out.status.success());
}
