use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sideinfo::instance_file::InstanceFile;
use sideinfo::presets::builtin_instance;

fn sideinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sideinfo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The single JSON error record on stderr.
fn error_record(o: &Output) -> Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const SMALL_SOLVER: &str = "[experiment.solver]\nslope_count = 6\nslope_min = 0.1\nslope_max = 10.0\n";

#[test]
fn list_presets_filters_by_tag() {
    let all = sideinfo(&["list-presets"]);
    assert!(all.status.success());
    let text = stdout(&all);
    assert!(text.starts_with("name,kind,tags,description\n"));
    for name in [
        "mds-7-5-gf8",
        "dft-64-16",
        "rate-gap-all-families",
        "two-stage-64-32",
    ] {
        assert!(text.contains(name), "{name}");
    }

    let tagged = sideinfo(&["list-presets", "--tag", "rate-penalty", "--format", "json"]);
    assert!(tagged.status.success());
    let v: Value = serde_json::from_str(&stdout(&tagged)).unwrap();
    let kinds: Vec<&str> = v["presets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"rate-gap") && kinds.contains(&"penalty-check"));
    assert!(kinds.iter().all(|k| *k == "rate-gap" || *k == "penalty-check"));

    let none = sideinfo(&["list-presets", "--tag", "9.9"]);
    assert!(none.status.success());
    assert_eq!(stdout(&none), "name,kind,tags,description\n");
}

#[test]
fn usage_errors_exit_2_with_a_json_record() {
    let o = sideinfo(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["error"], "usage");

    let o = sideinfo(&["mds-demo", "--preset", "no-such-preset"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["error"], "config");

    let o = sideinfo(&["dft-demo", "--preset", "mds-7-5-gf8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(error_record(&o)["message"].as_str().unwrap().contains("mds-demo"));
}

#[test]
fn config_problems_exit_2_and_io_problems_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    let bad = write(
        dir.path(),
        "bad.toml",
        "[experiment]\nkind = \"mds-demo\"\nblocksize = 3\n",
    );
    let o = sideinfo(&["mds-demo", "--config", &bad, "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["exit_code"], 2);

    let params = write(dir.path(), "p.toml", "[experiment]\nkind = \"mds-demo\"\nm = 5\n");
    let o = sideinfo(&["mds-demo", "--config", &params, "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["error"], "invalid-parameters");

    let missing = dir.path().join("missing.toml");
    let o = sideinfo(&["mds-demo", "--config", missing.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_record(&o)["error"], "io");

    // the output directory is a file
    let blocker = write(dir.path(), "blocker", "");
    let small = write(
        dir.path(),
        "s.toml",
        "[experiment]\nkind = \"mds-demo\"\ntrials = 3\n",
    );
    let o = sideinfo(&["mds-demo", "--config", &small, "--out", &blocker]);
    assert_eq!(o.status.code(), Some(3));

    let no_group = write(
        dir.path(),
        "t1.toml",
        &format!("[experiment]\nkind = \"check-theorem1\"\ninstance = {{ builtin = \"binary-scaled\" }}\n{SMALL_SOLVER}"),
    );
    let o = sideinfo(&["check-theorem1", "--config", &no_group, "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_checks_exit_1_after_writing_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "t1.toml",
        &format!("[experiment]\nkind = \"check-theorem1\"\ngap_tolerance = -1.0\n{SMALL_SOLVER}"),
    );
    let out = dir.path().join("out");
    let o = sideinfo(&["check-theorem1", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_record(&o)["error"], "verification");
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("check-theorem1.report.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], false);
    assert!(out.join("check-theorem1.csv").exists());
}

#[test]
fn file_instances_resolve_next_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, group) = builtin_instance("z2-group", 0, 0).unwrap();
    InstanceFile::from_instance(&inst, group.as_ref())
        .write(&dir.path().join("z2.json"))
        .unwrap();
    let cfg = write(
        dir.path(),
        "t1.toml",
        &format!(
            "[experiment]\nkind = \"check-theorem1\"\ninstance = {{ file = \"z2.json\" }}\n{SMALL_SOLVER}"
        ),
    );
    let out = dir.path().join("out");
    let o = sideinfo(&[
        "check-theorem1",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let data: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("check-theorem1.json")).unwrap()).unwrap();
    let inputs = &data["header"]["config"]["inputs"];
    assert!(inputs["z2.json"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(data["rows"][0]["instance"], "z2.json");
    assert_eq!(data["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn seed_and_worker_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "m.toml",
        "[experiment]\nkind = \"mds-demo\"\ntrials = 50\n",
    );
    let run = |sub: &str, extra: &[&str]| {
        let out = dir.path().join(sub);
        let mut args = vec!["mds-demo", "--config", &cfg, "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = sideinfo(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(out.join("mds-demo.csv")).unwrap()
    };
    let one = run("a", &["--jobs", "1"]);
    let four = run("b", &["--jobs", "4"]);
    assert_eq!(one, four);
    let reseeded = run("c", &["--seed", "99"]);
    assert!(reseeded.contains("# seed: 99\n"));
    assert_ne!(reseeded, one);
}
