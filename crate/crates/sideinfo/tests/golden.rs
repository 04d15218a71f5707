//! Byte-for-byte comparison with checked-in artifacts. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p sideinfo --test golden` after an
//! intended change.

use std::path::{Path, PathBuf};

use sideinfo::config::RunConfig;
use sideinfo::experiments::run;
use sideinfo::output::{render_csv, render_report};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check(config: &str, stem: &str) {
    let cfg = RunConfig::from_toml(config).unwrap();
    let (header, artifacts) = run(&cfg, Path::new(".")).unwrap();
    let files = [
        (format!("{stem}.csv"), render_csv(&header, &artifacts.table)),
        (format!("{stem}.report.json"), render_report(&header, &artifacts)),
    ];
    for (name, got) in files {
        let path = golden(&name);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(got == want, "{name} differs from the golden copy:\n{got}");
    }
}

#[test]
fn mds_demo() {
    check(
        r#"
seed = 3

[experiment]
kind = "mds-demo"
trials = 8

[[experiment.blocks]]
symbols = [1, 2, 3, 4, 5, 6, 7]
mask = "1101101"

[[experiment.blocks]]
symbols = [0, 0, 0, 0, 0, 0, 0]
mask = "0011111"
"#,
        "mds-demo",
    );
}

#[test]
fn rate_gap() {
    check(
        r#"
seed = 5

[experiment]
kind = "rate-gap"
samples = 10000
families = [
  { family = "uniform" },
  { family = "gamma", a = 4, b = 1 },
  { family = "positive-cauchy" },
]
"#,
        "rate-gap",
    );
}

#[test]
fn dft_demo() {
    check(
        r#"
seed = 2

[experiment]
kind = "dft-demo"
n = 8
k = 3
bits = 6
trials = 5
calibration_blocks = 20
"#,
        "dft-demo",
    );
}
