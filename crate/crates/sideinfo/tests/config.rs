use proptest::prelude::*;
use sideinfo::config::{Experiment, Format, RunConfig};
use sideinfo::output::Header;
use sideinfo::presets::{find, presets, with_tag};
use sideinfo::CliError;

fn parse(text: &str) -> Result<RunConfig, CliError> {
    RunConfig::from_toml(text)
}

#[test]
fn bare_kind_takes_every_default() {
    for kind in Experiment::KINDS {
        let cfg = parse(&format!("[experiment]\nkind = \"{kind}\"\n")).unwrap();
        assert_eq!(cfg.experiment, Experiment::default_for(kind).unwrap(), "{kind}");
        assert_eq!(cfg.experiment.kind(), kind);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.format, Format::Csv);
    }
}

#[test]
fn short_theorem_names_are_accepted() {
    let a = parse("[experiment]\nkind = \"theorem1\"\n").unwrap();
    assert_eq!(a.experiment.kind(), "check-theorem1");
    let b = parse("[experiment]\nkind = \"theorem3\"\n").unwrap();
    assert_eq!(b.experiment.kind(), "check-theorem3");
}

#[test]
fn schema_violations_are_config_errors() {
    let bad = [
        "[experiment]\nkind = \"no-such-thing\"\n",
        "[experiment]\nkind = \"mds-demo\"\nbogus = 1\n",
        "colour = 3\n[experiment]\nkind = \"mds-demo\"\n",
        "[experiment]\nkind = \"mds-demo\"\ntrials = 0\n",
        "[experiment]\nkind = \"mds-demo\"\nn = \"seven\"\n",
        "[experiment]\nkind = \"rate-gap\"\nsamples = 100\n",
        "[experiment]\nkind = \"rate-gap\"\nfamilies = [{ family = \"gamma\", a = 2 }]\n",
        "[experiment]\nkind = \"rd-curves\"\nscenarios = [\"SOMETIMES\"]\n",
        "[experiment]\nkind = \"rd-curves\"\ninstance = { builtin = \"z2-group\", file = \"x.json\" }\n",
        "[experiment]\nkind = \"rd-curves\"\ninstance = { builtin = \"z2-group\", count = 3 }\n",
        "[experiment]\nkind = \"rd-curves\"\ninstance = { builtin = \"nonsense\" }\n",
        "[experiment]\nkind = \"two-stage\"\nrates = []\n",
        "jobs = 0\n[experiment]\nkind = \"mds-demo\"\n",
        "seed = 1\n",
    ];
    for text in bad {
        match parse(text) {
            Err(CliError::Config(_)) => {}
            other => panic!("{text:?} gave {other:?}"),
        }
    }
}

#[test]
fn nested_tables_parse() {
    let cfg = parse(
        r#"
seed = 11
format = "json"

[experiment]
kind = "rate-gap"
samples = 20000

[[experiment.families]]
family = "gamma"
a = 4
b = 2

[[experiment.families]]
family = "positive-cauchy"
"#,
    )
    .unwrap();
    let Experiment::RateGap(r) = &cfg.experiment else {
        panic!("{cfg:?}")
    };
    assert_eq!(r.families.len(), 2);
    assert_eq!(r.samples, 20_000);
    assert_eq!(cfg.format, Format::Json);
}

#[test]
fn every_preset_survives_a_toml_round_trip() {
    for p in presets() {
        let text = toml::to_string(&p.config).unwrap();
        let back = parse(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", p.name));
        assert_eq!(back, p.config, "{}", p.name);
    }
}

#[test]
fn preset_names_are_unique_and_tags_filter() {
    let all = presets();
    let mut names: Vec<_> = all.iter().map(|p| p.name).collect();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), all.len());
    for kind in Experiment::KINDS {
        assert!(all.iter().any(|p| p.kind == kind), "no preset for {kind}");
    }
    let penalty: Vec<_> = with_tag("rate-penalty").iter().map(|p| p.kind).collect();
    assert!(penalty.contains(&"rate-gap") && penalty.contains(&"penalty-check"));
    assert!(penalty.iter().all(|k| *k == "rate-gap" || *k == "penalty-check"));
    assert!(with_tag("no-such-tag").is_empty());
}

#[test]
fn hash_tracks_seed_and_inputs() {
    let base = presets()[0].config.clone();
    let h0 = Header::new(&base, &[]);
    let mut other = base.clone();
    other.seed = 1;
    assert_ne!(Header::new(&other, &[]).hash, h0.hash);
    let with_file = Header::new(&base, &[("x.json".into(), "00".into())]);
    assert_ne!(with_file.hash, h0.hash);
    assert!(h0.hash.starts_with("sha256:") && h0.hash.len() == 7 + 64);
}

proptest! {
    #[test]
    fn worker_count_never_reaches_the_header(jobs in 1usize..64, seed in any::<u64>()) {
        let mut a = find("mds-7-5-gf8").unwrap().config;
        a.seed = seed;
        let mut b = a.clone();
        b.jobs = Some(jobs);
        prop_assert_eq!(Header::new(&a, &[]), Header::new(&b, &[]));
    }
}
