use proptest::prelude::*;
use sideinfo::config::RunConfig;
use sideinfo::instance_file::InstanceFile;
use sideinfo::output::{num, render_csv, render_json, Artifacts, Cell, Check, Header, Table};
use sideinfo::presets::{builtin_instance, find, BUILTIN_INSTANCES};
use sideinfo::CliError;
use sideinfo_core::model::catalog::random_small;

#[test]
fn builtin_instances_round_trip_through_json() {
    let dir = tempfile::tempdir().unwrap();
    for name in BUILTIN_INSTANCES {
        let (inst, group) = builtin_instance(name, 5, 2).unwrap();
        let path = dir.path().join(format!("{name}.json"));
        InstanceFile::from_instance(&inst, group.as_ref())
            .write(&path)
            .unwrap();
        let (back, back_group) = InstanceFile::read(&path).unwrap().to_instance().unwrap();
        assert_eq!(back, inst, "{name}");
        assert_eq!(back_group, group, "{name}");
    }
}

#[test]
fn inconsistent_files_are_rejected() {
    let (inst, group) = builtin_instance("z2-group", 0, 0).unwrap();
    let good = InstanceFile::from_instance(&inst, group.as_ref());

    let mut labels = good.clone();
    labels.side_alphabet.push("extra".into());
    assert!(matches!(labels.to_instance(), Err(CliError::Config(_))));

    let mut ragged = good.clone();
    ragged.dist[1].pop();
    assert!(matches!(ragged.to_instance(), Err(CliError::Core(_))));

    let mut law = good.clone();
    law.p_x = vec![0.7, 0.7];
    assert!(matches!(law.to_instance(), Err(CliError::Core(_))));

    let mut table = good;
    table.group = Some(vec![vec![0, 1], vec![0, 1]]);
    assert!(matches!(table.to_instance(), Err(CliError::Core(_))));

    let extra = r#"{"source_alphabet":[],"recon_alphabet":[],"side_alphabet":[],"p_x":[],"p_q":[],"dist":[],"note":1}"#;
    assert!(serde_json::from_str::<InstanceFile>(extra).is_err());
}

fn sample() -> (Header, Artifacts) {
    let cfg: RunConfig = find("mds-7-5-gf8").unwrap().config;
    let mut table = Table::new(&["a", "b", "c", "d"]);
    table.push(vec![
        Cell::Int(3),
        Cell::Float(f64::INFINITY),
        "x,y".into(),
        Cell::Empty,
    ]);
    table.push(vec![
        Cell::Int(-1),
        Cell::Float(1e-12),
        "plain".into(),
        Cell::Bool(true),
    ]);
    let artifacts = Artifacts {
        table,
        summary: serde_json::json!({}),
        checks: vec![Check::at_most("c", 1.0, 2.0, true)],
    };
    (Header::new(&cfg, &[]), artifacts)
}

#[test]
fn csv_starts_with_the_header_then_plain_rows() {
    let (h, a) = sample();
    let csv = render_csv(&h, &a.table);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        format!("# tool: sideinfo {}", env!("CARGO_PKG_VERSION"))
    );
    assert_eq!(lines[1], "# experiment: mds-demo");
    assert_eq!(lines[2], "# seed: 0");
    assert_eq!(lines[3], format!("# config-hash: {}", h.hash));
    assert!(lines[4].starts_with("# config: {"));
    assert_eq!(&lines[5..], ["a,b,c,d", "3,inf,\"x,y\",", "-1,1e-12,plain,true"]);
}

#[test]
fn json_keeps_non_finite_values_as_strings() {
    let (h, a) = sample();
    let v: serde_json::Value = serde_json::from_str(&render_json(&h, &a.table)).unwrap();
    assert_eq!(v["header"]["config_hash"], h.hash.as_str());
    assert_eq!(v["rows"][0]["b"], "inf");
    assert_eq!(v["rows"][0]["d"], serde_json::Value::Null);
    assert_eq!(v["rows"][1]["b"], 1e-12);
    assert_eq!(num(f64::NAN), "nan");
    assert_eq!(num(f64::NEG_INFINITY), "-inf");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_instances_round_trip_bit_for_bit(seed in any::<u64>(), index in 0u64..1000) {
        let inst = random_small(seed, index).unwrap();
        let text = serde_json::to_string(&InstanceFile::from_instance(&inst, None)).unwrap();
        let parsed: InstanceFile = serde_json::from_str(&text).unwrap();
        let (back, group) = parsed.to_instance().unwrap();
        prop_assert_eq!(back, inst);
        prop_assert!(group.is_none());
    }
}
