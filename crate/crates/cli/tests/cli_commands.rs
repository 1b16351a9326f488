use std::path::PathBuf;
use std::process::{Command, Output};

use ntbench_cli::{enumerate_testbed, recheck_pairs, TestbedResult, WorkbenchConfig};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn ntbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ntbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config_arg(name: &str) -> String {
    configs().join(name).to_str().unwrap().to_string()
}

/// Writes `text` to a fresh file in the temp dir and returns its path.
fn temp_config(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("ntbench-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn identity_and_torsion_have_height_zero() {
    let o = ntbench(&["height", "--curve", "0,1", "--point", "O"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["height"], 0.0);
    let o = ntbench(&["height", "--curve", "-25,0", "--point", "5,0"]);
    let v = json(&o);
    assert_eq!(v["height"], 0.0);
    assert_eq!(v["torsion_order"], 2);
}

#[test]
fn height_is_stable_across_runs() {
    let a = ntbench(&["height", "--curve", "1,-5", "--point", "3,5"]);
    let b = ntbench(&["height", "--curve", "1,-5", "--point", "3,5"]);
    assert_eq!(a.stdout, b.stdout);
    let h = json(&a)["height"].as_f64().unwrap();
    assert!((h - 1.088008900539).abs() < 1e-9, "{h}");
}

#[test]
fn point_off_curve_is_input_error() {
    let o = ntbench(&["height", "--curve", "0,-2", "--point", "3,4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn default_ledger_has_tags_everywhere() {
    let o = ntbench(&["ledger"]);
    assert!(o.status.success());
    let v = json(&o);
    let entries = v["ledger"]["entries"].as_array().unwrap();
    assert!(entries.len() > 20);
    assert!(entries.iter().all(|e| !e["tag"].as_str().unwrap().is_empty()));
}

#[test]
fn zero_c0_exits_with_input_status() {
    let p = temp_config("c0.toml", "[constants]\nc0 = 0.0\n");
    let o = ntbench(&["--config", p.to_str().unwrap(), "ledger"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_config_keys_are_rejected() {
    let p = temp_config("typo.toml", "[constants]\nc00 = 1.0\n");
    assert_eq!(
        ntbench(&["--config", p.to_str().unwrap(), "ledger"]).status.code(),
        Some(2)
    );
}

#[test]
fn pipeline_report_is_byte_identical() {
    let cfg = config_arg("pipeline.toml");
    let a = ntbench(&["--config", &cfg, "pipeline"]);
    let b = ntbench(&["--config", &cfg, "pipeline"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = ntbench(&["--config", &cfg, "--seed", "99", "pipeline"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn json_and_toml_configs_agree() {
    let toml_cfg = WorkbenchConfig::load(&configs().join("pipeline.toml")).unwrap();
    let p = temp_config("pipeline.json", &serde_json::to_string(&toml_cfg).unwrap());
    let json_cfg = WorkbenchConfig::load(&p).unwrap();
    assert_eq!(toml_cfg, json_cfg);
}

#[test]
fn csv_table_is_written() {
    let csv = std::env::temp_dir().join(format!("ntbench-{}-steps.csv", std::process::id()));
    let o = ntbench(&[
        "--config",
        &config_arg("pipeline.toml"),
        "--csv",
        csv.to_str().unwrap(),
        "pipeline",
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("step,empirical,bound,ok,tag\n"));
    assert!(text.contains("final count"));
}

#[test]
fn failed_packing_hypothesis_exits_with_certificate_status() {
    let p = temp_config(
        "violated.toml",
        "[constants]\ng = 1\nr = 0\nl = 1\nc0 = 1.0\nc8 = 0.01\nh_fal = 10.0\n\
         [lattice]\nkind = \"identity\"\nrank = 1\n\
         [pipeline]\npoints = [[-3], [-2], [-1], [0], [1], [2], [3]]\n",
    );
    let o = ntbench(&["--config", p.to_str().unwrap(), "pipeline"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["verdict"], "violated");
}

#[test]
fn oversized_box_is_resource_error() {
    let text = std::fs::read_to_string(configs().join("testbed.toml"))
        .unwrap()
        .replace("max_combinations = 10000", "max_combinations = 100");
    let p = temp_config("big.toml", &text);
    assert_eq!(
        ntbench(&["--config", p.to_str().unwrap(), "testbed"]).status.code(),
        Some(4)
    );
}

#[test]
fn dependent_generators_are_rejected() {
    let p = temp_config(
        "dependent.toml",
        "[[curves]]\nlabel = \"A\"\na4 = \"0\"\na6 = \"-2\"\ngenerators = [[\"3\", \"5\"], [\"129/100\", \"383/1000\"]]\n\
         [[curves]]\nlabel = \"B\"\na4 = \"1\"\na6 = \"-5\"\ngenerators = [[\"3\", \"5\"]]\n\
         [testbed]\npair = [\"A\", \"B\"]\nheight_bound = 4.0\n",
    );
    assert_eq!(
        ntbench(&["--config", p.to_str().unwrap(), "testbed"]).status.code(),
        Some(2)
    );
}

#[test]
fn zero_box_keeps_only_the_origin() {
    let mut cfg = WorkbenchConfig::load(&configs().join("testbed.toml")).unwrap();
    cfg.testbed.as_mut().unwrap().height_bound = 0.0;
    let res = enumerate_testbed(&cfg).unwrap();
    assert_eq!(res.combinations, 1);
    assert_eq!(res.pairs.len(), 1);
    assert!(res.pairs[0].p.is_infinity() && res.pairs[0].q.is_infinity());
}

#[test]
fn equal_curves_put_every_pair_on_a_coset() {
    let cfg = WorkbenchConfig::load(&configs().join("diagonal.toml")).unwrap();
    let res = enumerate_testbed(&cfg).unwrap();
    assert!(res.pairs.len() > 10);
    assert_eq!(res.empirical_count, 0);
    assert_eq!(res.excluded, res.pairs.len());
}

#[test]
fn exclusions_need_equal_curves() {
    let text = std::fs::read_to_string(configs().join("testbed.toml")).unwrap() + "";
    let text = text.replace(
        "max_combinations = 10000",
        "max_combinations = 10000\nexclude = [\"diagonal\"]",
    );
    let cfg = WorkbenchConfig::from_toml(&text).unwrap();
    assert!(enumerate_testbed(&cfg).is_err());
}

#[test]
fn pairs_survive_a_round_trip_and_tampering_is_caught() {
    let cfg = WorkbenchConfig::load(&configs().join("testbed.toml")).unwrap();
    let res = enumerate_testbed(&cfg).unwrap();
    let text = serde_json::to_string(&res).unwrap();
    let mut back: TestbedResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, res);
    recheck_pairs(&back).unwrap();
    let i = back.pairs.iter().position(|p| !p.p.is_infinity()).unwrap();
    back.pairs[i].coords.0[0] += 1;
    assert!(recheck_pairs(&back).is_err());
}

#[test]
fn cover_and_pack_and_degrees_run() {
    let cfg = config_arg("pipeline.toml");
    for cmd in ["cover", "pack", "degrees", "lattice"] {
        let o = ntbench(&["--config", &cfg, cmd]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = ntbench(&[
        "degrees", "--g", "2", "--r", "1", "--d", "1", "--l", "2", "--type", "1,1",
    ]);
    let v = json(&o);
    assert_eq!(v["pfaffian"]["deg_a"], "2");
    assert_eq!(v["closed_form_vs_iterated"][1]["closed_form"], "128");
}
