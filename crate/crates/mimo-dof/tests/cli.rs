use std::process::{Command, Output};

use mimo_dof::json::{to_pretty, RegionJson, RegionOutput};
use serde_json::Value;

fn mimo_dof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mimo-dof"))
        .args(args)
        .env("MIMO_DOF_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn vertices(region: &Value) -> Vec<(String, String)> {
    region["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v[0].as_str().unwrap().to_string(), v[1].as_str().unwrap().to_string()))
        .collect()
}

fn pair(a: &str, b: &str) -> (String, String) {
    (a.to_string(), b.to_string())
}

#[test]
fn region_bc() {
    let out = mimo_dof(&["region", "--channel", "bc", "--antennas", "4,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let v = vertices(&doc);
    assert!(v.contains(&pair("2/1", "0/1")));
    assert!(v.contains(&pair("0/1", "3/1")));
    assert_eq!(v.len(), 3);
}

#[test]
fn region_bc_siso_is_unit_simplex() {
    let out = mimo_dof(&["region", "--channel", "bc", "--antennas", "1,1,1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["halfspaces"].as_array().unwrap().len(), 1);
    assert_eq!(doc["halfspaces"][0]["a1"], "1/1");
    assert_eq!(doc["halfspaces"][0]["a2"], "1/1");
    assert_eq!(doc["halfspaces"][0]["b"], "1/1");
}

#[test]
fn region_ic_unknown_prints_three_regions() {
    let out = mimo_dof(&["region", "--channel", "ic", "--antennas", "1,3,2,4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    for key in ["inner", "outer", "csit"] {
        assert!(doc.get(key).is_some(), "{key}");
    }
    assert!(vertices(&doc["outer"]).contains(&pair("1/1", "3/2")));
}

#[test]
fn region_output_round_trips() {
    for args in [
        &["region", "--channel", "ic", "--antennas", "1,3,2,4"][..],
        &["region", "--channel", "ic", "--antennas", "2,3,2,3"][..],
        &["region", "--channel", "bc", "--antennas", "3,1,2", "--csit", "yes"][..],
    ] {
        let out = mimo_dof(args);
        let text = String::from_utf8(out.stdout).unwrap();
        let parsed: RegionOutput = serde_json::from_str(&text).unwrap();
        let again = match parsed {
            RegionOutput::Single(r) => RegionOutput::Single(RegionJson::from_region(&r.to_region().unwrap())),
            RegionOutput::Bounds { inner, outer, csit } => RegionOutput::Bounds {
                inner: RegionJson::from_region(&inner.to_region().unwrap()),
                outer: RegionJson::from_region(&outer.to_region().unwrap()),
                csit: RegionJson::from_region(&csit.to_region().unwrap()),
            },
        };
        assert_eq!(to_pretty(&again), text);
    }
}

#[test]
fn invalid_input_exits_3() {
    for args in [
        &["region", "--channel", "bc", "--antennas", "4,2"][..],
        &["region", "--channel", "ic", "--antennas", "1,0,1,1"][..],
        &["region", "--channel", "tv", "--antennas", "1,1,1"][..],
        &["simulate", "--channel", "ic", "--antennas", "1,1,1,1", "--scheme", "zf", "--trials", "10"][..],
        &["simulate", "--channel", "bc", "--antennas", "2,1,1", "--scheme", "ia", "--trials", "10"][..],
        &["simulate", "--channel", "bc", "--antennas", "2,1,1", "--scheme", "tdm", "--snr-db", "10:0:5"][..],
        &["simulate", "--channel", "bc", "--antennas", "2,1,1", "--scheme", "tdm", "--trials", "0"][..],
        &["classify", "--channel", "bc", "--antennas", "2,1,1"][..],
        &["verify", "--channel", "ic", "--antennas", "1,3,2,4", "--scheme", "zf", "--trials", "10", "--verify-against", "exact"][..],
    ] {
        let out = mimo_dof(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_1() {
    let out = mimo_dof(&["region", "--channel", "bc", "--antennas", "1,1,1", "--out", "/nonexistent/dir/r.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    assert_eq!(mimo_dof(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_labels() {
    let doc = stdout_json(&mimo_dof(&["classify", "--channel", "ic", "--antennas", "3,2,4,2"]));
    assert_eq!(doc["label"]["swapped"], true);
    assert_eq!(doc["label"]["case"], "II");
    assert_eq!(doc["label"]["table"], "unequal-receivers");
    assert_eq!(doc["label"]["scheme"], "time-division");
}

#[test]
fn compare_examples() {
    let strict = stdout_json(&mimo_dof(&["compare", "--channel", "ic", "--antennas", "2,3,2,3"]));
    assert_eq!(strict["subset"], true);
    assert_eq!(strict["strict"], true);
    assert_eq!(strict["no_csit_or_bounds"]["exact"]["halfspaces"][0]["a1"], "1/2");
    assert_eq!(strict["no_csit_or_bounds"]["exact"]["halfspaces"][0]["a2"], "1/3");
    assert!(!strict["vertices_lost"].as_array().unwrap().is_empty());

    for antennas in ["2,1,2,3", "1,1,1,1"] {
        let equal = stdout_json(&mimo_dof(&["compare", "--channel", "ic", "--antennas", antennas]));
        assert_eq!(equal["subset"], true, "{antennas}");
        assert_eq!(equal["strict"], false, "{antennas}");
        assert!(equal["vertices_lost"].as_array().unwrap().is_empty());
    }

    let open = stdout_json(&mimo_dof(&["compare", "--channel", "ic", "--antennas", "1,3,2,4"]));
    assert!(open["no_csit_or_bounds"]["exact"].is_null());
}

#[test]
fn simulate_tdm_example_and_recorded_defaults() {
    let out = mimo_dof(&[
        "simulate", "--channel", "bc", "--antennas", "4,2,3", "--scheme", "tdm", "--tau", "0.5",
        "--trials", "500", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert!((doc["estimate"]["d1"].as_f64().unwrap() - 1.0).abs() < 0.1);
    assert!((doc["estimate"]["d2"].as_f64().unwrap() - 1.5).abs() < 0.1);
    assert_eq!(doc["snr_db"]["start"], 30.0);
    assert_eq!(doc["snr_db"]["stop"], 70.0);
    assert_eq!(doc["window"], 4);
    assert_eq!(doc["tol"], 0.1);
    assert_eq!(doc["scheme"]["user2_exponent"], 1.0);
    assert_eq!(doc["trace"]["rate1"].as_array().unwrap().len(), 5);
}

#[test]
fn simulate_is_deterministic_across_thread_counts() {
    let args = [
        "simulate", "--channel", "ic", "--antennas", "1,3,1,4", "--scheme", "ia", "--trials", "300",
        "--seed", "7", "--format", "csv",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_mimo-dof"))
            .args(args)
            .env("MIMO_DOF_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert!(String::from_utf8(one).unwrap().starts_with("snr_db,rate1,stderr1,rate2,stderr2,trials\n"));
}

#[test]
fn simulate_single_trial_runs() {
    let out = mimo_dof(&["simulate", "--channel", "ic", "--antennas", "2,1,2,3", "--scheme", "zf", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["trials"], 1);
    assert!(doc["estimate"]["ci"][0].as_f64().unwrap().is_finite());
}

#[test]
fn csv_with_estimate_file() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let estimate = dir.path().join("estimate.json");
    let out = mimo_dof(&[
        "simulate", "--channel", "bc", "--antennas", "2,2,2", "--scheme", "p2p", "--trials", "50",
        "--format", "csv",
        "--out", trace.to_str().unwrap(),
        "--estimate-out", estimate.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(trace).unwrap();
    assert_eq!(text.lines().count(), 6);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(estimate).unwrap()).unwrap();
    assert!((doc["estimate"]["d1"].as_f64().unwrap() - 2.0).abs() < 0.1);
    assert!(doc.get("trace").is_none());
}

#[test]
fn verify_reports_and_exit_codes() {
    let ok = mimo_dof(&["verify", "--channel", "ic", "--antennas", "1,3,1,4", "--scheme", "ia", "--trials", "500"]);
    assert_eq!(ok.status.code(), Some(0));
    let report = stdout_json(&ok);
    for key in ["config", "scheme", "estimate", "ci", "region_tag", "verdict"] {
        assert!(report.get(key).is_some(), "{key}");
    }
    assert_eq!(report["verdict"], "boundary");

    // user 2 at power P^2 breaks the power constraint, so its time-shared
    // point lands beyond the outer bound
    let tight = mimo_dof(&[
        "simulate", "--channel", "ic", "--antennas", "1,3,1,4", "--scheme", "tdm", "--user2-exponent",
        "2", "--trials", "200", "--verify-against", "outer",
    ]);
    assert_eq!(tight.status.code(), Some(2));
    let report = mimo_dof(&[
        "verify", "--channel", "ic", "--antennas", "1,3,1,4", "--scheme", "tdm", "--user2-exponent",
        "2", "--trials", "200",
    ]);
    assert_eq!(report.status.code(), Some(2));
    assert_eq!(stdout_json(&report)["verdict"], "outside");
    assert_eq!(stdout_json(&tight)["verification"]["verdict"], "outside");
}

#[test]
fn isotropic_modes() {
    let solo = stdout_json(&mimo_dof(&[
        "simulate", "--channel", "bc", "--antennas", "4,1,2", "--scheme", "isotropic-bc", "--trials",
        "300", "--verify-against", "exact",
    ]));
    assert_eq!(solo["scheme"]["mode"], "single-user");
    assert_eq!(solo["capacity_gap"].as_array().unwrap().len(), 5);
    assert_eq!(solo["verification"]["points"].as_array().unwrap().len(), 2);

    let shared = stdout_json(&mimo_dof(&[
        "simulate", "--channel", "bc", "--antennas", "4,1,2", "--scheme", "isotropic-bc", "--tau",
        "0.5", "--trials", "300",
    ]));
    assert_eq!(shared["scheme"]["mode"], "time-shared");
    assert!(shared.get("capacity_gap").is_none());
    assert!((shared["estimate"]["d2"].as_f64().unwrap() - 1.0).abs() < 0.1);
}
