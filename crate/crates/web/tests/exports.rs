// SPDX-License-Identifier: Apache-2.0

use nvcluster_web::{cluster_report, intermittent_report, llg_report, S27};
use serde_json::Value;

#[test]
fn cluster_sample() {
    let v: Value = serde_json::from_str(&cluster_report(S27).unwrap()).unwrap();
    assert_eq!(v["summary"], "leff=2 nvff=1");
    assert!(v["plan"].as_str().unwrap().contains("ff=G5 kind=LEFF"));
    assert_eq!(v["cells"]["G7"], "NOR2");
    assert!(v["comparison"]["clustered"]["dvt"].as_f64() < v["comparison"]["baseline"]["dvt"].as_f64());
}

#[test]
fn cluster_reports_parse_errors() {
    let err = cluster_report("INPUT(a)\nb = MUX(a)\n").unwrap_err();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn llg_switches_above_threshold() {
    let v: Value = serde_json::from_str(&llg_report(2.0, 100.0, 1e-3).unwrap()).unwrap();
    assert_eq!(v["switched"], true);
    let t = v["t"].as_array().unwrap();
    assert!(t.len() <= 402 && t.len() == v["mz"].as_array().unwrap().len());
    let v: Value = serde_json::from_str(&llg_report(0.5, 100.0, 1e-3).unwrap()).unwrap();
    assert_eq!(v["switched"], false);
    assert!(llg_report(2.0, 1.0, 0.5).is_err());
}

#[test]
fn intermittent_pair() {
    let out = intermittent_report(S27, 0.1, 10.0, 110.0, 3e5, 0.3, 1000, 4).unwrap();
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["segments"].as_array().unwrap().len() > 3);
    assert!(v["clustered"]["losses"].as_u64() <= v["baseline"]["losses"].as_u64());
    assert_eq!(out, intermittent_report(S27, 0.1, 10.0, 110.0, 3e5, 0.3, 1000, 4).unwrap());
}
