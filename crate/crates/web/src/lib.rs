// SPDX-License-Identifier: Apache-2.0
//! WebAssembly bindings for the browser demo. Every export takes plain
//! values and returns a JSON string.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use nvcluster::analysis::{compare_designs, sensitive_paths};
use nvcluster::clustering::{apply_plan, nv_cluster, ClusterPlan};
use nvcluster::device::{llg_switch, LlgPhysics, LlgRun, MtjParams};
use nvcluster::intermit::{generate_trace, jittered_trace, random_workload, run_intermittent, HarvesterModel};
use nvcluster::netlist::{emit_bench, parse_bench, Netlist};
use nvcluster::pglib::enumerate_pg_functions;
use nvcluster::tech::TechParams;

/// Bundled s27 netlist, offered as the page's starting text.
pub const S27: &str = include_str!("../../core/data/iscas89/s27.bench");

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

struct Designs {
    original: Netlist,
    plan: ClusterPlan,
    baseline: Netlist,
    clustered: Netlist,
}

fn cluster(text: &str) -> Result<Designs, String> {
    let original = parse_bench("input", text).map_err(|e| e.to_string())?;
    let lib = enumerate_pg_functions(5, true).map_err(|e| e.to_string())?;
    let plan = nv_cluster(&original, &lib).map_err(|e| e.to_string())?;
    let baseline = apply_plan(&original, &ClusterPlan::all_nvff(&original)).map_err(|e| e.to_string())?;
    let clustered = apply_plan(&original, &plan).map_err(|e| e.to_string())?;
    Ok(Designs { original, plan, baseline, clustered })
}

/// Plan, transformed netlist and baseline-vs-clustered report.
pub fn cluster_report(text: &str) -> Result<String, String> {
    let d = cluster(text)?;
    let tech = TechParams::default();
    let cmp = compare_designs(&d.original, &d.plan, &tech).map_err(|e| e.to_string())?;
    let paths = sensitive_paths(&d.clustered, &tech).map_err(|e| e.to_string())?;
    Ok(to_json(&json!({
        "summary": format!("leff={} nvff={}", d.plan.leff_count(), d.plan.nvff_count()),
        "plan": d.plan.dump(&d.original),
        "cells": d.plan.cell_names(),
        "bench": emit_bench(&d.clustered),
        "comparison": cmp,
        "paths": paths.paths,
    })))
}

/// Macrospin trajectory at `ratio` times the instability current.
pub fn llg_report(ratio: f64, duration_ns: f64, step_ns: f64) -> Result<String, String> {
    let phys = LlgPhysics::default();
    let run = LlgRun {
        current: ratio * phys.instability_current(),
        duration: duration_ns,
        step: step_ns,
        record_every: ((duration_ns / step_ns) / 400.0).ceil().max(1.0) as usize,
    };
    let r = llg_switch(&MtjParams::default(), &phys, &run).map_err(|e| e.to_string())?;
    Ok(to_json(&json!({
        "current_ua": run.current,
        "switched": r.switched,
        "switching_time": r.switching_time,
        "max_norm_drift": r.max_norm_drift,
        "t": r.trajectory.iter().map(|s| s.t).collect::<Vec<_>>(),
        "mx": r.trajectory.iter().map(|s| s.m[0]).collect::<Vec<_>>(),
        "my": r.trajectory.iter().map(|s| s.m[1]).collect::<Vec<_>>(),
        "mz": r.trajectory.iter().map(|s| s.m[2]).collect::<Vec<_>>(),
    })))
}

/// One jittered supply trace and both designs of `text` run over it.
#[allow(clippy::too_many_arguments)]
pub fn intermittent_report(
    text: &str,
    capacitance_nf: f64,
    harvest_ua: f64,
    load_ua: f64,
    horizon_ns: f64,
    jitter: f64,
    workload: usize,
    seed: u64,
) -> Result<String, String> {
    let d = cluster(text)?;
    let tech = TechParams::default();
    let model = HarvesterModel { capacitance_nf, harvest_ua, load_ua, ..HarvesterModel::reference() };
    let base = generate_trace(&model, horizon_ns).map_err(|e| e.to_string())?;
    let trace = jittered_trace(&base, jitter, seed).map_err(|e| e.to_string())?;
    let w = random_workload(d.original.inputs().len(), workload, seed);
    let b = run_intermittent(&d.baseline, &tech, &trace, &w, seed).map_err(|e| e.to_string())?;
    let c = run_intermittent(&d.clustered, &tech, &trace, &w, seed).map_err(|e| e.to_string())?;
    let dvt = |n: &Netlist| sensitive_paths(n, &tech).map(|r| r.dvt).map_err(|e| e.to_string());
    Ok(to_json(&json!({
        "segments": trace.segments,
        "baseline": b,
        "clustered": c,
        "baseline_dvt": dvt(&d.baseline)?,
        "clustered_dvt": dvt(&d.clustered)?,
    })))
}

#[wasm_bindgen]
pub fn sample_bench() -> String {
    S27.to_string()
}

#[wasm_bindgen]
pub fn cluster_bench(text: &str) -> Result<String, JsValue> {
    cluster_report(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn llg_trajectory(ratio: f64, duration_ns: f64, step_ns: f64) -> Result<String, JsValue> {
    llg_report(ratio, duration_ns, step_ns).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn simulate_power(
    text: &str,
    capacitance_nf: f64,
    harvest_ua: f64,
    load_ua: f64,
    horizon_ns: f64,
    jitter: f64,
    workload: usize,
    seed: u32,
) -> Result<String, JsValue> {
    intermittent_report(text, capacitance_nf, harvest_ua, load_ua, horizon_ns, jitter, workload, seed as u64)
        .map_err(|e| JsValue::from_str(&e))
}
