// SPDX-License-Identifier: Apache-2.0
//! Report rendering: header block, analysis tables, simulation results.

use std::fmt::Write;

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use nvcluster::analysis::{Comparison, PATH_UNIVERSE};
use nvcluster::clustering::ClusterPlan;
use nvcluster::intermit::{MonteCarloConfig, MonteCarloResult, PairedResult, LOSS_MODEL};
use nvcluster::netlist::Netlist;

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub tech_sha256: String,
    pub dvt_path_universe: &'static str,
    pub loss_model: &'static str,
}

impl Header {
    pub fn new(tech_text: &str) -> Self {
        Header {
            tool: "nvcluster",
            version: env!("CARGO_PKG_VERSION"),
            tech_sha256: format!("{:x}", Sha256::digest(tech_text.as_bytes())),
            dvt_path_universe: PATH_UNIVERSE,
            loss_model: LOSS_MODEL,
        }
    }

    pub fn text(&self) -> String {
        format!(
            "# {} {}\n# tech sha256={}\n# {}\n# {}\n",
            self.tool, self.version, self.tech_sha256, self.dvt_path_universe, self.loss_model
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub circuit: String,
    pub inputs: usize,
    pub outputs: usize,
    pub ffs: usize,
    pub gates: usize,
    pub leff: usize,
    pub nvff: usize,
    #[serde(flatten)]
    pub comparison: Comparison,
}

impl Row {
    pub fn new(n: &Netlist, plan: &ClusterPlan, comparison: Comparison) -> Self {
        Row {
            circuit: n.name().to_string(),
            inputs: n.inputs().len(),
            outputs: n.outputs().len(),
            ffs: n.ffs().len(),
            gates: n.gates().len(),
            leff: plan.leff_count(),
            nvff: plan.nvff_count(),
            comparison,
        }
    }
}

pub const CSV_HEADER: &str = "circuit,inputs,outputs,ffs,gates,leff,nvff,\
base_area,clus_area,base_power,clus_power,base_delay,clus_delay,base_energy,clus_energy,\
base_dvt,clus_dvt,area_pct,power_pct,delay_pct,energy_pct,dvt_pct";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.6}"))
}

pub fn analysis_csv(rows: &[Row]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        let (b, c) = (&r.comparison.baseline, &r.comparison.clustered);
        let imp = r.comparison.improvement;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},{},{},{},{}",
            r.circuit,
            r.inputs,
            r.outputs,
            r.ffs,
            r.gates,
            r.leff,
            r.nvff,
            b.cost.area,
            c.cost.area,
            b.cost.power,
            c.cost.power,
            b.cost.delay,
            c.cost.delay,
            b.cost.energy,
            c.cost.energy,
            b.dvt,
            c.dvt,
            opt(imp.map(|i| i.area)),
            opt(imp.map(|i| i.power)),
            opt(imp.map(|i| i.delay)),
            opt(imp.map(|i| i.energy)),
            opt(r.comparison.dvt_improvement),
        );
    }
    out
}

pub fn analysis_json(header: &Header, rows: &[Row]) -> String {
    let v = json!({ "header": header, "designs": rows });
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

pub fn analysis_text(header: &Header, rows: &[Row]) -> String {
    let mut out = header.text();
    for r in rows {
        let (b, c) = (&r.comparison.baseline, &r.comparison.clustered);
        let imp = r.comparison.improvement;
        let _ = writeln!(
            out,
            "\ncircuit {}  inputs={} outputs={} ffs={} gates={}  leff={} nvff={}",
            r.circuit, r.inputs, r.outputs, r.ffs, r.gates, r.leff, r.nvff
        );
        let _ = writeln!(out, "{:<8} {:>14} {:>14} {:>12}", "metric", "baseline", "clustered", "improve%");
        let lines = [
            ("area", b.cost.area, c.cost.area, imp.map(|i| i.area)),
            ("power", b.cost.power, c.cost.power, imp.map(|i| i.power)),
            ("delay", b.cost.delay, c.cost.delay, imp.map(|i| i.delay)),
            ("energy", b.cost.energy, c.cost.energy, imp.map(|i| i.energy)),
            ("dvt", b.dvt, c.dvt, r.comparison.dvt_improvement),
        ];
        for (name, base, clus, pct) in lines {
            let pct = pct.map_or_else(|| "-".to_string(), |p| format!("{p:.3}"));
            let _ = writeln!(out, "{name:<8} {base:>14.6} {clus:>14.6} {pct:>12}");
        }
    }
    out
}

pub fn paired_csv(r: &PairedResult) -> String {
    let mut out = String::from(
        "trial,seed,baseline_attempted,baseline_committed,baseline_losses,\
clustered_attempted,clustered_committed,clustered_losses\n",
    );
    for t in &r.trials {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            t.trial,
            t.seed,
            t.baseline.attempted,
            t.baseline.committed,
            t.baseline.losses,
            t.clustered.attempted,
            t.clustered.committed,
            t.clustered.losses
        );
    }
    out
}

pub fn paired_json(
    header: &Header,
    circuit: &str,
    cfg: &MonteCarloConfig,
    baseline_dvt: f64,
    clustered_dvt: f64,
    r: &PairedResult,
) -> String {
    let v = json!({
        "header": header,
        "circuit": circuit,
        "config": cfg,
        "trials": r.trials,
        "aggregate": {
            "baseline": r.aggregate.baseline,
            "clustered": r.aggregate.clustered,
            "loss_reduction": r.aggregate.loss_reduction,
            "baseline_dvt": baseline_dvt,
            "clustered_dvt": clustered_dvt,
        },
    });
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

pub fn single_json(header: &Header, circuit: &str, cfg: &MonteCarloConfig, dvt: f64, r: &MonteCarloResult) -> String {
    let v = json!({
        "header": header,
        "circuit": circuit,
        "config": cfg,
        "trials": r.trials,
        "aggregate": {
            "losses": r.aggregate.losses,
            "forward_progress": r.aggregate.forward_progress,
            "total_attempted": r.aggregate.total_attempted,
            "total_committed": r.aggregate.total_committed,
            "total_losses": r.aggregate.total_losses,
            "dvt": dvt,
        },
    });
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}
