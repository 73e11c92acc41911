// SPDX-License-Identifier: Apache-2.0
//! Cost aggregation, sensitive-path timing and the Design Vulnerability
//! Time (DVT).
//!
//! Endpoints are primary-input registers, flip-flops and primary-output
//! registers. A pair is reported when the destination is reachable from
//! the source through combinational logic; `t_C` is the worst gate-delay
//! sum between the two.

use serde::Serialize;

use crate::clustering::{apply_plan, ClusterError, ClusterPlan};
use crate::netlist::{FfKind, NetId, Netlist};
use crate::tech::{RegCost, TechParams};

/// Stated in every report so that DVT numbers can be interpreted.
pub const PATH_UNIVERSE: &str =
    "dvt path universe: every connected (source, destination) endpoint pair; \
     t_C is the longest gate-delay sum between the pair";

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("volatile flip-flop `{0}` has no defined vulnerability time")]
    VolatileFf(String),
    #[error("baseline {0} is zero")]
    ZeroBaseline(&'static str),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Endpoint {
    Input(usize),
    Ff(usize),
    Output(usize),
}

impl Endpoint {
    pub fn label(self, netlist: &Netlist) -> String {
        match self {
            Endpoint::Input(i) => format!("in:{}", netlist.net_name(netlist.inputs()[i])),
            Endpoint::Ff(f) => format!("ff:{}", netlist.ff_name(f)),
            Endpoint::Output(o) => format!("out:{}", netlist.net_name(netlist.outputs()[o])),
        }
    }

    fn reg(self, netlist: &Netlist, tech: &TechParams) -> RegCost {
        match self {
            Endpoint::Input(_) => tech.input_reg,
            Endpoint::Output(_) => tech.output_reg,
            Endpoint::Ff(f) => {
                let ff = &netlist.ffs()[f];
                tech.ff(ff.kind, ff.inputs.len())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairTiming {
    pub source: Endpoint,
    pub destination: Endpoint,
    pub t_rd: f64,
    pub t_c: f64,
    pub t_wr: f64,
    pub t_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivePath {
    pub source: String,
    pub destination: String,
    pub t_c: f64,
    pub t_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DvtReport {
    pub paths: Vec<SensitivePath>,
    pub dvt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostReport {
    pub area: f64,
    pub power: f64,
    pub delay: f64,
    pub energy: f64,
}

/// Percent improvements, `100 * (base - cand) / base`; negative when worse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Improvement {
    pub area: f64,
    pub power: f64,
    pub delay: f64,
    pub energy: f64,
}

fn sources(netlist: &Netlist) -> Vec<(Endpoint, NetId)> {
    let ins = netlist
        .inputs()
        .iter()
        .enumerate()
        .map(|(i, &n)| (Endpoint::Input(i), n));
    let ffs = netlist
        .ffs()
        .iter()
        .enumerate()
        .map(|(f, ff)| (Endpoint::Ff(f), ff.output));
    ins.chain(ffs).collect()
}

/// Longest gate-delay arrival from `start` to every net, `None` if unreachable.
fn arrivals(netlist: &Netlist, tech: &TechParams, start: NetId) -> Vec<Option<f64>> {
    let mut arr = vec![None; netlist.net_count()];
    arr[start.0] = Some(0.0);
    for &g in netlist.topo_order() {
        let gate = &netlist.gates()[g];
        let best = gate
            .inputs
            .iter()
            .filter_map(|n| arr[n.0])
            .fold(None, |acc: Option<f64>, a| Some(acc.map_or(a, |b| b.max(a))));
        if let Some(a) = best {
            arr[gate.output.0] = Some(a + tech.gate(gate.kind).delay);
        }
    }
    arr
}

fn pairs_from(netlist: &Netlist, tech: &TechParams, src: Endpoint, net: NetId) -> Vec<PairTiming> {
    let arr = arrivals(netlist, tech, net);
    let t_rd = src.reg(netlist, tech).t_rd;
    let mut out = Vec::new();
    let mut push = |dst: Endpoint, t_c: f64| {
        let t_wr = dst.reg(netlist, tech).t_wr;
        out.push(PairTiming {
            source: src,
            destination: dst,
            t_rd,
            t_c,
            t_wr,
            t_s: t_wr + t_rd + t_c,
        });
    };
    for (f, ff) in netlist.ffs().iter().enumerate() {
        let t = ff
            .inputs
            .iter()
            .filter_map(|n| arr[n.0])
            .fold(None, |acc: Option<f64>, a| Some(acc.map_or(a, |b| b.max(a))));
        if let Some(t_c) = t {
            push(Endpoint::Ff(f), t_c);
        }
    }
    for (o, n) in netlist.outputs().iter().enumerate() {
        if let Some(t_c) = arr[n.0] {
            push(Endpoint::Output(o), t_c);
        }
    }
    out
}

/// Every connected endpoint pair with its timing, ordered by source
/// (inputs, then flip-flops) and destination (flip-flops, then outputs).
pub fn pair_timings(netlist: &Netlist, tech: &TechParams) -> Vec<PairTiming> {
    let srcs = sources(netlist);
    #[cfg(feature = "parallel")]
    let per_source: Vec<Vec<PairTiming>> = {
        use rayon::prelude::*;
        srcs.par_iter()
            .map(|&(s, n)| pairs_from(netlist, tech, s, n))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_source: Vec<Vec<PairTiming>> = srcs
        .iter()
        .map(|&(s, n)| pairs_from(netlist, tech, s, n))
        .collect();
    per_source.into_iter().flatten().collect()
}

/// Area and power summed over gates, flip-flops and I/O registers; delay is
/// the worst register-to-register `t_RD + t_C + t_WR`.
pub fn cost(netlist: &Netlist, tech: &TechParams) -> CostReport {
    let mut area = 0.0;
    let mut power = 0.0;
    for gate in netlist.gates() {
        let c = tech.gate(gate.kind);
        area += c.area;
        power += c.power;
    }
    for ff in netlist.ffs() {
        let c = tech.ff(ff.kind, ff.inputs.len());
        area += c.area;
        power += c.power;
    }
    let n_in = netlist.inputs().len() as f64;
    let n_out = netlist.outputs().len() as f64;
    area += n_in * tech.input_reg.area + n_out * tech.output_reg.area;
    power += n_in * tech.input_reg.power + n_out * tech.output_reg.power;
    let delay = pair_timings(netlist, tech)
        .iter()
        .map(|p| p.t_s)
        .fold(0.0, f64::max);
    CostReport {
        area,
        power,
        delay,
        energy: power * delay,
    }
}

/// Per-pair sensitive times and their sum.
pub fn sensitive_paths(netlist: &Netlist, tech: &TechParams) -> Result<DvtReport, AnalysisError> {
    if let Some(f) = netlist.ffs().iter().position(|f| f.kind == FfKind::Dff) {
        return Err(AnalysisError::VolatileFf(netlist.ff_name(f).to_string()));
    }
    let pairs = pair_timings(netlist, tech);
    let dvt = pairs.iter().map(|p| p.t_s).sum();
    let paths = pairs
        .iter()
        .map(|p| SensitivePath {
            source: p.source.label(netlist),
            destination: p.destination.label(netlist),
            t_c: p.t_c,
            t_s: p.t_s,
        })
        .collect();
    Ok(DvtReport { paths, dvt })
}

pub fn compare(baseline: &CostReport, candidate: &CostReport) -> Result<Improvement, AnalysisError> {
    let pct = |name: &'static str, b: f64, c: f64| -> Result<f64, AnalysisError> {
        if b == 0.0 {
            return Err(AnalysisError::ZeroBaseline(name));
        }
        Ok(100.0 * (b - c) / b)
    };
    Ok(Improvement {
        area: pct("area", baseline.area, candidate.area)?,
        power: pct("power", baseline.power, candidate.power)?,
        delay: pct("delay", baseline.delay, candidate.delay)?,
        energy: pct("energy", baseline.energy, candidate.energy)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    pub cost: CostReport,
    pub dvt: f64,
    pub paths: usize,
}

/// Baseline (every FF an NVFF) against the clustered design.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub baseline: DesignReport,
    pub clustered: DesignReport,
    /// `None` when some baseline metric is zero.
    pub improvement: Option<Improvement>,
    pub dvt_improvement: Option<f64>,
}

fn design_report(netlist: &Netlist, tech: &TechParams) -> Result<DesignReport, AnalysisError> {
    let dvt = sensitive_paths(netlist, tech)?;
    Ok(DesignReport {
        cost: cost(netlist, tech),
        dvt: dvt.dvt,
        paths: dvt.paths.len(),
    })
}

/// Applies both the all-NVFF plan and `plan` to `original` and reports both.
pub fn compare_designs(original: &Netlist, plan: &ClusterPlan, tech: &TechParams) -> Result<Comparison, AnalysisError> {
    let base_net = apply_plan(original, &ClusterPlan::all_nvff(original))?;
    let clus_net = apply_plan(original, plan)?;
    let baseline = design_report(&base_net, tech)?;
    let clustered = design_report(&clus_net, tech)?;
    let improvement = compare(&baseline.cost, &clustered.cost).ok();
    let dvt_improvement =
        (baseline.dvt != 0.0).then(|| 100.0 * (baseline.dvt - clustered.dvt) / baseline.dvt);
    Ok(Comparison {
        baseline,
        clustered,
        improvement,
        dvt_improvement,
    })
}
