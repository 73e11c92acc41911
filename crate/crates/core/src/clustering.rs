// SPDX-License-Identifier: Apache-2.0
//! NV-Clustering: fold a flip-flop and the logic cone feeding it into one
//! logic-embedded flip-flop when three structural criteria hold, and map
//! every other flip-flop to a store-only non-volatile flip-flop.
//!
//! 1. the cone's function is realizable by a single PG,
//! 2. every gate of the cone has fan-out one (the sink feeds only the FF),
//! 3. no gate of the cone reads a flip-flop output directly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;

use crate::netlist::{emit_bench, FfKind, NetId, Netlist, NetlistBuilder, NetlistError, Sink};
use crate::pglib::{cell_name, BooleanFunction, PgLibrary, PgRealization};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ClusterError {
    #[error("unknown flip-flop `{0}`")]
    UnknownFf(String),
    #[error("flip-flop `{0}` already embeds logic")]
    AlreadyEmbedded(String),
    #[error("cone does not belong to this netlist: {0}")]
    ConeMismatch(String),
    #[error("plan was computed for a different netlist")]
    StalePlan,
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

/// Single-sink set of gates feeding a flip-flop's D net.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub root: usize,
    /// Gate indices in absorption order; the first is the sink.
    pub members: Vec<usize>,
    /// Breadth-first distance from the sink, parallel to `members`.
    pub depths: Vec<usize>,
    /// Free inputs of the cone; variable `i` of `function` is `leaves[i]`.
    pub leaves: Vec<NetId>,
    /// `None` only when the leaves exceed the truth-table capacity.
    pub function: Option<BooleanFunction>,
}

impl Cone {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn gate_names<'n>(&self, netlist: &'n Netlist) -> Vec<&'n str> {
        let mut names: Vec<&str> = self.members.iter().map(|&g| netlist.gate_name(g)).collect();
        names.sort_unstable();
        names
    }

    pub fn leaf_names<'n>(&self, netlist: &'n Netlist) -> Vec<&'n str> {
        self.leaves.iter().map(|&n| netlist.net_name(n)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriteriaReport {
    pub single_pg: bool,
    pub realization: Option<PgRealization>,
    pub fanout_ok: bool,
    pub fanout_violation: Option<String>,
    pub no_ff_input: bool,
    pub ff_input_violation: Option<String>,
}

impl CriteriaReport {
    pub fn accepted(&self) -> bool {
        self.single_pg && self.fanout_ok && self.no_ff_input
    }

    fn only_c1_failed(&self) -> bool {
        !self.single_pg && self.fanout_ok && self.no_ff_input
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AcceptedCone {
    pub cone: Cone,
    pub realization: PgRealization,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterPlan {
    /// Keyed by flip-flop id.
    pub accepted: BTreeMap<String, AcceptedCone>,
    pub residual: BTreeSet<String>,
    fingerprint: u64,
}

impl ClusterPlan {
    pub fn leff_count(&self) -> usize {
        self.accepted.len()
    }

    pub fn nvff_count(&self) -> usize {
        self.residual.len()
    }

    /// Plan that maps every flip-flop to an NVFF (the conventional
    /// all-non-volatile baseline).
    pub fn all_nvff(netlist: &Netlist) -> ClusterPlan {
        ClusterPlan {
            accepted: BTreeMap::new(),
            residual: (0..netlist.ffs().len())
                .map(|f| netlist.ff_name(f).to_string())
                .collect(),
            fingerprint: netlist_fingerprint(netlist),
        }
    }

    /// One line per flip-flop, sorted by id:
    /// `ff=<id> kind=<LEFF|NVFF> gates=[..] table=0x<hex> leaves=[..]`.
    /// NVFF lines carry the identity function of their D net.
    pub fn dump(&self, netlist: &Netlist) -> String {
        let mut lines: BTreeMap<&str, String> = BTreeMap::new();
        for (id, acc) in &self.accepted {
            let f = acc.cone.function.expect("accepted cones have a function");
            lines.insert(
                id,
                format!(
                    "ff={id} kind=LEFF gates=[{}] table=0x{} leaves=[{}]",
                    acc.cone.gate_names(netlist).join(","),
                    f.hex(),
                    acc.cone.leaf_names(netlist).join(",")
                ),
            );
        }
        for id in &self.residual {
            let d = netlist
                .find_ff(id)
                .and_then(|f| netlist.ffs()[f].d())
                .map(|n| netlist.net_name(n))
                .unwrap_or("");
            lines.insert(
                id,
                format!("ff={id} kind=NVFF gates=[] table=0x2 leaves=[{d}]"),
            );
        }
        let mut out = String::new();
        for line in lines.values() {
            let _ = writeln!(out, "{line}");
        }
        out
    }

    /// Human-readable cell names of the accepted cones, by flip-flop id.
    pub fn cell_names(&self) -> BTreeMap<&str, String> {
        self.accepted
            .iter()
            .filter_map(|(id, a)| a.cone.function.map(|f| (id.as_str(), cell_name(&f))))
            .collect()
    }
}

pub(crate) fn netlist_fingerprint(netlist: &Netlist) -> u64 {
    crate::fnv1a(emit_bench(netlist).as_bytes())
}

/// Grows the cone feeding flip-flop `ff_id`, breadth-first with
/// lexicographic tie-breaking. A frontier gate is absorbed iff its fan-out
/// is exactly one, none of its inputs is a flip-flop output, and the leaf
/// count stays within `max_leaves`. The sink itself is always part of the
/// cone, but growth starts only if the sink passes the same two structural
/// tests.
pub fn extract_cone(netlist: &Netlist, ff_id: &str, max_leaves: usize) -> Result<Cone, ClusterError> {
    let root = netlist
        .find_ff(ff_id)
        .ok_or_else(|| ClusterError::UnknownFf(ff_id.to_string()))?;
    let d = netlist.ffs()[root]
        .d()
        .ok_or_else(|| ClusterError::AlreadyEmbedded(ff_id.to_string()))?;

    let Some(sink) = netlist.gate_driving(d) else {
        return Ok(Cone {
            root,
            members: Vec::new(),
            depths: Vec::new(),
            leaves: vec![d],
            function: BooleanFunction::new(1, 0b10),
        });
    };

    let absorbable = |g: usize| -> bool {
        let gate = &netlist.gates()[g];
        netlist.fanout_of_net(gate.output) == 1
            && !gate.inputs.iter().any(|&n| netlist.is_ff_output(n))
    };

    let mut members = vec![sink];
    let mut depths = vec![0usize];
    let mut leaves: Vec<NetId> = Vec::new();
    for &n in &netlist.gates()[sink].inputs {
        if !leaves.contains(&n) {
            leaves.push(n);
        }
    }

    if absorbable(sink) {
        let mut level_nets: Vec<NetId> = leaves.clone();
        let mut depth = 1;
        while !level_nets.is_empty() {
            level_nets.sort_by(|a, b| netlist.net_name(*a).cmp(netlist.net_name(*b)));
            let mut next_level = Vec::new();
            for net in level_nets {
                let Some(pos) = leaves.iter().position(|&l| l == net) else {
                    continue;
                };
                let Some(g) = netlist.gate_driving(net) else {
                    continue;
                };
                if !absorbable(g) {
                    continue;
                }
                let mut candidate = leaves.clone();
                candidate.remove(pos);
                let mut added = Vec::new();
                for &i in &netlist.gates()[g].inputs {
                    if !candidate.contains(&i) {
                        candidate.push(i);
                        added.push(i);
                    }
                }
                if candidate.len() > max_leaves {
                    continue;
                }
                leaves = candidate;
                members.push(g);
                depths.push(depth);
                next_level.extend(added);
            }
            level_nets = next_level;
            depth += 1;
        }
    }

    let function = cone_function(netlist, &members, &leaves);
    Ok(Cone {
        root,
        members,
        depths,
        leaves,
        function,
    })
}

/// Truth table of the cone sink over `leaves`, by exhaustive evaluation.
fn cone_function(netlist: &Netlist, members: &[usize], leaves: &[NetId]) -> Option<BooleanFunction> {
    if leaves.len() > BooleanFunction::MAX_ARITY {
        return None;
    }
    let Some(&sink) = members.first() else {
        return BooleanFunction::new(1, 0b10);
    };
    let mut order: Vec<usize> = members.to_vec();
    let rank: std::collections::HashMap<usize, usize> = netlist
        .topo_order()
        .iter()
        .enumerate()
        .map(|(i, &g)| (g, i))
        .collect();
    order.sort_by_key(|g| rank[g]);
    let mut values: std::collections::HashMap<NetId, bool> = std::collections::HashMap::new();
    Some(BooleanFunction::from_fn(leaves.len(), |assign| {
        values.clear();
        for (i, &l) in leaves.iter().enumerate() {
            values.insert(l, (assign >> i) & 1 == 1);
        }
        for &g in &order {
            let gate = &netlist.gates()[g];
            let v = gate.kind.eval(gate.inputs.iter().map(|n| values[n]));
            values.insert(gate.output, v);
        }
        values[&netlist.gates()[sink].output]
    }))
}

/// Evaluates the three clustering criteria for `cone`.
pub fn check_criteria(netlist: &Netlist, cone: &Cone, library: &PgLibrary) -> Result<CriteriaReport, ClusterError> {
    let ff = netlist
        .ffs()
        .get(cone.root)
        .ok_or_else(|| ClusterError::ConeMismatch(format!("no flip-flop #{}", cone.root)))?;
    let d = ff
        .d()
        .ok_or_else(|| ClusterError::AlreadyEmbedded(netlist.ff_name(cone.root).to_string()))?;
    if let Some(&g) = cone.members.iter().find(|&&g| g >= netlist.gates().len()) {
        return Err(ClusterError::ConeMismatch(format!("no gate #{g}")));
    }
    match cone.members.first() {
        Some(&sink) if netlist.gates()[sink].output != d => {
            return Err(ClusterError::ConeMismatch(format!(
                "sink `{}` does not drive `{}`",
                netlist.gate_name(sink),
                netlist.net_name(d)
            )));
        }
        None if cone.leaves != [d] => {
            return Err(ClusterError::ConeMismatch("empty cone must have the D net as its only leaf".into()));
        }
        _ => {}
    }

    let realization = cone
        .function
        .as_ref()
        .and_then(|f| library.realization(f))
        .cloned();

    let mut fanout_violation = None;
    for (i, &g) in cone.members.iter().enumerate() {
        let out = netlist.gates()[g].output;
        let ok = if i == 0 {
            netlist.sinks(out) == [Sink::FfPin { ff: cone.root, pin: 0 }]
        } else {
            netlist.fanout_of_net(out) == 1
        };
        if !ok {
            fanout_violation = Some(netlist.gate_name(g).to_string());
            break;
        }
    }

    let ff_input_violation = cone
        .members
        .iter()
        .find(|&&g| {
            netlist.gates()[g]
                .inputs
                .iter()
                .any(|&n| netlist.is_ff_output(n))
        })
        .map(|&g| netlist.gate_name(g).to_string());

    Ok(CriteriaReport {
        single_pg: realization.is_some(),
        realization,
        fanout_ok: fanout_violation.is_none(),
        fanout_violation,
        no_ff_input: ff_input_violation.is_none(),
        ff_input_violation,
    })
}

/// Removes the most recently absorbed gate of maximal depth and recomputes
/// leaves and function. Returns `false` if the cone was already empty.
pub fn trim_deepest(netlist: &Netlist, cone: &mut Cone) -> bool {
    let Some(max_depth) = cone.depths.iter().copied().max() else {
        return false;
    };
    let idx = cone
        .depths
        .iter()
        .rposition(|&d| d == max_depth)
        .expect("max exists");
    cone.members.remove(idx);
    cone.depths.remove(idx);
    if cone.members.is_empty() {
        let d = netlist.ffs()[cone.root].d().expect("storage flip-flop");
        cone.leaves = vec![d];
        cone.function = BooleanFunction::new(1, 0b10);
        return true;
    }
    // Leaves are the member inputs not driven by members, kept in their
    // previous relative order with newly exposed nets appended.
    let member_outs: BTreeSet<NetId> = cone
        .members
        .iter()
        .map(|&g| netlist.gates()[g].output)
        .collect();
    let needed: Vec<NetId> = cone
        .members
        .iter()
        .flat_map(|&g| netlist.gates()[g].inputs.iter().copied())
        .filter(|n| !member_outs.contains(n))
        .collect();
    let mut leaves: Vec<NetId> = cone
        .leaves
        .iter()
        .copied()
        .filter(|n| needed.contains(n))
        .collect();
    for n in needed {
        if !leaves.contains(&n) {
            leaves.push(n);
        }
    }
    cone.leaves = leaves;
    cone.function = cone_function(netlist, &cone.members, &cone.leaves);
    true
}

/// Outcome for one flip-flop during planning.
#[derive(Debug, Clone)]
enum Decision {
    Leff(AcceptedCone),
    Nvff,
}

fn decide(netlist: &Netlist, ff: usize, library: &PgLibrary, max_leaves: usize) -> Result<Decision, ClusterError> {
    let id = netlist.ff_name(ff);
    let mut cone = extract_cone(netlist, id, max_leaves)?;
    loop {
        if cone.is_empty() {
            return Ok(Decision::Nvff);
        }
        if cone.leaves.len() > max_leaves {
            trim_deepest(netlist, &mut cone);
            continue;
        }
        let report = check_criteria(netlist, &cone, library)?;
        if report.accepted() {
            let realization = report.realization.expect("accepted implies realizable");
            return Ok(Decision::Leff(AcceptedCone { cone, realization }));
        }
        if !report.only_c1_failed() {
            return Ok(Decision::Nvff);
        }
        trim_deepest(netlist, &mut cone);
    }
}

/// Runs the clustering pass over every flip-flop in id order.
pub fn nv_cluster(netlist: &Netlist, library: &PgLibrary) -> Result<ClusterPlan, ClusterError> {
    nv_cluster_limited(netlist, library, library.max_arity())
}

/// As [`nv_cluster`], growing cones to at most `max_leaves` leaves (capped
/// at the library's widest function).
pub fn nv_cluster_limited(netlist: &Netlist, library: &PgLibrary, max_leaves: usize) -> Result<ClusterPlan, ClusterError> {
    let max_leaves = max_leaves.min(library.max_arity());
    if let Some(f) = netlist.ffs().iter().position(|f| f.kind == FfKind::LeFf) {
        return Err(ClusterError::AlreadyEmbedded(netlist.ff_name(f).to_string()));
    }
    let mut order: Vec<usize> = (0..netlist.ffs().len()).collect();
    order.sort_by(|&a, &b| netlist.ff_name(a).cmp(netlist.ff_name(b)));

    #[cfg(feature = "parallel")]
    let decisions: Vec<Result<Decision, ClusterError>> = {
        use rayon::prelude::*;
        order
            .par_iter()
            .map(|&f| decide(netlist, f, library, max_leaves))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let decisions: Vec<Result<Decision, ClusterError>> = order
        .iter()
        .map(|&f| decide(netlist, f, library, max_leaves))
        .collect();

    let mut accepted = BTreeMap::new();
    let mut residual = BTreeSet::new();
    let mut claimed: BTreeSet<usize> = BTreeSet::new();
    for (&f, decision) in order.iter().zip(decisions) {
        let id = netlist.ff_name(f).to_string();
        match decision? {
            Decision::Leff(acc) => {
                for &g in &acc.cone.members {
                    assert!(claimed.insert(g), "gate `{}` claimed by two cones", netlist.gate_name(g));
                }
                accepted.insert(id, acc);
            }
            Decision::Nvff => {
                residual.insert(id);
            }
        }
    }
    Ok(ClusterPlan {
        accepted,
        residual,
        fingerprint: netlist_fingerprint(netlist),
    })
}

/// Rewrites the netlist according to `plan`: absorbed gates disappear,
/// accepted flip-flops become LE-FFs over the cone leaves, and all others
/// become NVFFs.
pub fn apply_plan(netlist: &Netlist, plan: &ClusterPlan) -> Result<Netlist, ClusterError> {
    if plan.fingerprint != netlist_fingerprint(netlist) {
        return Err(ClusterError::StalePlan);
    }
    let absorbed: BTreeSet<usize> = plan
        .accepted
        .values()
        .flat_map(|a| a.cone.members.iter().copied())
        .collect();
    let mut b = NetlistBuilder::new(netlist.name());
    for &i in netlist.inputs() {
        b.add_input(netlist.net_name(i));
    }
    for &o in netlist.outputs() {
        b.add_output(netlist.net_name(o));
    }
    for (f, ff) in netlist.ffs().iter().enumerate() {
        let id = netlist.ff_name(f);
        if let Some(acc) = plan.accepted.get(id) {
            let leaves = acc.cone.leaf_names(netlist);
            b.add_ff(id, FfKind::LeFf, &leaves, acc.cone.function);
        } else {
            let ins: Vec<&str> = ff.inputs.iter().map(|&n| netlist.net_name(n)).collect();
            let kind = if plan.residual.contains(id) {
                FfKind::NvFf
            } else {
                ff.kind
            };
            b.add_ff(id, kind, &ins, ff.function);
        }
    }
    for (g, gate) in netlist.gates().iter().enumerate() {
        if absorbed.contains(&g) {
            continue;
        }
        let ins: Vec<&str> = gate.inputs.iter().map(|&n| netlist.net_name(n)).collect();
        b.add_gate(netlist.net_name(gate.output), gate.kind, &ins);
    }
    Ok(b.build()?)
}
