// SPDX-License-Identifier: Apache-2.0
//! Gate-level netlist IR for ISCAS-89 style sequential circuits.
//!
//! A [`Netlist`] is built once through [`NetlistBuilder`] (or
//! [`parse_bench`]) and is immutable afterwards. Every net has exactly one
//! driver: a primary input, a gate output, or a flip-flop output. Every
//! combinational cycle is rejected at build time, so the gates always admit
//! a topological order.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::pglib::BooleanFunction;

mod bench;
mod sim;

pub use bench::{emit_bench, parse_bench};
pub use sim::{SimTrace, Simulator};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unsupported gate kind `{kind}`")]
    UnsupportedGate {
        kind: String,
        line: usize,
        column: usize,
    },
    #[error("{}net `{net}` has more than one driver", line_prefix(*line))]
    DuplicateDriver { net: String, line: Option<usize> },
    #[error("net `{net}` is used but never driven")]
    UndrivenNet { net: String },
    #[error("combinational loop through gates: {}", members.join(", "))]
    CombinationalLoop { members: Vec<String> },
    #[error("{}element `{element}` of kind {kind} cannot take {count} inputs", line_prefix(*line))]
    BadArity {
        element: String,
        kind: String,
        count: usize,
        line: Option<usize>,
    },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("vector width mismatch: expected {expected} bits, found {found}")]
    WidthMismatch { expected: usize, found: usize },
}

fn line_prefix(line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: "),
        None => String::new(),
    }
}

pub type Result<T, E = NetlistError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NetId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Not,
    Buff,
    Xor,
    Xnor,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Not,
        GateKind::Buff,
        GateKind::Xor,
        GateKind::Xnor,
    ];

    /// Case-insensitive keyword lookup. `BUF` is accepted as an alias of `BUFF`.
    pub fn from_keyword(kw: &str) -> Option<GateKind> {
        let kind = match kw.to_ascii_uppercase().as_str() {
            "AND" => GateKind::And,
            "NAND" => GateKind::Nand,
            "OR" => GateKind::Or,
            "NOR" => GateKind::Nor,
            "NOT" => GateKind::Not,
            "BUFF" | "BUF" => GateKind::Buff,
            "XOR" => GateKind::Xor,
            "XNOR" => GateKind::Xnor,
            _ => return None,
        };
        Some(kind)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Not => "NOT",
            GateKind::Buff => "BUFF",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
        }
    }

    pub fn is_unary(self) -> bool {
        matches!(self, GateKind::Not | GateKind::Buff)
    }

    pub fn accepts_inputs(self, count: usize) -> bool {
        if self.is_unary() {
            count == 1
        } else {
            count >= 2
        }
    }

    pub fn eval<I: IntoIterator<Item = bool>>(self, inputs: I) -> bool {
        let mut it = inputs.into_iter();
        match self {
            GateKind::And => it.all(|b| b),
            GateKind::Nand => !it.all(|b| b),
            GateKind::Or => it.any(|b| b),
            GateKind::Nor => !it.any(|b| b),
            GateKind::Not => !it.next().unwrap_or(false),
            GateKind::Buff => it.next().unwrap_or(false),
            GateKind::Xor => it.fold(false, |a, b| a ^ b),
            GateKind::Xnor => !it.fold(false, |a, b| a ^ b),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FfKind {
    /// Volatile D flip-flop, as found in the source benchmarks.
    Dff,
    /// Non-volatile flip-flop that only stores.
    NvFf,
    /// Logic-embedded non-volatile flip-flop.
    LeFf,
}

impl FfKind {
    pub fn keyword(self) -> &'static str {
        match self {
            FfKind::Dff => "DFF",
            FfKind::NvFf => "NVFF",
            FfKind::LeFf => "LEFF",
        }
    }

    pub fn is_volatile(self) -> bool {
        self == FfKind::Dff
    }
}

impl fmt::Display for FfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A state element. For `Dff`/`NvFf`, `inputs` holds the single D net. For
/// `LeFf`, `inputs` are the ordered leaf nets of the embedded function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipFlop {
    pub kind: FfKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
    pub function: Option<BooleanFunction>,
}

impl FlipFlop {
    /// The D net of a storage-only flip-flop; `None` for LE-FFs.
    pub fn d(&self) -> Option<NetId> {
        match self.kind {
            FfKind::LeFf => None,
            _ => self.inputs.first().copied(),
        }
    }

    /// Value captured at the clock edge given the current net values.
    pub fn next_state(&self, values: &[bool]) -> bool {
        match &self.function {
            Some(f) => {
                let idx = self
                    .inputs
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (i, n)| acc | ((values[n.0] as usize) << i));
                f.eval(idx)
            }
            None => values[self.inputs[0].0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Driver {
    Input(usize),
    Gate(usize),
    Ff(usize),
}

/// One consumer pin of a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sink {
    GatePin { gate: usize, pin: usize },
    FfPin { ff: usize, pin: usize },
    Output(usize),
}

#[derive(Debug, Clone)]
pub struct Netlist {
    name: String,
    net_names: Vec<String>,
    lookup: HashMap<String, NetId>,
    drivers: Vec<Driver>,
    sinks: Vec<Vec<Sink>>,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    gates: Vec<Gate>,
    ffs: Vec<FlipFlop>,
    topo: Vec<usize>,
}

impl Netlist {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn ffs(&self) -> &[FlipFlop] {
        &self.ffs
    }

    pub fn net_count(&self) -> usize {
        self.net_names.len()
    }

    pub fn net_name(&self, net: NetId) -> &str {
        &self.net_names[net.0]
    }

    pub fn net(&self, name: &str) -> Option<NetId> {
        self.lookup.get(name).copied()
    }

    pub fn driver(&self, net: NetId) -> Driver {
        self.drivers[net.0]
    }

    pub fn sinks(&self, net: NetId) -> &[Sink] {
        &self.sinks[net.0]
    }

    /// Gate indices in topological order (every gate after its drivers).
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    /// Index of the gate driving `net`, if any.
    pub fn gate_driving(&self, net: NetId) -> Option<usize> {
        match self.drivers[net.0] {
            Driver::Gate(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_ff_output(&self, net: NetId) -> bool {
        matches!(self.drivers[net.0], Driver::Ff(_))
    }

    /// Gate id (its output net name).
    pub fn gate_name(&self, gate: usize) -> &str {
        self.net_name(self.gates[gate].output)
    }

    /// Flip-flop id (its Q net name).
    pub fn ff_name(&self, ff: usize) -> &str {
        self.net_name(self.ffs[ff].output)
    }

    pub fn find_gate(&self, id: &str) -> Option<usize> {
        self.net(id).and_then(|n| self.gate_driving(n))
    }

    pub fn find_ff(&self, id: &str) -> Option<usize> {
        match self.net(id).map(|n| self.drivers[n.0]) {
            Some(Driver::Ff(f)) => Some(f),
            _ => None,
        }
    }

    /// Number of input pins (gate, flip-flop, or primary output) fed by the
    /// output net of element `id`. A gate feeding two pins of one consumer
    /// counts twice.
    pub fn fanout(&self, id: &str) -> Result<usize> {
        let net = self
            .net(id)
            .ok_or_else(|| NetlistError::UnknownElement(id.to_string()))?;
        Ok(self.sinks[net.0].len())
    }

    pub fn fanout_of_net(&self, net: NetId) -> usize {
        self.sinks[net.0].len()
    }

    pub fn count_ffs(&self, kind: FfKind) -> usize {
        self.ffs.iter().filter(|f| f.kind == kind).count()
    }

    /// Rebuilds this netlist through a builder so that callers can modify a copy.
    pub fn to_builder(&self) -> NetlistBuilder {
        let mut b = NetlistBuilder::new(&self.name);
        for &i in &self.inputs {
            b.add_input(self.net_name(i));
        }
        for &o in &self.outputs {
            b.add_output(self.net_name(o));
        }
        for ff in &self.ffs {
            let ins: Vec<&str> = ff.inputs.iter().map(|&n| self.net_name(n)).collect();
            b.add_ff(self.net_name(ff.output), ff.kind, &ins, ff.function);
        }
        for g in &self.gates {
            let ins: Vec<&str> = g.inputs.iter().map(|&n| self.net_name(n)).collect();
            b.add_gate(self.net_name(g.output), g.kind, &ins);
        }
        b
    }
}

#[derive(Debug, Clone)]
struct PendingGate {
    output: String,
    kind: GateKind,
    inputs: Vec<String>,
    line: Option<usize>,
}

#[derive(Debug, Clone)]
struct PendingFf {
    output: String,
    kind: FfKind,
    inputs: Vec<String>,
    function: Option<BooleanFunction>,
    line: Option<usize>,
}

/// Accumulates declarations in any order and validates them on [`build`](Self::build).
#[derive(Debug, Clone, Default)]
pub struct NetlistBuilder {
    name: String,
    inputs: Vec<(String, Option<usize>)>,
    outputs: Vec<String>,
    gates: Vec<PendingGate>,
    ffs: Vec<PendingFf>,
    line: Option<usize>,
}

impl NetlistBuilder {
    pub fn new(name: &str) -> Self {
        NetlistBuilder {
            name: name.to_string(),
            ..Default::default()
        }
    }

    /// Source line attached to subsequently added elements (for diagnostics).
    pub fn at_line(&mut self, line: usize) -> &mut Self {
        self.line = Some(line);
        self
    }

    pub fn add_input(&mut self, name: &str) -> &mut Self {
        self.inputs.push((name.to_string(), self.line));
        self
    }

    pub fn add_output(&mut self, name: &str) -> &mut Self {
        self.outputs.push(name.to_string());
        self
    }

    pub fn add_gate(&mut self, output: &str, kind: GateKind, inputs: &[&str]) -> &mut Self {
        self.gates.push(PendingGate {
            output: output.to_string(),
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            line: self.line,
        });
        self
    }

    pub fn add_ff(
        &mut self,
        output: &str,
        kind: FfKind,
        inputs: &[&str],
        function: Option<BooleanFunction>,
    ) -> &mut Self {
        self.ffs.push(PendingFf {
            output: output.to_string(),
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            function,
            line: self.line,
        });
        self
    }

    pub fn add_dff(&mut self, q: &str, d: &str) -> &mut Self {
        self.add_ff(q, FfKind::Dff, &[d], None)
    }

    pub fn build(&self) -> Result<Netlist> {
        let mut net_names: Vec<String> = Vec::new();
        let mut lookup: HashMap<String, NetId> = HashMap::new();
        let mut intern = |name: &str| -> NetId {
            if let Some(&id) = lookup.get(name) {
                return id;
            }
            let id = NetId(net_names.len());
            net_names.push(name.to_string());
            lookup.insert(name.to_string(), id);
            id
        };

        // Interning order: inputs, ffs, gates, then any remaining referenced nets.
        let inputs: Vec<NetId> = self.inputs.iter().map(|(n, _)| intern(n)).collect();
        let ff_outs: Vec<NetId> = self.ffs.iter().map(|f| intern(&f.output)).collect();
        let gate_outs: Vec<NetId> = self.gates.iter().map(|g| intern(&g.output)).collect();
        let outputs: Vec<NetId> = self.outputs.iter().map(|n| intern(n)).collect();
        let ff_ins: Vec<Vec<NetId>> = self
            .ffs
            .iter()
            .map(|f| f.inputs.iter().map(|n| intern(n)).collect())
            .collect();
        let gate_ins: Vec<Vec<NetId>> = self
            .gates
            .iter()
            .map(|g| g.inputs.iter().map(|n| intern(n)).collect())
            .collect();

        let mut drivers: Vec<Option<Driver>> = vec![None; net_names.len()];
        let mut claim = |net: NetId, d: Driver, line: Option<usize>| -> Result<()> {
            if drivers[net.0].is_some() {
                return Err(NetlistError::DuplicateDriver {
                    net: net_names[net.0].clone(),
                    line,
                });
            }
            drivers[net.0] = Some(d);
            Ok(())
        };
        for (i, &n) in inputs.iter().enumerate() {
            claim(n, Driver::Input(i), self.inputs[i].1)?;
        }
        for (i, &n) in ff_outs.iter().enumerate() {
            claim(n, Driver::Ff(i), self.ffs[i].line)?;
        }
        for (i, &n) in gate_outs.iter().enumerate() {
            claim(n, Driver::Gate(i), self.gates[i].line)?;
        }

        for (i, g) in self.gates.iter().enumerate() {
            if !g.kind.accepts_inputs(g.inputs.len()) {
                return Err(NetlistError::BadArity {
                    element: g.output.clone(),
                    kind: g.kind.keyword().to_string(),
                    count: gate_ins[i].len(),
                    line: g.line,
                });
            }
        }
        for f in &self.ffs {
            let ok = match (&f.kind, &f.function) {
                (FfKind::LeFf, Some(func)) => func.arity() == f.inputs.len(),
                (FfKind::LeFf, None) => false,
                (_, None) => f.inputs.len() == 1,
                (_, Some(_)) => false,
            };
            if !ok {
                return Err(NetlistError::BadArity {
                    element: f.output.clone(),
                    kind: f.kind.keyword().to_string(),
                    count: f.inputs.len(),
                    line: f.line,
                });
            }
        }

        let drivers: Vec<Driver> = drivers
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                d.ok_or_else(|| NetlistError::UndrivenNet {
                    net: net_names[i].clone(),
                })
            })
            .collect::<Result<_>>()?;

        let mut sinks: Vec<Vec<Sink>> = vec![Vec::new(); net_names.len()];
        for (g, ins) in gate_ins.iter().enumerate() {
            for (pin, n) in ins.iter().enumerate() {
                sinks[n.0].push(Sink::GatePin { gate: g, pin });
            }
        }
        for (f, ins) in ff_ins.iter().enumerate() {
            for (pin, n) in ins.iter().enumerate() {
                sinks[n.0].push(Sink::FfPin { ff: f, pin });
            }
        }
        for (o, n) in outputs.iter().enumerate() {
            sinks[n.0].push(Sink::Output(o));
        }

        let gates: Vec<Gate> = self
            .gates
            .iter()
            .zip(gate_ins)
            .zip(gate_outs)
            .map(|((g, inputs), output)| Gate {
                kind: g.kind,
                inputs,
                output,
            })
            .collect();
        let ffs: Vec<FlipFlop> = self
            .ffs
            .iter()
            .zip(ff_ins)
            .zip(ff_outs)
            .map(|((f, inputs), output)| FlipFlop {
                kind: f.kind,
                inputs,
                output,
                function: f.function,
            })
            .collect();

        let topo = topological_gates(&gates, &drivers, &sinks).map_err(|stuck| {
            NetlistError::CombinationalLoop {
                members: stuck
                    .into_iter()
                    .map(|g| net_names[gates[g].output.0].clone())
                    .collect(),
            }
        })?;

        Ok(Netlist {
            name: self.name.clone(),
            net_names,
            lookup,
            drivers,
            sinks,
            inputs,
            outputs,
            gates,
            ffs,
            topo,
        })
    }
}

/// Kahn's algorithm over gates. On failure returns the gates that lie on
/// (or between) combinational cycles, sorted by index.
fn topological_gates(
    gates: &[Gate],
    drivers: &[Driver],
    sinks: &[Vec<Sink>],
) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let mut pending: Vec<usize> = gates
        .iter()
        .map(|g| {
            g.inputs
                .iter()
                .filter(|n| matches!(drivers[n.0], Driver::Gate(_)))
                .count()
        })
        .collect();
    let mut queue: VecDeque<usize> = (0..gates.len()).filter(|&g| pending[g] == 0).collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(g) = queue.pop_front() {
        order.push(g);
        for s in &sinks[gates[g].output.0] {
            if let Sink::GatePin { gate, .. } = *s {
                pending[gate] -= 1;
                if pending[gate] == 0 {
                    queue.push_back(gate);
                }
            }
        }
    }
    if order.len() == gates.len() {
        return Ok(order);
    }

    // Peel off gates downstream of a cycle that feed nothing else unresolved.
    let mut alive: Vec<bool> = pending.iter().map(|&p| p > 0).collect();
    loop {
        let mut changed = false;
        for g in 0..gates.len() {
            if !alive[g] {
                continue;
            }
            let feeds_alive = sinks[gates[g].output.0].iter().any(|s| match *s {
                Sink::GatePin { gate, .. } => alive[gate],
                _ => false,
            });
            if !feeds_alive {
                alive[g] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Err((0..gates.len()).filter(|&g| alive[g]).collect())
}
