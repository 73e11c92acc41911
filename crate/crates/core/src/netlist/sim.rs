// SPDX-License-Identifier: Apache-2.0
//! Cycle-accurate two-valued logic simulation.

use super::{Driver, Netlist, NetlistError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimTrace {
    /// One vector per cycle, sampled after combinational settling.
    pub outputs: Vec<Vec<bool>>,
    pub final_state: Vec<bool>,
}

/// Stateful simulator. Flip-flop state is indexed like [`Netlist::ffs`].
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    netlist: &'a Netlist,
    state: Vec<bool>,
    values: Vec<bool>,
}

impl<'a> Simulator<'a> {
    /// All flip-flops start at zero.
    pub fn new(netlist: &'a Netlist) -> Self {
        Simulator {
            netlist,
            state: vec![false; netlist.ffs().len()],
            values: vec![false; netlist.net_count()],
        }
    }

    pub fn with_state(netlist: &'a Netlist, state: &[bool]) -> Result<Self> {
        let mut sim = Simulator::new(netlist);
        sim.set_state(state)?;
        Ok(sim)
    }

    pub fn state(&self) -> &[bool] {
        &self.state
    }

    pub fn set_state(&mut self, state: &[bool]) -> Result<()> {
        if state.len() != self.state.len() {
            return Err(NetlistError::WidthMismatch {
                expected: self.state.len(),
                found: state.len(),
            });
        }
        self.state.copy_from_slice(state);
        Ok(())
    }

    /// Net values from the most recent [`settle`](Self::settle).
    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Applies primary inputs and evaluates every gate in topological order.
    pub fn settle(&mut self, inputs: &[bool]) -> Result<()> {
        let n = self.netlist;
        if inputs.len() != n.inputs().len() {
            return Err(NetlistError::WidthMismatch {
                expected: n.inputs().len(),
                found: inputs.len(),
            });
        }
        for (net, &v) in n.inputs().iter().zip(inputs) {
            self.values[net.0] = v;
        }
        for (ff, &v) in n.ffs().iter().zip(&self.state) {
            self.values[ff.output.0] = v;
        }
        for &g in n.topo_order() {
            let gate = &n.gates()[g];
            let v = gate.kind.eval(gate.inputs.iter().map(|i| self.values[i.0]));
            self.values[gate.output.0] = v;
        }
        Ok(())
    }

    pub fn sample_outputs(&self) -> Vec<bool> {
        self.netlist
            .outputs()
            .iter()
            .map(|o| self.values[o.0])
            .collect()
    }

    /// Next flip-flop state computed from the settled net values.
    pub fn next_state(&self) -> Vec<bool> {
        self.netlist
            .ffs()
            .iter()
            .map(|ff| ff.next_state(&self.values))
            .collect()
    }

    /// One full clock cycle: settle, sample outputs, capture state.
    pub fn step(&mut self, inputs: &[bool]) -> Result<Vec<bool>> {
        self.settle(inputs)?;
        let out = self.sample_outputs();
        self.state = self.next_state();
        Ok(out)
    }
}

impl Netlist {
    /// Runs `inputs` from `initial` (or all-zero when `None`).
    pub fn simulate(&self, initial: Option<&[bool]>, inputs: &[Vec<bool>]) -> Result<SimTrace> {
        let mut sim = match initial {
            Some(s) => Simulator::with_state(self, s)?,
            None => Simulator::new(self),
        };
        let outputs = inputs
            .iter()
            .map(|v| sim.step(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimTrace {
            outputs,
            final_state: sim.state,
        })
    }

    /// Flip-flop states keyed by id, for reporting.
    pub fn named_state<'s>(&'s self, state: &'s [bool]) -> impl Iterator<Item = (&'s str, bool)> + 's {
        self.ffs()
            .iter()
            .zip(state)
            .map(move |(ff, &v)| (self.net_name(ff.output), v))
    }

    /// True iff net `net` is driven by a primary input.
    pub fn is_primary_input(&self, net: super::NetId) -> bool {
        matches!(self.driver(net), Driver::Input(_))
    }
}
