// SPDX-License-Identifier: Apache-2.0
//! Energy-harvesting supply traces and intermittent execution.
//!
//! Units: time in ns, capacitance in nF, current in µA, voltage in V.

use std::fmt::Write;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{pair_timings, Endpoint};
use crate::netlist::{FfKind, Netlist, Simulator};
use crate::tech::TechParams;

/// Stated in every simulation report.
pub const LOSS_MODEL: &str =
    "loss model: a failure inside the final t_S of an in-flight pair discards that cycle only";

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum IntermitError {
    #[error("invalid harvester model: {0}")]
    InvalidModel(String),
    #[error("horizon must be positive and finite, got {0}")]
    BadHorizon(f64),
    #[error("jitter fraction must lie in [0, 0.5), got {0}")]
    BadJitter(f64),
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("trace csv line {line}: {message}")]
    TraceSyntax { line: usize, message: String },
    #[error("volatile flip-flop `{0}` cannot retain state across power loss")]
    VolatileFf(String),
    #[error("workload vector {index} has {found} bits, expected {expected}")]
    WorkloadWidth {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("clock period must be positive, got {0}")]
    BadClock(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarvesterModel {
    pub capacitance_nf: f64,
    pub harvest_ua: f64,
    pub load_ua: f64,
    pub v_on: f64,
    pub v_off: f64,
    pub v_max: f64,
}

impl HarvesterModel {
    /// 470 nF store capacitor switching between 2 V and 4.5 V.
    pub fn reference() -> Self {
        HarvesterModel {
            capacitance_nf: 470.0,
            harvest_ua: 10.0,
            load_ua: 110.0,
            v_on: 4.5,
            v_off: 2.0,
            v_max: 5.0,
        }
    }

    pub fn validate(&self) -> Result<(), IntermitError> {
        let all = [
            self.capacitance_nf,
            self.harvest_ua,
            self.load_ua,
            self.v_on,
            self.v_off,
            self.v_max,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(IntermitError::InvalidModel("non-finite parameter".into()));
        }
        if self.capacitance_nf <= 0.0 {
            return Err(IntermitError::InvalidModel("capacitance must be positive".into()));
        }
        if self.harvest_ua < 0.0 || self.load_ua < 0.0 {
            return Err(IntermitError::InvalidModel("currents must be non-negative".into()));
        }
        if !(self.v_max >= self.v_on && self.v_on > self.v_off && self.v_off > 0.0) {
            return Err(IntermitError::InvalidModel(
                "need v_max >= v_on > v_off > 0".into(),
            ));
        }
        Ok(())
    }

    /// Time to move the capacitor voltage by `dv` at net current `i`.
    pub fn ramp_ns(&self, dv: f64, i: f64) -> f64 {
        self.capacitance_nf * dv / i * 1e6
    }

    /// Duration of every ON burst, infinite if the load never drains it.
    pub fn on_duration_ns(&self) -> f64 {
        if self.harvest_ua >= self.load_ua {
            f64::INFINITY
        } else {
            self.ramp_ns(self.v_on - self.v_off, self.load_ua - self.harvest_ua)
        }
    }

    pub fn recharge_ns(&self) -> f64 {
        self.ramp_ns(self.v_on - self.v_off, self.harvest_ua)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PowerState {
    On,
    Off,
}

impl PowerState {
    pub fn as_str(self) -> &'static str {
        match self {
            PowerState::On => "ON",
            PowerState::Off => "OFF",
        }
    }

    fn flip(self) -> Self {
        match self {
            PowerState::On => PowerState::Off,
            PowerState::Off => PowerState::On,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub state: PowerState,
}

impl Segment {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerTrace {
    pub segments: Vec<Segment>,
}

impl PowerTrace {
    /// Builds a trace from alternating durations starting in `first`.
    pub fn from_durations(first: PowerState, durations: &[f64]) -> Result<Self, IntermitError> {
        let mut segments = Vec::with_capacity(durations.len());
        let mut t = 0.0;
        let mut state = first;
        for &d in durations {
            segments.push(Segment { start: t, end: t + d, state });
            t += d;
            state = state.flip();
        }
        let trace = PowerTrace { segments };
        trace.validate()?;
        Ok(trace)
    }

    pub fn validate(&self) -> Result<(), IntermitError> {
        let bad = |m: String| Err(IntermitError::InvalidTrace(m));
        let Some(first) = self.segments.first() else {
            return bad("no segments".into());
        };
        if first.start != 0.0 {
            return bad(format!("first segment starts at {}", first.start));
        }
        for (i, s) in self.segments.iter().enumerate() {
            if !(s.start.is_finite() && s.end.is_finite()) || s.is_empty() {
                return bad(format!("segment {i} is empty or non-finite"));
            }
            if i > 0 {
                let p = &self.segments[i - 1];
                if p.end != s.start {
                    return bad(format!("gap or overlap before segment {i}"));
                }
                if p.state == s.state {
                    return bad(format!("segments {} and {i} share a state", i - 1));
                }
            }
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.end)
    }

    pub fn on_time(&self) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.state == PowerState::On)
            .map(Segment::len)
            .sum()
    }

    /// Instants where the supply drops from ON to OFF.
    pub fn failures(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments
            .windows(2)
            .filter(|w| w[0].state == PowerState::On)
            .map(|w| w[0].end)
    }

    /// Internal boundaries, excluding 0 and the horizon.
    pub fn boundaries(&self) -> Vec<f64> {
        self.segments.iter().skip(1).map(|s| s.start).collect()
    }

    /// `start_ns,end_ns,state` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("start_ns,end_ns,state\n");
        for s in &self.segments {
            let _ = writeln!(out, "{},{},{}", s.start, s.end, s.state.as_str());
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, IntermitError> {
        let mut segments = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("start_ns")) {
                continue;
            }
            let err = |message: &str| IntermitError::TraceSyntax {
                line: i + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [start, end, state] = fields[..] else {
                return Err(err("expected three fields"));
            };
            let start: f64 = start.parse().map_err(|_| err("bad start_ns"))?;
            let end: f64 = end.parse().map_err(|_| err("bad end_ns"))?;
            let state = match state.to_ascii_uppercase().as_str() {
                "ON" => PowerState::On,
                "OFF" => PowerState::Off,
                _ => return Err(err("state must be ON or OFF")),
            };
            segments.push(Segment { start, end, state });
        }
        let trace = PowerTrace { segments };
        trace.validate()?;
        Ok(trace)
    }
}

/// Ideal-capacitor supply: charge from 0 V to `v_on`, run until `v_off`,
/// recharge to `v_on`, and so on until `horizon`.
pub fn generate_trace(model: &HarvesterModel, horizon: f64) -> Result<PowerTrace, IntermitError> {
    model.validate()?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(IntermitError::BadHorizon(horizon));
    }
    let off_only = || PowerTrace {
        segments: vec![Segment { start: 0.0, end: horizon, state: PowerState::Off }],
    };
    if model.harvest_ua == 0.0 {
        return Ok(off_only());
    }
    let first_charge = model.ramp_ns(model.v_on, model.harvest_ua);
    if first_charge >= horizon {
        return Ok(off_only());
    }
    let mut segments = vec![Segment { start: 0.0, end: first_charge, state: PowerState::Off }];
    let on = model.on_duration_ns();
    let off = model.recharge_ns();
    let mut t = first_charge;
    let mut state = PowerState::On;
    while t < horizon {
        let d = if state == PowerState::On { on } else { off };
        let end = (t + d).min(horizon);
        segments.push(Segment { start: t, end, state });
        t = end;
        state = state.flip();
    }
    Ok(PowerTrace { segments })
}

/// Moves each internal boundary uniformly within `±fraction` of the shorter
/// adjacent segment. With `fraction < 0.5` boundaries cannot cross, so the
/// segment order and contiguity are preserved.
pub fn jittered_trace(trace: &PowerTrace, fraction: f64, seed: u64) -> Result<PowerTrace, IntermitError> {
    if !(0.0..0.5).contains(&fraction) {
        return Err(IntermitError::BadJitter(fraction));
    }
    trace.validate()?;
    if fraction == 0.0 {
        return Ok(trace.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let segs = &trace.segments;
    let mut out = segs.clone();
    for i in 1..segs.len() {
        let room = fraction * segs[i - 1].len().min(segs[i].len());
        let b = segs[i].start + room * rng.gen_range(-1.0..=1.0);
        out[i - 1].end = b;
        out[i].start = b;
    }
    let trace = PowerTrace { segments: out };
    trace.validate()?;
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub attempted: u64,
    pub committed: u64,
    pub losses: u64,
    pub reboots: u64,
    /// Power failures that interrupted a cycle outside every window.
    pub safe_interruptions: u64,
    pub forward_progress: f64,
    /// Workload vectors fully committed.
    pub completed: usize,
    pub seed: u64,
    /// Outputs of committed cycles, in commit order.
    #[serde(skip)]
    pub committed_outputs: Vec<Vec<bool>>,
}

/// Runs `workload` cycle by cycle over the ON segments of `trace`.
///
/// Cycles start back to back at each ON segment start and commit at the end
/// of their clock period. A cycle whose commit instant falls after the
/// segment end is interrupted: it is a loss if the failure lies within the
/// final `t_S` before commit for some pair whose source changed at launch,
/// and a safe interruption otherwise. Either way the vector is re-executed
/// from the retained state at the next ON segment. All sources count as
/// changed on the first cycle after power-up. A cycle still running when the
/// trace ends is not counted. `seed` is carried into the result unchanged.
pub fn run_intermittent(
    netlist: &Netlist,
    tech: &TechParams,
    trace: &PowerTrace,
    workload: &[Vec<bool>],
    seed: u64,
) -> Result<SimResult, IntermitError> {
    if let Some(f) = netlist.ffs().iter().position(|f| f.kind == FfKind::Dff) {
        return Err(IntermitError::VolatileFf(netlist.ff_name(f).to_string()));
    }
    let period = tech.clock_period;
    if !(period > 0.0 && period.is_finite()) {
        return Err(IntermitError::BadClock(period));
    }
    trace.validate()?;
    let width = netlist.inputs().len();
    if let Some((index, v)) = workload.iter().enumerate().find(|(_, v)| v.len() != width) {
        return Err(IntermitError::WorkloadWidth {
            index,
            expected: width,
            found: v.len(),
        });
    }

    // Widest window per source endpoint.
    let n_in = width;
    let mut window = vec![f64::NEG_INFINITY; n_in + netlist.ffs().len()];
    for p in pair_timings(netlist, tech) {
        let idx = match p.source {
            Endpoint::Input(i) => i,
            Endpoint::Ff(f) => n_in + f,
            Endpoint::Output(_) => unreachable!("outputs are never sources"),
        };
        window[idx] = window[idx].max(p.t_s);
    }

    let mut sim = Simulator::new(netlist);
    let mut r = SimResult {
        attempted: 0,
        committed: 0,
        losses: 0,
        reboots: 0,
        safe_interruptions: 0,
        forward_progress: 0.0,
        completed: 0,
        seed,
        committed_outputs: Vec::new(),
    };
    let mut next = 0usize;
    let last = trace.segments.len() - 1;

    for (si, seg) in trace.segments.iter().enumerate() {
        if seg.state != PowerState::On {
            continue;
        }
        let mut prev: Option<Vec<bool>> = None;
        let mut k = 0u64;
        while next < workload.len() {
            let start = seg.start + k as f64 * period;
            let commit = seg.start + (k + 1) as f64 * period;
            if start >= seg.end {
                break;
            }
            let vector = &workload[next];
            let mut launch: Vec<bool> = vector.clone();
            launch.extend_from_slice(sim.state());
            if commit <= seg.end {
                r.attempted += 1;
                let out = sim.step(vector).expect("width checked");
                r.committed += 1;
                r.committed_outputs.push(out);
                next += 1;
                prev = Some(launch);
                k += 1;
                continue;
            }
            if si == last {
                break;
            }
            r.attempted += 1;
            let fail = seg.end;
            let hit = launch.iter().enumerate().any(|(i, &v)| {
                let changed = prev.as_ref().is_none_or(|p| p[i] != v);
                changed && fail >= commit - window[i]
            });
            if hit {
                r.losses += 1;
                r.reboots += 1;
            } else {
                r.safe_interruptions += 1;
            }
            break;
        }
    }
    r.completed = next;
    r.forward_progress = if r.attempted == 0 {
        0.0
    } else {
        r.committed as f64 / r.attempted as f64
    };
    Ok(r)
}

/// Seed of trial `trial`, drawn from stream `trial` of the master generator.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng.next_u64()
}

/// Uniform random input vectors.
pub fn random_workload(width: usize, len: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| (0..width).map(|_| rng.gen::<bool>()).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloConfig {
    pub model: HarvesterModel,
    pub horizon: f64,
    pub jitter: f64,
    pub trials: u64,
    pub workload_len: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trial {
    pub trial: u64,
    pub seed: u64,
    pub result: SimResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedTrial {
    pub trial: u64,
    pub seed: u64,
    pub baseline: SimResult,
    pub clustered: SimResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanCi {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub trials: u64,
    pub losses: MeanCi,
    pub forward_progress: MeanCi,
    pub total_attempted: u64,
    pub total_committed: u64,
    pub total_losses: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloResult {
    pub trials: Vec<Trial>,
    pub aggregate: Aggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedAggregate {
    pub trials: u64,
    pub baseline: Aggregate,
    pub clustered: Aggregate,
    /// Per-trial `baseline - clustered` losses.
    pub loss_reduction: MeanCi,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedResult {
    pub trials: Vec<PairedTrial>,
    pub aggregate: PairedAggregate,
}

const BOOTSTRAP_RESAMPLES: usize = 2000;

/// Mean with a 95% percentile-bootstrap interval.
pub fn bootstrap_mean_ci(samples: &[f64], resamples: usize, seed: u64) -> MeanCi {
    let n = samples.len();
    if n == 0 {
        return MeanCi { mean: f64::NAN, lo: f64::NAN, hi: f64::NAN };
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| samples[rng.gen_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let q = |p: f64| means[((p * (resamples - 1) as f64).round() as usize).min(resamples - 1)];
    MeanCi { mean, lo: q(0.025), hi: q(0.975) }
}

/// Runs every design on the same jittered trace and workload per trial.
/// Trial seeds come from [`trial_seed`], so results do not depend on
/// scheduling. `trace` overrides the generated base trace.
fn run_trials(
    designs: &[&Netlist],
    tech: &TechParams,
    cfg: &MonteCarloConfig,
    trace: Option<&PowerTrace>,
) -> Result<Vec<(u64, u64, Vec<SimResult>)>, IntermitError> {
    let base_trace = match trace {
        Some(t) => t.clone(),
        None => generate_trace(&cfg.model, cfg.horizon)?,
    };
    let width = designs.first().map_or(0, |d| d.inputs().len());
    let one = |trial: u64| -> Result<(u64, u64, Vec<SimResult>), IntermitError> {
        let seed = trial_seed(cfg.master_seed, trial);
        let trace = jittered_trace(&base_trace, cfg.jitter, seed)?;
        let workload = random_workload(width, cfg.workload_len, seed ^ 0x9e37_79b9_7f4a_7c15);
        let results = designs
            .iter()
            .map(|d| run_intermittent(d, tech, &trace, &workload, seed))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((trial, seed, results))
    };
    #[cfg(feature = "parallel")]
    let out = {
        use rayon::prelude::*;
        (0..cfg.trials).into_par_iter().map(one).collect::<Result<Vec<_>, _>>()
    };
    #[cfg(not(feature = "parallel"))]
    let out = (0..cfg.trials).map(one).collect::<Result<Vec<_>, _>>();
    out
}

fn aggregate<'r>(results: impl Iterator<Item = &'r SimResult> + Clone, trials: u64, seed: u64) -> Aggregate {
    let losses: Vec<f64> = results.clone().map(|r| r.losses as f64).collect();
    let progress: Vec<f64> = results.clone().map(|r| r.forward_progress).collect();
    Aggregate {
        trials,
        losses: bootstrap_mean_ci(&losses, BOOTSTRAP_RESAMPLES, seed),
        forward_progress: bootstrap_mean_ci(&progress, BOOTSTRAP_RESAMPLES, seed.wrapping_add(1)),
        total_attempted: results.clone().map(|r| r.attempted).sum(),
        total_committed: results.clone().map(|r| r.committed).sum(),
        total_losses: results.map(|r| r.losses).sum(),
    }
}

/// Independent jittered trials of one design.
pub fn monte_carlo(
    netlist: &Netlist,
    tech: &TechParams,
    cfg: &MonteCarloConfig,
    trace: Option<&PowerTrace>,
) -> Result<MonteCarloResult, IntermitError> {
    let trials: Vec<Trial> = run_trials(&[netlist], tech, cfg, trace)?
        .into_iter()
        .map(|(trial, seed, mut r)| Trial { trial, seed, result: r.remove(0) })
        .collect();
    let aggregate = aggregate(trials.iter().map(|t| &t.result), cfg.trials, cfg.master_seed);
    Ok(MonteCarloResult { trials, aggregate })
}

/// Baseline and clustered designs on shared traces and workloads.
pub fn paired_monte_carlo(
    baseline: &Netlist,
    clustered: &Netlist,
    tech: &TechParams,
    cfg: &MonteCarloConfig,
    trace: Option<&PowerTrace>,
) -> Result<PairedResult, IntermitError> {
    let trials: Vec<PairedTrial> = run_trials(&[baseline, clustered], tech, cfg, trace)?
        .into_iter()
        .map(|(trial, seed, mut r)| {
            let clustered = r.pop().expect("two designs");
            let baseline = r.pop().expect("two designs");
            PairedTrial { trial, seed, baseline, clustered }
        })
        .collect();
    let diff: Vec<f64> = trials
        .iter()
        .map(|t| t.baseline.losses as f64 - t.clustered.losses as f64)
        .collect();
    let aggregate = PairedAggregate {
        trials: cfg.trials,
        baseline: aggregate(trials.iter().map(|t| &t.baseline), cfg.trials, cfg.master_seed),
        clustered: aggregate(trials.iter().map(|t| &t.clustered), cfg.trials, cfg.master_seed.wrapping_add(2)),
        loss_reduction: bootstrap_mean_ci(&diff, BOOTSTRAP_RESAMPLES, cfg.master_seed.wrapping_add(4)),
    };
    Ok(PairedResult { trials, aggregate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;

    #[test]
    fn reference_burst_length() {
        let on = HarvesterModel::reference().on_duration_ns();
        assert!((on - 11.75e6).abs() < 1e-6);
    }

    #[test]
    fn generated_trace_shape() {
        let m = HarvesterModel::reference();
        let t = generate_trace(&m, 1e9).unwrap();
        t.validate().unwrap();
        assert_eq!(t.segments[0].state, PowerState::Off);
        assert!((t.segments[0].end - 470.0 * 4.5 / 10.0 * 1e6).abs() < 1e-3);
        assert!((t.segments[1].len() - 11.75e6).abs() < 1e-3);
        assert!((t.segments[2].len() - 117.5e6).abs() < 1e-3);
        assert_eq!(t.horizon(), 1e9);
    }

    #[test]
    fn never_discharging_supply() {
        let m = HarvesterModel { load_ua: 5.0, ..HarvesterModel::reference() };
        let t = generate_trace(&m, 1e9).unwrap();
        assert_eq!(t.segments.len(), 2);
        assert_eq!(t.segments[1].state, PowerState::On);
        assert_eq!(t.segments[1].end, 1e9);
    }

    #[test]
    fn short_horizon_is_off() {
        let t = generate_trace(&HarvesterModel::reference(), 1000.0).unwrap();
        assert_eq!(t.segments, vec![Segment { start: 0.0, end: 1000.0, state: PowerState::Off }]);
    }

    #[test]
    fn invalid_model_rejected() {
        let m = HarvesterModel { v_off: 5.0, ..HarvesterModel::reference() };
        assert!(generate_trace(&m, 1e9).is_err());
        assert!(generate_trace(&HarvesterModel::reference(), 0.0).is_err());
    }

    #[test]
    fn jitter_zero_and_repeatability() {
        let t = generate_trace(&HarvesterModel::reference(), 1e9).unwrap();
        assert_eq!(jittered_trace(&t, 0.0, 3).unwrap(), t);
        assert_eq!(jittered_trace(&t, 0.3, 3).unwrap(), jittered_trace(&t, 0.3, 3).unwrap());
        assert_ne!(jittered_trace(&t, 0.3, 3).unwrap(), t);
        assert!(jittered_trace(&t, 0.5, 3).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = PowerTrace::from_durations(PowerState::On, &[25.0, 75.0, 20.5]).unwrap();
        assert_eq!(PowerTrace::from_csv(&t.to_csv()).unwrap(), t);
        assert!(PowerTrace::from_csv("start_ns,end_ns,state\n0,1,ON\n2,3,OFF\n").is_err());
    }

    fn inverter() -> Netlist {
        parse_bench("t", "INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n").unwrap()
    }

    #[test]
    fn continuous_power_full_progress() {
        let n = inverter();
        let trace = PowerTrace::from_durations(PowerState::On, &[1e4]).unwrap();
        let w = random_workload(1, 100, 1);
        let r = run_intermittent(&n, &TechParams::default(), &trace, &w, 9).unwrap();
        assert_eq!((r.attempted, r.committed, r.losses), (100, 100, 0));
        assert_eq!(r.forward_progress, 1.0);
        assert_eq!(r.seed, 9);
    }

    #[test]
    fn failure_inside_window_loses_one_cycle() {
        let n = inverter();
        let tech = TechParams::default();
        // t_S = 2.0 + 0.1 + 0.015; second cycle commits at 20, window starts 17.885.
        let trace = PowerTrace::from_durations(PowerState::On, &[19.0, 31.0, 20.0]).unwrap();
        let w = vec![vec![false], vec![true], vec![false]];
        let r = run_intermittent(&n, &tech, &trace, &w, 0).unwrap();
        assert_eq!(r.losses, 1);
        assert_eq!(r.committed, r.attempted - 1);
        assert_eq!(r.completed, 3);
    }

    #[test]
    fn failure_before_window_is_safe() {
        let n = inverter();
        let trace = PowerTrace::from_durations(PowerState::On, &[15.0, 35.0, 20.0]).unwrap();
        let w = vec![vec![false], vec![true], vec![false]];
        let r = run_intermittent(&n, &TechParams::default(), &trace, &w, 0).unwrap();
        assert_eq!((r.losses, r.safe_interruptions), (0, 1));
    }

    #[test]
    fn unchanged_source_has_no_window() {
        let n = inverter();
        let trace = PowerTrace::from_durations(PowerState::On, &[19.0, 31.0, 20.0]).unwrap();
        let w = vec![vec![true], vec![true]];
        let r = run_intermittent(&n, &TechParams::default(), &trace, &w, 0).unwrap();
        assert_eq!(r.losses, 0);
    }

    #[test]
    fn dff_rejected() {
        let n = parse_bench("t", "INPUT(a)\nOUTPUT(q)\nq = DFF(a)\n").unwrap();
        let trace = PowerTrace::from_durations(PowerState::On, &[10.0]).unwrap();
        assert!(matches!(
            run_intermittent(&n, &TechParams::default(), &trace, &[], 0),
            Err(IntermitError::VolatileFf(_))
        ));
    }

    #[test]
    fn period_longer_than_bursts_is_zero_progress() {
        let n = inverter();
        let trace = PowerTrace::from_durations(PowerState::On, &[5.0, 5.0, 5.0, 5.0, 5.0]).unwrap();
        let r = run_intermittent(&n, &TechParams::default(), &trace, &[vec![true]], 0).unwrap();
        assert_eq!(r.committed, 0);
        assert_eq!(r.forward_progress, 0.0);
    }

    #[test]
    fn trial_seeds_distinct_and_stable() {
        assert_eq!(trial_seed(5, 3), trial_seed(5, 3));
        assert_ne!(trial_seed(5, 3), trial_seed(5, 4));
        assert_ne!(trial_seed(5, 3), trial_seed(6, 3));
    }

    #[test]
    fn bootstrap_constant_sample() {
        let ci = bootstrap_mean_ci(&[2.0; 50], 200, 1);
        assert_eq!((ci.mean, ci.lo, ci.hi), (2.0, 2.0, 2.0));
    }
}
