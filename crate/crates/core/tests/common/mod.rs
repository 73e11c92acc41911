// SPDX-License-Identifier: Apache-2.0
//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;

use nvcluster::netlist::{FfKind, GateKind, Netlist, NetlistBuilder, parse_bench};
use nvcluster::tech::TechParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bundled benchmark directory, also when compiled into a sibling crate.
pub fn data_dir() -> PathBuf {
    let here = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let own = here.join("data/iscas89");
    if own.is_dir() {
        own
    } else {
        here.join("../core/data/iscas89")
    }
}

/// Every `.bench` file shipped with the crate, sorted by name.
pub fn bundled_benches() -> Vec<(String, Netlist)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(data_dir())
        .expect("data dir")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "bench"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&p).unwrap();
            let n = parse_bench(&name, &text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, n)
        })
        .collect()
}

pub fn s27() -> Netlist {
    let text = std::fs::read_to_string(data_dir().join("s27.bench")).unwrap();
    parse_bench("s27", &text).unwrap()
}

/// Every (arity, table) that one majority device of base 3..=`max_base`
/// computes, found by direct counting over all pin configurations. Pins are
/// coded 0 = tied low, 1 = tied high, 2 + k = variable k; each variable
/// `0..arity` appears exactly once.
pub fn realizable_set(max_base: usize, inversion: bool) -> HashSet<(usize, u64)> {
    let mut set = HashSet::new();
    let mut base = 3;
    while base <= max_base {
        let symbols = base + 2;
        let mut pins = vec![0usize; base];
        loop {
            let vars: Vec<usize> = pins.iter().filter(|&&p| p >= 2).map(|p| p - 2).collect();
            let arity = vars.len();
            let mut sorted = vars.clone();
            sorted.sort_unstable();
            if sorted == (0..arity).collect::<Vec<_>>() {
                let mut table = 0u64;
                for x in 0..(1usize << arity) {
                    let high = pins
                        .iter()
                        .filter(|&&p| p == 1 || (p >= 2 && (x >> (p - 2)) & 1 == 1))
                        .count();
                    if 2 * high > base {
                        table |= 1 << x;
                    }
                }
                set.insert((arity, table));
                if inversion {
                    let mask = if arity == 6 { u64::MAX } else { (1u64 << (1 << arity)) - 1 };
                    set.insert((arity, !table & mask));
                }
            }
            // odometer over `symbols`^base
            let mut i = 0;
            loop {
                if i == base {
                    break;
                }
                pins[i] += 1;
                if pins[i] < symbols {
                    break;
                }
                pins[i] = 0;
                i += 1;
            }
            if i == base {
                break;
            }
        }
        base += 2;
    }
    set
}

fn eval_gate(kind: GateKind, ins: &[bool]) -> bool {
    let ones = ins.iter().filter(|&&b| b).count();
    match kind {
        GateKind::And => ones == ins.len(),
        GateKind::Nand => ones != ins.len(),
        GateKind::Or => ones > 0,
        GateKind::Nor => ones == 0,
        GateKind::Not => !ins[0],
        GateKind::Buff => ins[0],
        GateKind::Xor => ones % 2 == 1,
        GateKind::Xnor => ones % 2 == 0,
    }
}

/// Pin-level fan-out of every net name, counted by scanning the netlist.
pub fn fanouts(n: &Netlist) -> HashMap<String, usize> {
    let mut m: HashMap<String, usize> = HashMap::new();
    for g in n.gates() {
        for &i in &g.inputs {
            *m.entry(n.net_name(i).to_string()).or_default() += 1;
        }
    }
    for ff in n.ffs() {
        for &i in &ff.inputs {
            *m.entry(n.net_name(i).to_string()).or_default() += 1;
        }
    }
    for &o in n.outputs() {
        *m.entry(n.net_name(o).to_string()).or_default() += 1;
    }
    m
}

/// Re-derives the three criteria for an accepted cone from scratch. `gates`
/// and `leaves` are net names; `table` is over `leaves` in the given order.
pub fn recheck_cone(
    n: &Netlist,
    ff: &str,
    gates: &[String],
    leaves: &[String],
    table: u64,
    realizable: &HashSet<(usize, u64)>,
) -> Result<(), String> {
    let by_name: HashMap<String, usize> = n
        .gates()
        .iter()
        .enumerate()
        .map(|(i, g)| (n.net_name(g.output).to_string(), i))
        .collect();
    let ff_outs: HashSet<String> = n.ffs().iter().map(|f| n.net_name(f.output).to_string()).collect();
    let fi = (0..n.ffs().len())
        .find(|&i| n.net_name(n.ffs()[i].output) == ff)
        .ok_or("no such ff")?;
    let d = n.net_name(n.ffs()[fi].inputs[0]).to_string();
    if !gates.contains(&d) {
        return Err(format!("sink {d} not in cone"));
    }
    let fo = fanouts(n);
    for g in gates {
        if fo.get(g).copied().unwrap_or(0) != 1 {
            return Err(format!("criterion 2: {g} has fan-out {}", fo.get(g).copied().unwrap_or(0)));
        }
        let gi = *by_name.get(g).ok_or("cone gate not in netlist")?;
        for &i in &n.gates()[gi].inputs {
            let name = n.net_name(i);
            if ff_outs.contains(name) {
                return Err(format!("criterion 3: {g} reads {name}"));
            }
            if !gates.iter().any(|x| x == name) && !leaves.iter().any(|x| x == name) {
                return Err(format!("{name} is neither member nor leaf"));
            }
        }
    }
    // every non-sink member must feed another member
    for g in gates.iter().filter(|g| **g != d) {
        let feeds = gates.iter().any(|h| {
            let hi = by_name[h];
            n.gates()[hi].inputs.iter().any(|&i| n.net_name(i) == g)
        });
        if !feeds {
            return Err(format!("{g} does not feed the cone"));
        }
    }
    // truth table by recursive evaluation from the sink
    fn value(
        net: &str,
        n: &Netlist,
        by_name: &HashMap<String, usize>,
        gates: &[String],
        env: &HashMap<&str, bool>,
    ) -> bool {
        if let Some(&v) = env.get(net) {
            return v;
        }
        assert!(gates.iter().any(|g| g == net), "escaped cone at {net}");
        let g = &n.gates()[by_name[net]];
        let ins: Vec<bool> = g
            .inputs
            .iter()
            .map(|&i| value(n.net_name(i), n, by_name, gates, env))
            .collect();
        eval_gate(g.kind, &ins)
    }
    let mut derived = 0u64;
    for x in 0..(1usize << leaves.len()) {
        let env: HashMap<&str, bool> = leaves
            .iter()
            .enumerate()
            .map(|(k, l)| (l.as_str(), (x >> k) & 1 == 1))
            .collect();
        if value(&d, n, &by_name, gates, &env) {
            derived |= 1 << x;
        }
    }
    if derived != table {
        return Err(format!("criterion 1: table 0x{table:x} but cone computes 0x{derived:x}"));
    }
    if !realizable.contains(&(leaves.len(), table)) {
        return Err(format!("criterion 1: 0x{table:x} over {} leaves not realizable", leaves.len()));
    }
    Ok(())
}

/// Parses one plan dump line into (ff, kind, gates, table, leaves).
pub fn parse_plan_line(line: &str) -> (String, String, Vec<String>, u64, Vec<String>) {
    let mut ff = String::new();
    let mut kind = String::new();
    let mut gates = Vec::new();
    let mut table = 0;
    let mut leaves = Vec::new();
    let list = |v: &str| -> Vec<String> {
        let v = v.trim_start_matches('[').trim_end_matches(']');
        if v.is_empty() {
            Vec::new()
        } else {
            v.split(',').map(str::to_string).collect()
        }
    };
    for field in line.split_whitespace() {
        let (k, v) = field.split_once('=').unwrap();
        match k {
            "ff" => ff = v.to_string(),
            "kind" => kind = v.to_string(),
            "gates" => gates = list(v),
            "table" => table = u64::from_str_radix(v.trim_start_matches("0x"), 16).unwrap(),
            "leaves" => leaves = list(v),
            _ => panic!("unknown plan field {k}"),
        }
    }
    (ff, kind, gates, table, leaves)
}

/// Endpoint pair timing from a backward memoized search, keyed by
/// (source label, destination label) using the `in:`/`ff:`/`out:` scheme.
pub fn oracle_pairs(n: &Netlist, tech: &TechParams) -> HashMap<(String, String), (f64, f64)> {
    fn longest(
        net: usize,
        src: usize,
        n: &Netlist,
        driver: &HashMap<usize, usize>,
        tech: &TechParams,
        memo: &mut HashMap<usize, Option<f64>>,
    ) -> Option<f64> {
        if net == src {
            return Some(0.0);
        }
        if let Some(&v) = memo.get(&net) {
            return v;
        }
        let r = driver.get(&net).and_then(|&g| {
            let gate = &n.gates()[g];
            let d = tech.gates[&gate.kind].delay;
            gate.inputs
                .iter()
                .filter_map(|i| longest(i.0, src, n, driver, tech, memo))
                .fold(None, |a: Option<f64>, b| Some(a.map_or(b, |a| a.max(b))))
                .map(|b| b + d)
        });
        memo.insert(net, r);
        r
    }
    let driver: HashMap<usize, usize> = n
        .gates()
        .iter()
        .enumerate()
        .map(|(i, g)| (g.output.0, i))
        .collect();
    let ff_reg = |f: usize| {
        let ff = &n.ffs()[f];
        let mut r = match ff.kind {
            FfKind::Dff => tech.dff,
            FfKind::NvFf => tech.nvff,
            FfKind::LeFf => tech.leff,
        };
        if ff.kind == FfKind::LeFf {
            r.area += tech.leff_per_leaf.area * ff.inputs.len() as f64;
        }
        r
    };
    let mut srcs: Vec<(String, usize, f64)> = Vec::new();
    for &i in n.inputs() {
        srcs.push((format!("in:{}", n.net_name(i)), i.0, tech.input_reg.t_rd));
    }
    for (f, ff) in n.ffs().iter().enumerate() {
        srcs.push((format!("ff:{}", n.net_name(ff.output)), ff.output.0, ff_reg(f).t_rd));
    }
    let mut out = HashMap::new();
    for (label, net, t_rd) in srcs {
        let mut memo = HashMap::new();
        for (f, ff) in n.ffs().iter().enumerate() {
            let t = ff
                .inputs
                .iter()
                .filter_map(|i| longest(i.0, net, n, &driver, tech, &mut memo))
                .fold(None, |a: Option<f64>, b| Some(a.map_or(b, |a| a.max(b))));
            if let Some(t_c) = t {
                let t_wr = ff_reg(f).t_wr;
                out.insert(
                    (label.clone(), format!("ff:{}", n.net_name(ff.output))),
                    (t_c, t_wr + t_rd + t_c),
                );
            }
        }
        for &o in n.outputs() {
            if let Some(t_c) = longest(o.0, net, n, &driver, tech, &mut memo) {
                out.insert(
                    (label.clone(), format!("out:{}", n.net_name(o))),
                    (t_c, tech.output_reg.t_wr + t_rd + t_c),
                );
            }
        }
    }
    out
}

/// Random acyclic sequential netlist. Gates read earlier gates, inputs or
/// flip-flop outputs; about a third of the gates are chained single-fan-out
/// trees so that clustering has something to find.
pub fn random_netlist(seed: u64, max_inputs: usize, max_ffs: usize, max_gates: usize, ff_kind: FfKind) -> Netlist {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_in = rng.gen_range(1..=max_inputs);
    let n_ff = rng.gen_range(0..=max_ffs);
    let n_g = rng.gen_range(1..=max_gates);
    let mut nets: Vec<String> = Vec::new();
    let mut b = NetlistBuilder::new(&format!("rand{seed}"));
    for i in 0..n_in {
        b.add_input(&format!("i{i}"));
        nets.push(format!("i{i}"));
    }
    for f in 0..n_ff {
        nets.push(format!("q{f}"));
    }
    let kinds = GateKind::ALL;
    for g in 0..n_g {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let arity = if kind == GateKind::Not || kind == GateKind::Buff {
            1
        } else {
            rng.gen_range(2..=3)
        };
        let mut ins: Vec<String> = Vec::new();
        for _ in 0..arity {
            // bias toward the most recent nets to build deeper cones
            let lo = nets.len().saturating_sub(4);
            let pick = if rng.gen_bool(0.5) {
                rng.gen_range(lo..nets.len())
            } else {
                rng.gen_range(0..nets.len())
            };
            ins.push(nets[pick].clone());
        }
        let refs: Vec<&str> = ins.iter().map(String::as_str).collect();
        let out = format!("g{g}");
        b.add_gate(&out, kind, &refs);
        nets.push(out);
    }
    // Dedicated single-fan-out trees feeding some flip-flops.
    let comb: Vec<String> = nets.iter().filter(|s| !s.starts_with('q')).cloned().collect();
    let tree_kinds = [
        GateKind::And,
        GateKind::Or,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Not,
        GateKind::Xor,
    ];
    let mut fresh = 0;
    for f in 0..n_ff {
        let d = if rng.gen_bool(0.6) {
            let mut open: Vec<String> = Vec::new();
            let size = rng.gen_range(1..=4);
            for _ in 0..size {
                let kind = tree_kinds[rng.gen_range(0..tree_kinds.len())];
                let arity = if kind == GateKind::Not { 1 } else { 2 };
                let mut ins: Vec<String> = Vec::new();
                for _ in 0..arity {
                    if !open.is_empty() && rng.gen_bool(0.6) {
                        ins.push(open.remove(rng.gen_range(0..open.len())));
                    } else {
                        ins.push(comb[rng.gen_range(0..comb.len())].clone());
                    }
                }
                let refs: Vec<&str> = ins.iter().map(String::as_str).collect();
                let out = format!("t{fresh}");
                fresh += 1;
                b.add_gate(&out, kind, &refs);
                open.push(out);
            }
            // fold any remaining open roots into one sink
            while open.len() > 1 {
                let x = open.pop().unwrap();
                let y = open.pop().unwrap();
                let out = format!("t{fresh}");
                fresh += 1;
                b.add_gate(&out, GateKind::And, &[&x, &y]);
                open.push(out);
            }
            open.pop().unwrap()
        } else {
            nets[rng.gen_range(0..nets.len())].clone()
        };
        b.add_ff(&format!("q{f}"), ff_kind, &[d.as_str()], None);
    }
    let n_out = rng.gen_range(1..=3);
    let mut outs: Vec<String> = Vec::new();
    for _ in 0..n_out {
        let o = nets[rng.gen_range(0..nets.len())].clone();
        if !outs.contains(&o) {
            b.add_output(&o);
            outs.push(o);
        }
    }
    b.build().expect("generator builds valid netlists")
}

pub fn random_vectors(width: usize, len: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| (0..width).map(|_| rng.gen()).collect()).collect()
}
