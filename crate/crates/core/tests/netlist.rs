// SPDX-License-Identifier: Apache-2.0

mod common;

use nvcluster::netlist::{emit_bench, parse_bench, FfKind, GateKind, NetlistBuilder, NetlistError};
use proptest::prelude::*;

#[test]
fn s27_counts() {
    let n = common::s27();
    assert_eq!(n.inputs().len(), 4);
    assert_eq!(n.outputs().len(), 1);
    assert_eq!(n.count_ffs(FfKind::Dff), 3);
    assert_eq!(n.gates().len(), 10);
    assert_eq!(n.fanout("G11").unwrap(), 3);
    assert_eq!(n.fanout("G12").unwrap(), 2);
}

#[test]
fn bundled_round_trip_is_identity_on_text() {
    for (name, n) in common::bundled_benches() {
        let once = emit_bench(&n);
        let again = parse_bench(&name, &once).unwrap();
        assert_eq!(emit_bench(&again), once, "{name}");
        assert_eq!(again.gates(), n.gates(), "{name}");
        assert_eq!(again.ffs(), n.ffs(), "{name}");
    }
}

#[test]
fn s27_known_response() {
    // Reference sequence cross-checked against an independent Verilog model.
    let n = common::s27();
    let seq: Vec<Vec<bool>> = [0b0000, 0b1111, 0b0101, 0b1010, 0b0011, 0b1100]
        .iter()
        .map(|&v| (0..4).map(|i| (v >> (3 - i)) & 1 == 1).collect())
        .collect();
    let trace = n.simulate(None, &seq).unwrap();
    let outs: Vec<bool> = trace.outputs.iter().map(|o| o[0]).collect();
    let mut state = [false; 3];
    let mut expected = Vec::new();
    for v in &seq {
        let (g0, g1, g2, g3) = (v[0], v[1], v[2], v[3]);
        let (g5, g6, g7) = (state[0], state[1], state[2]);
        let g14 = !g0;
        let g12 = !(g1 || g7);
        let g8 = g14 && g6;
        let g15 = g12 || g8;
        let g16 = g3 || g8;
        let g9 = !(g16 && g15);
        let g11 = !(g5 || g9);
        let g10 = !(g14 || g11);
        let g13 = !(g2 || g12);
        let g17 = !g11;
        expected.push(g17);
        state = [g10, g11, g13];
    }
    assert_eq!(outs, expected);
    assert_eq!(trace.final_state, state.to_vec());
}

#[test]
fn loop_members_reported() {
    let text = "INPUT(a)\nOUTPUT(y)\nx = AND(a, y)\ny = NOT(x)\n";
    match parse_bench("loop", text) {
        Err(NetlistError::CombinationalLoop { members }) => {
            assert!(members.contains(&"x".to_string()) && members.contains(&"y".to_string()));
        }
        other => panic!("expected loop, got {other:?}"),
    }
}

#[test]
fn loop_through_ff_is_fine() {
    let text = "INPUT(a)\nOUTPUT(q)\nx = AND(a, q)\nq = DFF(x)\n";
    assert!(parse_bench("t", text).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_netlists_round_trip(seed in any::<u64>()) {
        let n = common::random_netlist(seed, 5, 4, 30, FfKind::Dff);
        let text = emit_bench(&n);
        let m = parse_bench(n.name(), &text).unwrap();
        prop_assert_eq!(emit_bench(&m), text);
        let vecs = common::random_vectors(n.inputs().len(), 20, seed);
        prop_assert_eq!(n.simulate(None, &vecs).unwrap(), m.simulate(None, &vecs).unwrap());
    }

    #[test]
    fn closing_a_gate_cycle_is_rejected(seed in any::<u64>(), back in 0usize..8) {
        // Rewire the first gate to read the last one, which depends on it.
        let mut b = NetlistBuilder::new("cyc");
        b.add_input("a");
        let len = back + 2;
        b.add_gate("g0", GateKind::And, &["a", &format!("g{}", len - 1)]);
        for i in 1..len {
            let kind = if seed % 2 == 0 { GateKind::Not } else { GateKind::Buff };
            b.add_gate(&format!("g{i}"), kind, &[&format!("g{}", i - 1)]);
        }
        b.add_output(&format!("g{}", len - 1));
        match b.build() {
            Err(NetlistError::CombinationalLoop { members }) => prop_assert_eq!(members.len(), len),
            other => prop_assert!(false, "expected loop, got {:?}", other),
        }
    }
}
