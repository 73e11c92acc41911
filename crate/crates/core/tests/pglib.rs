// SPDX-License-Identifier: Apache-2.0

mod common;

use nvcluster::pglib::{enumerate_pg_functions, functions, is_pg_realizable, BooleanFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn base3_named_members() {
    let lib = enumerate_pg_functions(3, true).unwrap();
    for f in [
        functions::and(2),
        functions::or(2),
        functions::nand(2),
        functions::nor(2),
        functions::maj(3),
        functions::maj(3).complement(),
        functions::not(),
        functions::buf(),
    ] {
        assert!(lib.contains(&f), "missing 0x{}", f.hex());
    }
    assert!(!lib.contains(&functions::xor(2)));
    assert!(!lib.contains(&functions::xnor(2)));
}

#[test]
fn exhaustive_small_arity_agreement() {
    for (base, inv) in [(3, true), (3, false), (5, true), (5, false)] {
        let lib = enumerate_pg_functions(base, inv).unwrap();
        let oracle = common::realizable_set(base, inv);
        for arity in 0..=3usize {
            for table in 0..(1u64 << (1 << arity)) {
                let f = BooleanFunction::new(arity, table).unwrap();
                let got = is_pg_realizable(&f, &lib);
                assert_eq!(
                    got.is_some(),
                    oracle.contains(&(arity, table)),
                    "base {base} inv {inv} arity {arity} 0x{table:x}"
                );
                if let Some(r) = got {
                    assert_eq!(r.evaluate(), f);
                }
            }
        }
        assert_eq!(lib.len(), oracle.len());
    }
}

#[test]
fn sampled_wide_arity_agreement() {
    let lib = enumerate_pg_functions(5, true).unwrap();
    let oracle = common::realizable_set(5, true);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let arity = rng.gen_range(4..=5usize);
        let mask = (1u64 << (1 << arity)) - 1;
        let table = rng.gen::<u64>() & mask;
        let f = BooleanFunction::new(arity, table).unwrap();
        assert_eq!(is_pg_realizable(&f, &lib).is_some(), oracle.contains(&(arity, table)));
    }
    for &(arity, table) in oracle.iter().filter(|(a, _)| *a >= 4) {
        let f = BooleanFunction::new(arity, table).unwrap();
        assert_eq!(is_pg_realizable(&f, &lib).unwrap().evaluate(), f);
    }
}

#[test]
fn every_realizable_function_is_symmetric() {
    let lib = enumerate_pg_functions(5, true).unwrap();
    for (f, _) in lib.iter() {
        assert!(f.is_symmetric(), "0x{}", f.hex());
    }
}
