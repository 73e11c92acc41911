// SPDX-License-Identifier: Apache-2.0
//! Non-volatile logic clustering for gate-level sequential netlists.
//!
//! The pipeline parses an ISCAS-89 `.bench` netlist, enumerates the
//! functions a single polymorphic gate can realize, folds eligible
//! flip-flop cones into logic-embedded flip-flops, and evaluates the result
//! for cost, vulnerability time and behaviour under intermittent power.

pub mod analysis;
pub mod clustering;
pub mod device;
pub mod intermit;
pub mod netlist;
pub mod pglib;
pub mod tech;

/// 64-bit FNV-1a, used for stable content fingerprints.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
