// SPDX-License-Identifier: Apache-2.0
//! Technology parameters and the flat `section.key = number` file format.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::device::{LlgPhysics, MtjParams};
use crate::netlist::{FfKind, GateKind};
use crate::pglib::CellCosts;

/// The shipped default technology file.
pub const DEFAULT_TECH: &str = include_str!("../tech/default.tech");

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TechError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("key `{key}` must be a finite non-negative number")]
    Negative { key: String },
    #[error("device section invalid: {0}")]
    Device(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateCost {
    pub area: f64,
    pub power: f64,
    pub delay: f64,
}

/// Cost row shared by flip-flops and boundary (I/O) registers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegCost {
    pub area: f64,
    pub power: f64,
    pub t_wr: f64,
    pub t_rd: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeafIncrement {
    pub area: f64,
    pub power: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TechParams {
    pub clock_period: f64,
    pub gates: BTreeMap<GateKind, GateCost>,
    pub dff: RegCost,
    pub nvff: RegCost,
    pub leff: RegCost,
    pub leff_per_leaf: LeafIncrement,
    /// Primary inputs modeled as non-volatile input registers.
    pub input_reg: RegCost,
    /// Primary outputs modeled as non-volatile output registers.
    pub output_reg: RegCost,
    pub mtj: MtjParams,
    pub llg: LlgPhysics,
}

impl Default for TechParams {
    fn default() -> Self {
        TechParams::parse(DEFAULT_TECH).expect("shipped technology file parses")
    }
}

const REG_FIELDS: [&str; 5] = ["area", "power", "t_wr", "t_rd", "energy"];
const REG_KINDS: [&str; 5] = ["DFF", "NVFF", "LEFF", "PI", "PO"];
const LEAF_FIELDS: [&str; 3] = ["area_per_leaf", "power_per_leaf", "energy_per_leaf"];
const DEVICE_FIELDS: [&str; 12] = [
    "delta",
    "delta_ref",
    "i_c_ref",
    "r_p",
    "r_ap",
    "r_hm",
    "t_wr",
    "tau0",
    "damping",
    "anisotropy_field",
    "st_coeff",
    "tilt_deg",
];

fn known_keys() -> Vec<String> {
    let mut keys = vec!["clock.period".to_string()];
    for k in GateKind::ALL {
        for f in ["area", "power", "delay"] {
            keys.push(format!("gate.{}.{f}", k.keyword()));
        }
    }
    for k in REG_KINDS {
        for f in REG_FIELDS {
            keys.push(format!("ff.{k}.{f}"));
        }
    }
    for f in LEAF_FIELDS {
        keys.push(format!("ff.LEFF.{f}"));
    }
    for f in DEVICE_FIELDS {
        keys.push(format!("device.{f}"));
    }
    keys
}

impl TechParams {
    /// Parses a complete technology file; every known key must be present.
    pub fn parse(text: &str) -> Result<TechParams, TechError> {
        let known = known_keys();
        let mut values: BTreeMap<String, f64> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| TechError::Syntax {
                line,
                message: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|_| TechError::Syntax {
                line,
                message: format!("`{}` is not a number", value.trim()),
            })?;
            if !known.iter().any(|k| k == key) {
                return Err(TechError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if !(value.is_finite() && value >= 0.0) {
                return Err(TechError::Negative {
                    key: key.to_string(),
                });
            }
            if values.insert(key.to_string(), value).is_some() {
                return Err(TechError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
        }
        if let Some(missing) = known.iter().find(|k| !values.contains_key(*k)) {
            return Err(TechError::MissingKey(missing.clone()));
        }
        let get = |k: &str| values[k];
        let reg = |kind: &str| RegCost {
            area: get(&format!("ff.{kind}.area")),
            power: get(&format!("ff.{kind}.power")),
            t_wr: get(&format!("ff.{kind}.t_wr")),
            t_rd: get(&format!("ff.{kind}.t_rd")),
            energy: get(&format!("ff.{kind}.energy")),
        };
        let gates = GateKind::ALL
            .iter()
            .map(|&k| {
                let kw = k.keyword();
                (
                    k,
                    GateCost {
                        area: get(&format!("gate.{kw}.area")),
                        power: get(&format!("gate.{kw}.power")),
                        delay: get(&format!("gate.{kw}.delay")),
                    },
                )
            })
            .collect();
        let tech = TechParams {
            clock_period: get("clock.period"),
            gates,
            dff: reg("DFF"),
            nvff: reg("NVFF"),
            leff: reg("LEFF"),
            leff_per_leaf: LeafIncrement {
                area: get("ff.LEFF.area_per_leaf"),
                power: get("ff.LEFF.power_per_leaf"),
                energy: get("ff.LEFF.energy_per_leaf"),
            },
            input_reg: reg("PI"),
            output_reg: reg("PO"),
            mtj: MtjParams {
                delta: get("device.delta"),
                delta_ref: get("device.delta_ref"),
                i_c_ref: get("device.i_c_ref"),
                r_p: get("device.r_p"),
                r_ap: get("device.r_ap"),
                r_hm: get("device.r_hm"),
                t_wr: get("device.t_wr"),
                tau0: get("device.tau0"),
            },
            llg: LlgPhysics {
                damping: get("device.damping"),
                anisotropy_field: get("device.anisotropy_field"),
                st_coeff: get("device.st_coeff"),
                tilt_deg: get("device.tilt_deg"),
            },
        };
        tech.mtj
            .validate()
            .map_err(|e| TechError::Device(e.to_string()))?;
        Ok(tech)
    }

    /// Serializes back to the file format (keys in canonical order).
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let mut put = |k: String, v: f64| out.push_str(&format!("{k} = {v:?}\n"));
        put("clock.period".into(), self.clock_period);
        for (k, c) in &self.gates {
            let kw = k.keyword();
            put(format!("gate.{kw}.area"), c.area);
            put(format!("gate.{kw}.power"), c.power);
            put(format!("gate.{kw}.delay"), c.delay);
        }
        for (kind, r) in [
            ("DFF", &self.dff),
            ("NVFF", &self.nvff),
            ("LEFF", &self.leff),
            ("PI", &self.input_reg),
            ("PO", &self.output_reg),
        ] {
            put(format!("ff.{kind}.area"), r.area);
            put(format!("ff.{kind}.power"), r.power);
            put(format!("ff.{kind}.t_wr"), r.t_wr);
            put(format!("ff.{kind}.t_rd"), r.t_rd);
            put(format!("ff.{kind}.energy"), r.energy);
        }
        put("ff.LEFF.area_per_leaf".into(), self.leff_per_leaf.area);
        put("ff.LEFF.power_per_leaf".into(), self.leff_per_leaf.power);
        put("ff.LEFF.energy_per_leaf".into(), self.leff_per_leaf.energy);
        let m = &self.mtj;
        let l = &self.llg;
        for (k, v) in [
            ("delta", m.delta),
            ("delta_ref", m.delta_ref),
            ("i_c_ref", m.i_c_ref),
            ("r_p", m.r_p),
            ("r_ap", m.r_ap),
            ("r_hm", m.r_hm),
            ("t_wr", m.t_wr),
            ("tau0", m.tau0),
            ("damping", l.damping),
            ("anisotropy_field", l.anisotropy_field),
            ("st_coeff", l.st_coeff),
            ("tilt_deg", l.tilt_deg),
        ] {
            put(format!("device.{k}"), v);
        }
        out
    }

    pub fn gate(&self, kind: GateKind) -> &GateCost {
        &self.gates[&kind]
    }

    /// Cost of a flip-flop of `kind`; LE-FFs add the per-leaf increment.
    pub fn ff(&self, kind: FfKind, leaves: usize) -> RegCost {
        match kind {
            FfKind::Dff => self.dff,
            FfKind::NvFf => self.nvff,
            FfKind::LeFf => {
                let k = leaves as f64;
                RegCost {
                    area: self.leff.area + k * self.leff_per_leaf.area,
                    power: self.leff.power + k * self.leff_per_leaf.power,
                    energy: self.leff.energy + k * self.leff_per_leaf.energy,
                    ..self.leff
                }
            }
        }
    }

    /// Cell costs for a PG library entry of `arity` realized as an LE-FF.
    pub fn leff_cell(&self, arity: usize) -> CellCosts {
        let r = self.ff(FfKind::LeFf, arity);
        CellCosts {
            area: r.area,
            power: r.power,
            t_wr: r.t_wr,
            t_rd: r.t_rd,
            write_energy: r.energy,
        }
    }

    /// Scales every sensitive-time contributor (all t_WR, t_RD and gate
    /// delays) by `factor`.
    pub fn scaled_timing(&self, factor: f64) -> TechParams {
        let mut t = self.clone();
        for c in t.gates.values_mut() {
            c.delay *= factor;
        }
        for r in [
            &mut t.dff,
            &mut t.nvff,
            &mut t.leff,
            &mut t.input_reg,
            &mut t.output_reg,
        ] {
            r.t_wr *= factor;
            r.t_rd *= factor;
        }
        t
    }

    /// 64-bit FNV-1a of the canonical serialization, for report headers.
    pub fn fingerprint(&self) -> u64 {
        crate::fnv1a(self.to_file_string().as_bytes())
    }
}
