// SPDX-License-Identifier: Apache-2.0
//! Truth tables and the polymorphic-gate (PG) library.
//!
//! An n-input majority device becomes a family of gates by tying some of its
//! inputs to constant ON/OFF levels and wiring distinct variables to the
//! rest. With a complementary sense amplifier the output may also be taken
//! inverted. The library maps each reachable function to one canonical
//! realization: the smallest base arity first, then the non-inverted form,
//! then the lexicographically least pin assignment.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PgError {
    #[error("majority base arity must be 3 or 5, got {0}")]
    BadBase(usize),
    #[error("expected {expected} input bits, got {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("switching threshold is defined for odd n >= 1, got {0}")]
    BadInputCount(usize),
}

/// A Boolean function of up to six variables stored as a truth table.
/// Bit `i` of `table` is the output for the assignment whose binary encoding
/// is `i`, with variable 0 as the least-significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BooleanFunction {
    arity: u8,
    table: u64,
}

impl BooleanFunction {
    pub const MAX_ARITY: usize = 6;

    /// `None` if `arity` exceeds the cap or `table` has bits beyond `2^arity`.
    pub fn new(arity: usize, table: u64) -> Option<Self> {
        if arity > Self::MAX_ARITY || table & !Self::mask_for(arity) != 0 {
            return None;
        }
        Some(BooleanFunction {
            arity: arity as u8,
            table,
        })
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        assert!(arity <= Self::MAX_ARITY, "arity {arity} exceeds cap");
        let table = (0..1usize << arity).fold(0u64, |t, i| t | ((f(i) as u64) << i));
        BooleanFunction {
            arity: arity as u8,
            table,
        }
    }

    fn mask_for(arity: usize) -> u64 {
        if arity >= 6 {
            u64::MAX
        } else {
            (1u64 << (1 << arity)) - 1
        }
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn table(&self) -> u64 {
        self.table
    }

    pub fn eval(&self, assignment: usize) -> bool {
        (self.table >> assignment) & 1 == 1
    }

    pub fn complement(&self) -> Self {
        BooleanFunction {
            arity: self.arity,
            table: !self.table & Self::mask_for(self.arity()),
        }
    }

    /// Lower-case hex, zero-padded to the full table width (at least one digit).
    pub fn hex(&self) -> String {
        let digits = ((1usize << self.arity) / 4).max(1);
        format!("{:0width$x}", self.table, width = digits)
    }

    /// Whether the output depends on the count of true inputs only.
    pub fn is_symmetric(&self) -> bool {
        let k = self.arity();
        let mut by_weight: [Option<bool>; 7] = [None; 7];
        (0..1usize << k).all(|i| {
            let w = i.count_ones() as usize;
            let v = self.eval(i);
            match by_weight[w] {
                Some(prev) => prev == v,
                None => {
                    by_weight[w] = Some(v);
                    true
                }
            }
        })
    }

    /// Threshold `t` such that the function equals `popcount >= t`, if any.
    pub fn unit_threshold(&self) -> Option<usize> {
        let k = self.arity();
        (0..=k + 1).find(|&t| {
            (0..1usize << k).all(|i| self.eval(i) == (i.count_ones() as usize >= t))
        })
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arity={} table=0x{}", self.arity, self.hex())
    }
}

/// One input position of a majority device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Pin {
    Off,
    On,
    Var(u8),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PgRealization {
    pub pins: Vec<Pin>,
    pub inverted: bool,
}

impl PgRealization {
    pub fn base(&self) -> usize {
        self.pins.len()
    }

    pub fn arity(&self) -> usize {
        self.pins.iter().filter(|p| matches!(p, Pin::Var(_))).count()
    }

    /// Truth table produced by this configuration.
    pub fn evaluate(&self) -> BooleanFunction {
        let need = (self.base() + 1) / 2;
        BooleanFunction::from_fn(self.arity(), |assign| {
            let ones = self
                .pins
                .iter()
                .filter(|p| match p {
                    Pin::On => true,
                    Pin::Off => false,
                    Pin::Var(k) => (assign >> k) & 1 == 1,
                })
                .count();
            (ones >= need) != self.inverted
        })
    }

    /// `0`/`1` for affixed pins, `a`, `b`, ... for variables 0, 1, ...
    pub fn affix_pattern(&self) -> String {
        self.pins
            .iter()
            .map(|p| match p {
                Pin::Off => '0',
                Pin::On => '1',
                Pin::Var(k) => (b'a' + k) as char,
            })
            .collect()
    }

    fn order_key(&self) -> (usize, bool, &[Pin]) {
        (self.base(), self.inverted, &self.pins)
    }
}

/// `true` iff strictly more than half of `bits` are set.
pub fn majority(n: usize, bits: &[bool]) -> Result<bool, PgError> {
    if n != 3 && n != 5 {
        return Err(PgError::BadBase(n));
    }
    if bits.len() != n {
        return Err(PgError::WidthMismatch {
            expected: n,
            found: bits.len(),
        });
    }
    Ok(bits.iter().filter(|&&b| b).count() > n / 2)
}

/// Number of ON write transistors at which the write current of an n-input
/// PG first exceeds the critical current: a strict majority, `(n+1)/2`.
pub fn switching_inputs_required(n: usize) -> Result<usize, PgError> {
    if n == 0 || n % 2 == 0 {
        return Err(PgError::BadInputCount(n));
    }
    Ok((n + 1) / 2)
}

/// Canonical function → realization map for majority bases up to `max_base`.
#[derive(Debug, Clone)]
pub struct PgLibrary {
    max_base: usize,
    allow_inversion: bool,
    entries: BTreeMap<BooleanFunction, PgRealization>,
}

impl PgLibrary {
    pub fn max_base(&self) -> usize {
        self.max_base
    }

    pub fn allows_inversion(&self) -> bool {
        self.allow_inversion
    }

    /// Largest number of variables any entry accepts.
    pub fn max_arity(&self) -> usize {
        self.entries.keys().map(|f| f.arity()).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BooleanFunction, &PgRealization)> {
        self.entries.iter()
    }

    pub fn contains(&self, f: &BooleanFunction) -> bool {
        self.entries.contains_key(f)
    }

    pub fn realization(&self, f: &BooleanFunction) -> Option<&PgRealization> {
        self.entries.get(f)
    }

    /// One line per entry: `name arity table=0x.. base=n affix=.. inv=0|1`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (f, r) in &self.entries {
            out.push_str(&format!(
                "{} {} table=0x{} base={} affix={} inv={}\n",
                cell_name(f),
                f.arity(),
                f.hex(),
                r.base(),
                r.affix_pattern(),
                r.inverted as u8
            ));
        }
        out
    }
}

/// All functions reachable by one majority device of base arity 3 up to `n`
/// (odd, currently 3 or 5), optionally with inverted output.
pub fn enumerate_pg_functions(n: usize, allow_inversion: bool) -> Result<PgLibrary, PgError> {
    if n != 3 && n != 5 {
        return Err(PgError::BadBase(n));
    }
    let mut entries: BTreeMap<BooleanFunction, PgRealization> = BTreeMap::new();
    for base in (3..=n).step_by(2) {
        for pins in pin_assignments(base) {
            for inverted in [false, true] {
                if inverted && !allow_inversion {
                    continue;
                }
                let r = PgRealization {
                    pins: pins.clone(),
                    inverted,
                };
                let f = r.evaluate();
                match entries.get(&f) {
                    Some(old) if old.order_key() <= r.order_key() => {}
                    _ => {
                        entries.insert(f, r);
                    }
                }
            }
        }
    }
    Ok(PgLibrary {
        max_base: n,
        allow_inversion,
        entries,
    })
}

/// Exact lookup; realizable functions are symmetric, so variable order
/// never needs to be searched.
pub fn is_pg_realizable<'l>(f: &BooleanFunction, library: &'l PgLibrary) -> Option<&'l PgRealization> {
    library.realization(f)
}

/// Every assignment of Off/On/Var to `base` positions where the variables
/// used are exactly `0..k` for some k, each once, in every order.
fn pin_assignments(base: usize) -> Vec<Vec<Pin>> {
    let mut out = Vec::new();
    // kinds: 0 = Off, 1 = On, 2 = variable
    let combos = 3usize.pow(base as u32);
    for code in 0..combos {
        let mut kinds = Vec::with_capacity(base);
        let mut c = code;
        for _ in 0..base {
            kinds.push(c % 3);
            c /= 3;
        }
        let var_positions: Vec<usize> = (0..base).filter(|&i| kinds[i] == 2).collect();
        let k = var_positions.len();
        let mut perm: Vec<u8> = (0..k as u8).collect();
        loop {
            let mut pins: Vec<Pin> = kinds
                .iter()
                .map(|&kd| if kd == 1 { Pin::On } else { Pin::Off })
                .collect();
            for (slot, &pos) in var_positions.iter().enumerate() {
                pins[pos] = Pin::Var(perm[slot]);
            }
            out.push(pins);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    out
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Conventional name for a library function (AND2, NOR2, MAJ3, MIN3, ...).
pub fn cell_name(f: &BooleanFunction) -> String {
    let k = f.arity();
    let (t, inv) = match (f.unit_threshold(), f.complement().unit_threshold()) {
        (Some(t), _) => (t, false),
        (None, Some(t)) => (t, true),
        (None, None) => return format!("FN{}_{}", k, f.hex()),
    };
    if k == 0 {
        return if (t == 0) != inv { "CONST1" } else { "CONST0" }.to_string();
    }
    if t == 0 || t > k {
        let value = (t == 0) != inv;
        return format!("CONST{}_A{}", value as u8, k);
    }
    let base = if k == 1 {
        return if inv { "NOT" } else { "BUF" }.to_string();
    } else if t == k {
        if inv { "NAND" } else { "AND" }
    } else if t == 1 {
        if inv { "NOR" } else { "OR" }
    } else if k % 2 == 1 && t == (k + 1) / 2 {
        if inv { "MIN" } else { "MAJ" }
    } else {
        return format!("{}TH{}OF{}", if inv { "N" } else { "" }, t, k);
    };
    format!("{base}{k}")
}

/// Technology costs attached to a realized cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellCosts {
    pub area: f64,
    pub power: f64,
    pub t_wr: f64,
    pub t_rd: f64,
    pub write_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PgCell {
    pub name: String,
    pub realization: PgRealization,
    pub function: BooleanFunction,
    pub costs: CellCosts,
}

impl PgLibrary {
    /// Materializes priced cells; `costs` is queried with each cell's arity.
    /// Panics if an entry does not evaluate to its key.
    pub fn cells(&self, mut costs: impl FnMut(usize) -> CellCosts) -> Vec<PgCell> {
        self.entries
            .iter()
            .map(|(f, r)| {
                assert_eq!(r.evaluate(), *f, "library entry {} is inconsistent", cell_name(f));
                PgCell {
                    name: cell_name(f),
                    realization: r.clone(),
                    function: *f,
                    costs: costs(f.arity()),
                }
            })
            .collect()
    }
}

/// Common reference functions.
pub mod functions {
    use super::BooleanFunction;

    pub fn and(k: usize) -> BooleanFunction {
        BooleanFunction::from_fn(k, |i| i == (1 << k) - 1)
    }
    pub fn or(k: usize) -> BooleanFunction {
        BooleanFunction::from_fn(k, |i| i != 0)
    }
    pub fn nand(k: usize) -> BooleanFunction {
        and(k).complement()
    }
    pub fn nor(k: usize) -> BooleanFunction {
        or(k).complement()
    }
    pub fn xor(k: usize) -> BooleanFunction {
        BooleanFunction::from_fn(k, |i| i.count_ones() % 2 == 1)
    }
    pub fn xnor(k: usize) -> BooleanFunction {
        xor(k).complement()
    }
    pub fn maj(k: usize) -> BooleanFunction {
        BooleanFunction::from_fn(k, |i| i.count_ones() as usize > k / 2)
    }
    pub fn buf() -> BooleanFunction {
        BooleanFunction::from_fn(1, |i| i == 1)
    }
    pub fn not() -> BooleanFunction {
        buf().complement()
    }
}

#[cfg(test)]
mod tests {
    use super::functions::*;
    use super::*;

    #[test]
    fn majority_examples() {
        assert_eq!(majority(3, &[true, true, false]), Ok(true));
        assert_eq!(majority(3, &[true, false, false]), Ok(false));
        assert_eq!(majority(5, &[true, true, false, false, false]), Ok(false));
        assert_eq!(majority(4, &[true; 4]), Err(PgError::BadBase(4)));
        assert!(majority(3, &[true; 2]).is_err());
    }

    #[test]
    fn switching_threshold() {
        assert_eq!(switching_inputs_required(3), Ok(2));
        assert_eq!(switching_inputs_required(5), Ok(3));
        assert_eq!(switching_inputs_required(1), Ok(1));
        assert!(switching_inputs_required(4).is_err());
        assert!(switching_inputs_required(0).is_err());
    }

    #[test]
    fn maj3_table_is_e8() {
        assert_eq!(maj(3).table(), 0xE8);
        let lib = enumerate_pg_functions(3, true).unwrap();
        let r = is_pg_realizable(&maj(3), &lib).unwrap();
        assert_eq!(r.arity(), 3);
        assert!(!r.inverted);
        assert!(r.pins.iter().all(|p| matches!(p, Pin::Var(_))));
    }

    #[test]
    fn base3_without_inversion_has_and_or() {
        let lib = enumerate_pg_functions(3, false).unwrap();
        let and2 = lib.realization(&and(2)).unwrap();
        assert_eq!(and2.affix_pattern(), "0ab");
        let or2 = lib.realization(&or(2)).unwrap();
        assert_eq!(or2.affix_pattern(), "1ab");
        assert!(!lib.contains(&nand(2)));
    }

    #[test]
    fn inversion_adds_nand_nor() {
        let lib = enumerate_pg_functions(3, true).unwrap();
        let nor2 = lib.realization(&nor(2)).unwrap();
        assert!(nor2.inverted);
        assert_eq!(nor2.affix_pattern(), "1ab");
        assert!(lib.contains(&nand(2)));
    }

    #[test]
    fn base5_reaches_three_input_and_or() {
        let lib = enumerate_pg_functions(5, false).unwrap();
        let or3 = lib.realization(&or(3)).unwrap();
        assert_eq!(or3.base(), 5);
        assert_eq!(or3.pins.iter().filter(|p| **p == Pin::On).count(), 2);
        assert_eq!(lib.realization(&and(3)).unwrap().affix_pattern(), "00abc");
        // minimal base is preferred
        assert_eq!(lib.realization(&and(2)).unwrap().base(), 3);
    }

    #[test]
    fn xor_never_realizable() {
        for n in [3, 5] {
            let lib = enumerate_pg_functions(n, true).unwrap();
            for k in 2..=5 {
                assert!(!lib.contains(&xor(k)));
                assert!(!lib.contains(&xnor(k)));
            }
        }
    }

    #[test]
    fn names() {
        assert_eq!(cell_name(&nor(2)), "NOR2");
        assert_eq!(cell_name(&maj(3)), "MAJ3");
        assert_eq!(cell_name(&maj(3).complement()), "MIN3");
        assert_eq!(cell_name(&buf()), "BUF");
        assert_eq!(cell_name(&not()), "NOT");
        assert_eq!(cell_name(&BooleanFunction::new(0, 1).unwrap()), "CONST1");
        assert_eq!(cell_name(&xor(2)), "FN2_6");
    }

    #[test]
    fn dump_format() {
        let lib = enumerate_pg_functions(3, true).unwrap();
        let dump = lib.dump();
        assert!(dump.contains("NOR2 2 table=0x1 base=3 affix=1ab inv=1\n"));
        assert!(dump.contains("MAJ3 3 table=0xe8 base=3 affix=abc inv=0\n"));
        assert_eq!(dump.lines().count(), lib.len());
    }

    #[test]
    fn hex_width() {
        assert_eq!(and(2).hex(), "8");
        assert_eq!(maj(3).hex(), "e8");
        assert_eq!(BooleanFunction::new(0, 0).unwrap().hex(), "0");
        assert_eq!(and(4).hex(), "8000");
        assert!(BooleanFunction::new(1, 0b100).is_none());
        assert!(BooleanFunction::new(7, 0).is_none());
    }

    #[test]
    fn cells_are_priced_and_consistent() {
        let lib = enumerate_pg_functions(5, true).unwrap();
        let cells = lib.cells(|k| CellCosts {
            area: 1.0 + k as f64,
            power: 0.0,
            t_wr: 0.0,
            t_rd: 0.0,
            write_energy: 0.0,
        });
        assert_eq!(cells.len(), lib.len());
        let maj5 = cells.iter().find(|c| c.name == "MAJ5").unwrap();
        assert_eq!(maj5.costs.area, 6.0);
    }
}
