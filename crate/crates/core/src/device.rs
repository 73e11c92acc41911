// SPDX-License-Identifier: Apache-2.0
//! SHE-MTJ macromodel.
//!
//! Closed-form laws cover retention (Néel–Arrhenius), critical current
//! (linear in the energy barrier), write energy (quadratic in current) and
//! the sense-amplifier reference resistance. Switching dynamics come from a
//! macrospin Landau–Lifshitz–Gilbert integrator with a Slonczewski
//! damping-like spin-torque term.

use serde::Serialize;

/// Gyromagnetic ratio times vacuum permeability, m/(A·s).
pub const GAMMA0: f64 = 2.211e5;

const NS: f64 = 1e-9;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DeviceError {
    #[error("energy barrier {0} kT outside (0, 100]")]
    BarrierOutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resistances must satisfy r_ap > r_p > 0 and r_hm >= 0")]
    ResistanceOrder,
    #[error("integration step {step} ns is larger than duration/100 = {limit} ns")]
    StepTooLarge { step: f64, limit: f64 },
    #[error("magnetization became non-finite at t = {t} ns (step too large?)")]
    NonFinite { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MtjParams {
    /// Energy barrier in units of kT.
    pub delta: f64,
    /// Critical current (µA) at `delta_ref`.
    pub i_c_ref: f64,
    pub delta_ref: f64,
    /// Parallel / anti-parallel MTJ resistance and heavy-metal path (Ω).
    pub r_p: f64,
    pub r_ap: f64,
    pub r_hm: f64,
    /// Write pulse width (ns).
    pub t_wr: f64,
    /// Attempt time (ns).
    pub tau0: f64,
}

impl Default for MtjParams {
    fn default() -> Self {
        MtjParams {
            delta: 40.0,
            i_c_ref: 100.0,
            delta_ref: 40.0,
            r_p: 2000.0,
            r_ap: 4000.0,
            r_hm: 1000.0,
            t_wr: 2.0,
            tau0: 1.0,
        }
    }
}

impl MtjParams {
    pub fn validate(&self) -> Result<(), DeviceError> {
        let bad = |what: &str| Err(DeviceError::InvalidParameter(what.to_string()));
        if !(self.delta > 0.0) {
            return bad("delta must be positive");
        }
        if !(self.delta_ref > 0.0) {
            return bad("delta_ref must be positive");
        }
        if !(self.tau0 > 0.0) {
            return bad("tau0 must be positive");
        }
        if !(self.t_wr > 0.0) {
            return bad("t_wr must be positive");
        }
        if !(self.r_ap > self.r_p && self.r_p > 0.0) {
            return Err(DeviceError::ResistanceOrder);
        }
        Ok(())
    }
}

/// Mean retention time in seconds: `tau0 * exp(delta)`.
pub fn retention_time(delta: f64, tau0_ns: f64) -> Result<f64, DeviceError> {
    if !(delta > 0.0 && delta <= 100.0) {
        return Err(DeviceError::BarrierOutOfRange(delta));
    }
    if !(tau0_ns > 0.0) {
        return Err(DeviceError::InvalidParameter("tau0 must be positive".into()));
    }
    Ok(tau0_ns * NS * delta.exp())
}

/// Critical switching current (µA) at barrier `delta`; `I_c ∝ Δ`.
pub fn critical_current(params: &MtjParams, delta: f64) -> Result<f64, DeviceError> {
    if !(delta > 0.0) {
        return Err(DeviceError::BarrierOutOfRange(delta));
    }
    if delta == params.delta_ref {
        return Ok(params.i_c_ref);
    }
    Ok(params.i_c_ref * delta / params.delta_ref)
}

/// Write-energy ratio when moving from `delta_from` to `delta_to`,
/// with `E ∝ I²` and `I ∝ Δ`.
pub fn write_energy_ratio(delta_from: f64, delta_to: f64) -> Result<f64, DeviceError> {
    if !(delta_from > 0.0) {
        return Err(DeviceError::BarrierOutOfRange(delta_from));
    }
    if !(delta_to > 0.0) {
        return Err(DeviceError::BarrierOutOfRange(delta_to));
    }
    let r = delta_to / delta_from;
    Ok(r * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceResistance {
    pub r_low: f64,
    pub r_high: f64,
    pub r_ref: f64,
}

/// Reference MTJ sizing for the PG sense amplifier: the low and high
/// read-path resistances average the cell with the heavy-metal path, and the
/// reference sits midway between them.
pub fn reference_resistance(r_p_pg: f64, r_ap_pg: f64, r_hm: f64) -> Result<ReferenceResistance, DeviceError> {
    if !(r_ap_pg > r_p_pg && r_p_pg > 0.0 && r_hm >= 0.0) {
        return Err(DeviceError::ResistanceOrder);
    }
    let r_low = (r_p_pg + r_hm) / 2.0;
    let r_high = (r_ap_pg + r_hm) / 2.0;
    Ok(ReferenceResistance {
        r_low,
        r_high,
        r_ref: (r_low + r_high) / 2.0,
    })
}

/// Constants of the macrospin model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LlgPhysics {
    /// Gilbert damping α.
    pub damping: f64,
    /// Uniaxial anisotropy field along z (A/m).
    pub anisotropy_field: f64,
    /// Damping-like torque amplitude per unit drive current (A/m per µA).
    pub st_coeff: f64,
    /// Initial tilt from the +z easy axis (degrees).
    pub tilt_deg: f64,
}

impl Default for LlgPhysics {
    fn default() -> Self {
        // st_coeff = damping * anisotropy_field / i_c_ref puts the zero-temperature
        // instability threshold at the default 100 µA reference current.
        LlgPhysics {
            damping: 0.01,
            anisotropy_field: 8.0e4,
            st_coeff: 8.0,
            tilt_deg: 5.0,
        }
    }
}

impl LlgPhysics {
    /// Drive current (µA) at which spin torque cancels damping near the easy axis.
    pub fn instability_current(&self) -> f64 {
        self.damping * self.anisotropy_field / self.st_coeff
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MacrospinState {
    pub t: f64,
    pub m: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchResult {
    pub switched: bool,
    /// First instant (ns) at which `m_z` crosses zero.
    pub switching_time: Option<f64>,
    pub trajectory: Vec<MacrospinState>,
    /// Largest deviation of |m| from 1 seen before per-step renormalization.
    pub max_norm_drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlgRun {
    /// Drive current (µA). Positive current pushes m toward −z.
    pub current: f64,
    pub duration: f64,
    pub step: f64,
    /// Keep every n-th state in the trajectory (1 = all).
    pub record_every: usize,
}

type Vec3 = [f64; 3];

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn axpy(a: f64, x: Vec3, y: Vec3) -> Vec3 {
    [a * x[0] + y[0], a * x[1] + y[1], a * x[2] + y[2]]
}

fn norm(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// dm/dt in rad/ns for the Landau–Lifshitz form of LLG with a
/// Slonczewski damping-like term of amplitude `a_j` and polarization `p`.
fn llg_rhs(m: Vec3, phys: &LlgPhysics, a_j: f64, p: Vec3) -> Vec3 {
    let g = GAMMA0 * NS / (1.0 + phys.damping * phys.damping);
    let h = [0.0, 0.0, phys.anisotropy_field * m[2]];
    let mxh = cross(m, h);
    let mxmxh = cross(m, mxh);
    let mxmxp = cross(m, cross(m, p));
    let mut d = [0.0; 3];
    for i in 0..3 {
        d[i] = -g * (mxh[i] + phys.damping * mxmxh[i] + a_j * mxmxp[i]);
    }
    d
}

/// Integrates the macrospin from near +z under a constant drive with a
/// fixed-step RK4 scheme, renormalizing |m| once per step.
pub fn llg_switch(
    params: &MtjParams,
    phys: &LlgPhysics,
    run: &LlgRun,
) -> Result<SwitchResult, DeviceError> {
    params.validate()?;
    if !(run.duration > 0.0 && run.step > 0.0) {
        return Err(DeviceError::InvalidParameter(
            "duration and step must be positive".into(),
        ));
    }
    let limit = run.duration / 100.0;
    if run.step > limit * (1.0 + 1e-12) {
        return Err(DeviceError::StepTooLarge {
            step: run.step,
            limit,
        });
    }
    let tilt = phys.tilt_deg.to_radians();
    let mut m: Vec3 = [tilt.sin(), 0.0, tilt.cos()];
    let p: Vec3 = [0.0, 0.0, -1.0];
    let a_j = phys.st_coeff * run.current;
    let h = run.step;
    let steps = (run.duration / h).round() as usize;
    let every = run.record_every.max(1);

    let mut trajectory = vec![MacrospinState { t: 0.0, m }];
    let mut crossing: Option<f64> = None;
    let mut max_drift: f64 = 0.0;

    for k in 0..steps {
        let t = k as f64 * h;
        let k1 = llg_rhs(m, phys, a_j, p);
        let k2 = llg_rhs(axpy(h / 2.0, k1, m), phys, a_j, p);
        let k3 = llg_rhs(axpy(h / 2.0, k2, m), phys, a_j, p);
        let k4 = llg_rhs(axpy(h, k3, m), phys, a_j, p);
        let mut next = m;
        for i in 0..3 {
            next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let n = norm(next);
        if !n.is_finite() || next.iter().any(|c| !c.is_finite()) {
            return Err(DeviceError::NonFinite { t: t + h });
        }
        max_drift = max_drift.max((n - 1.0).abs());
        for c in next.iter_mut() {
            *c /= n;
        }
        if crossing.is_none() && m[2] > 0.0 && next[2] <= 0.0 {
            // linear interpolation of the zero crossing inside the step
            let frac = m[2] / (m[2] - next[2]);
            crossing = Some(t + frac * h);
        }
        m = next;
        if (k + 1) % every == 0 || k + 1 == steps {
            trajectory.push(MacrospinState { t: t + h, m });
        }
    }

    let switched = crossing.is_some() && m[2] < -0.9;
    Ok(SwitchResult {
        switched,
        switching_time: if switched { crossing } else { None },
        trajectory,
        max_norm_drift: max_drift,
    })
}

/// `t,mx,my,mz` rows with a header line.
pub fn trajectory_csv(states: &[MacrospinState]) -> String {
    let mut out = String::from("t,mx,my,mz\n");
    for s in states {
        out.push_str(&format!("{},{},{},{}\n", s.t, s.m[0], s.m[1], s.m[2]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn retention_examples() {
        let r40 = retention_time(40.0, 1.0).unwrap();
        assert!((r40 / 2.3538526683702e8 - 1.0).abs() < 1e-9);
        let r30 = retention_time(30.0, 1.0).unwrap();
        assert!((r30 / 1.0686474581524e4 - 1.0).abs() < 1e-9);
        let r35 = retention_time(35.0, 1.0).unwrap();
        assert!((r35 / 1.5860134523134e6 - 1.0).abs() < 1e-9);
        assert!(retention_time(0.0, 1.0).is_err());
        assert!(retention_time(101.0, 1.0).is_err());
    }

    #[test]
    fn critical_current_linear() {
        let p = MtjParams::default();
        assert_eq!(critical_current(&p, 40.0).unwrap(), p.i_c_ref);
        assert_eq!(critical_current(&p, 30.0).unwrap() / p.i_c_ref, 0.75);
        assert_eq!(critical_current(&p, 20.0).unwrap() / p.i_c_ref, 0.5);
    }

    #[test]
    fn energy_ratio_quadratic() {
        assert_eq!(write_energy_ratio(40.0, 30.0).unwrap(), 0.5625);
        assert_eq!(write_energy_ratio(40.0, 40.0).unwrap(), 1.0);
        assert_eq!(write_energy_ratio(40.0, 20.0).unwrap(), 0.25);
    }

    #[test]
    fn reference_resistance_examples() {
        let r = reference_resistance(2000.0, 4000.0, 1000.0).unwrap();
        assert_eq!((r.r_low, r.r_high, r.r_ref), (1500.0, 2500.0, 2000.0));
        let r = reference_resistance(1000.0, 3000.0, 0.0).unwrap();
        assert_eq!((r.r_low, r.r_high, r.r_ref), (500.0, 1500.0, 1000.0));
        assert!(reference_resistance(3000.0, 1000.0, 0.0).is_err());
        let r = reference_resistance(1000.0, 1000.0 + 1e-9, 0.0).unwrap();
        assert!((r.r_low - 500.0).abs() < 1e-6 && (r.r_high - 500.0).abs() < 1e-6);
    }

    #[test]
    fn no_drive_stays_put() {
        let run = LlgRun {
            current: 0.0,
            duration: 20.0,
            step: 1e-3,
            record_every: 100,
        };
        let r = llg_switch(&MtjParams::default(), &LlgPhysics::default(), &run).unwrap();
        assert!(!r.switched);
        assert!(r.trajectory.iter().all(|s| s.m[2] > 0.99));
    }

    #[test]
    fn step_limit_enforced() {
        let run = LlgRun {
            current: 0.0,
            duration: 1.0,
            step: 0.1,
            record_every: 1,
        };
        assert!(matches!(
            llg_switch(&MtjParams::default(), &LlgPhysics::default(), &run),
            Err(DeviceError::StepTooLarge { .. })
        ));
    }

    #[test]
    fn huge_step_blows_up_loudly() {
        let phys = LlgPhysics {
            anisotropy_field: 1e100,
            ..LlgPhysics::default()
        };
        let run = LlgRun {
            current: 0.0,
            duration: 100.0,
            step: 1.0,
            record_every: 1,
        };
        let r = llg_switch(&MtjParams::default(), &phys, &run);
        assert!(matches!(r, Err(DeviceError::NonFinite { .. })), "{r:?}");
    }

    #[test]
    fn csv_header() {
        let csv = trajectory_csv(&[MacrospinState {
            t: 0.0,
            m: [0.0, 0.0, 1.0],
        }]);
        assert_eq!(csv, "t,mx,my,mz\n0,0,0,1\n");
    }
}
