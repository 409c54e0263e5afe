use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::{ArchitectureConfig, ArchitectureKind, PulseEnvelope};
use crate::error::{Error, Result};
use crate::model::{DeviceParams, Participation};

/// Timing and averaging inputs of the closed-form error model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticControlModel {
    /// Number of gate lengths needed per write plus read, `t_w + t_r ≈ α/χ`.
    pub alpha: f64,
    /// Mean photon number while idling.
    pub n: f64,
    pub t_ef: f64,
    pub t_sb: f64,
    pub t_bs: f64,
    pub t_i: f64,
}

impl AnalyticControlModel {
    pub fn new(alpha: f64, n: f64, t_ef: f64, t_sb: f64, t_bs: f64, t_i: f64) -> Result<Self> {
        let m = Self { alpha, n, t_ef, t_sb, t_bs, t_i };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let times = [self.t_ef, self.t_sb, self.t_bs, self.t_i];
        if !(self.alpha >= 1.0) || !(self.n > 0.0) || times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidParameter(format!("analytic model {self:?}")));
        }
        Ok(())
    }

    /// Phase durations of `arch` (ramps included), idling for `t_i`.
    pub fn for_arch(params: &DeviceParams, arch: &ArchitectureConfig, t_i: f64) -> Result<Self> {
        let tr = arch.pulse.ramp_time;
        let pulse = |g: f64| -> Result<f64> {
            if g > 0.0 {
                Ok(PulseEnvelope::with_area(tr, PI / (2.0 * g))?.duration)
            } else {
                Err(Error::InvalidParameter("zero coupling rate".into()))
            }
        };
        let l = &arch.links;
        let (t_ef, t_sb, t_bs) = match arch.kind {
            ArchitectureKind::Direct => (arch.pulse.t_ef, pulse(params.sideband_rate(l.qubit_cavity))?, 0.0),
            ArchitectureKind::Coupler => (0.0, 0.0, pulse(params.beam_splitter_rate(l.cavity_coupler, l.qubit_coupler))?),
            ArchitectureKind::Cascade => (
                arch.pulse.t_ef,
                pulse(params.sideband_rate(l.buffer_qubit))?,
                pulse(params.beam_splitter_rate(l.cavity_coupler, l.buffer_coupler))?,
            ),
        };
        Self::new(1.0, 0.5, t_ef, t_sb, t_bs, t_i)
    }

    pub fn swap_time(&self) -> f64 {
        self.t_ef + self.t_sb + self.t_bs
    }
}

/// Closed-form error of every step of a memory protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticErrors {
    pub ef: f64,
    pub sideband: f64,
    pub beam_splitter: f64,
    /// One transfer (write or read).
    pub swap: f64,
    pub idle: f64,
    /// Transmon idling for the whole memory time `2·swap_time + t_i`.
    pub transmon_idle: f64,
    /// Write, idle and read.
    pub total: f64,
}

/// e–f rotation error `(7/12)γt + (11/24)γ_φ t`.
pub fn ef_error(params: &DeviceParams, t: f64) -> f64 {
    (7.0 / 12.0 * params.gamma + 11.0 / 24.0 * params.gamma_phi) * t
}

/// Sideband error `(γ + γ_φ) t / 2`.
pub fn sideband_error(params: &DeviceParams, t: f64) -> f64 {
    0.5 * (params.gamma + params.gamma_phi) * t
}

/// Transmon–cavity beam-splitter error `γt/6 + γ_φ t/8`.
pub fn bs_error(params: &DeviceParams, t: f64) -> f64 {
    (params.gamma / 6.0 + params.gamma_phi / 8.0) * t
}

/// Buffer–storage beam-splitter error, limited by the buffer's induced decay.
pub fn cascade_bs_error(params: &DeviceParams, p_bq: Participation, p_bc: Participation, t: f64) -> f64 {
    let c = &params.coupler;
    ((params.gamma + params.gamma_phi) * p_bq.value()
        + (c.gamma + c.gamma_phi) * p_bc.value()
        + c.gamma_phi_e * params.xi1_3w.abs() * p_bc.value())
        * t
        / 6.0
}

/// Idle error `(2Γ↓ + Γ_φ) t / 6` of a qubit with the given rates.
pub fn idle_error(gamma_down: f64, gamma_phi: f64, t: f64) -> f64 {
    (2.0 * gamma_down + gamma_phi) * t / 6.0
}

/// Relaxation and dephasing rates of the storage cavity while idling.
pub fn storage_rates(params: &DeviceParams, arch: &ArchitectureConfig) -> (f64, f64) {
    let p = arch.storage_participation();
    let pv = p.value();
    match arch.kind {
        ArchitectureKind::Direct => (
            params.kappa + params.inverse_purcell(p),
            params.kappa_phi + params.gamma_phi * pv * pv + params.gamma * params.nbar_q,
        ),
        _ => (
            params.kappa + params.coupler_inverse_purcell(p),
            params.kappa_phi + params.coupler.gamma_phi * pv * pv,
        ),
    }
}

pub fn analytic_errors(params: &DeviceParams, arch: &ArchitectureConfig, model: &AnalyticControlModel) -> AnalyticErrors {
    let ef = ef_error(params, model.t_ef);
    let sideband = sideband_error(params, model.t_sb);
    let beam_splitter = match arch.kind {
        ArchitectureKind::Cascade => cascade_bs_error(params, arch.links.buffer_qubit, arch.links.buffer_coupler, model.t_bs),
        _ => bs_error(params, model.t_bs),
    };
    let swap = ef + sideband + beam_splitter;
    let (down, phi) = storage_rates(params, arch);
    let idle = idle_error(down, phi, model.t_i);
    let t_m = 2.0 * model.swap_time() + model.t_i;
    AnalyticErrors {
        ef,
        sideband,
        beam_splitter,
        swap,
        idle,
        transmon_idle: idle_error(params.gamma, params.gamma_phi, t_m),
        total: 2.0 * swap + idle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn beam_splitter_error_at_sixty_ns() {
        let e = bs_error(&DeviceParams::default(), 60e-9);
        assert_relative_eq!(e, 5000.0 * 60e-9 / 6.0 + 2500.0 * 60e-9 / 8.0, max_relative = 1e-14);
        assert!((e - 6.9e-5).abs() < 1e-6);
    }

    #[test]
    fn coupler_idle_at_critical_coupling() {
        let params = DeviceParams::default();
        let p = Participation::new(params.kappa / params.gamma).unwrap();
        let arch = ArchitectureConfig::coupler(p);
        let m = AnalyticControlModel::for_arch(&params, &arch, 1e-3).unwrap();
        let e = analytic_errors(&params, &arch, &m);
        // Γ↓ = 2/s, Γφ = 2/s
        assert_relative_eq!(e.idle, 6.0 * 1e-3 / 6.0, max_relative = 1e-4);
    }

    #[test]
    fn zero_rates_give_zero_errors() {
        let params = DeviceParams::default().without_decoherence();
        let p = Participation::new(0.01).unwrap();
        for arch in [ArchitectureConfig::direct(p), ArchitectureConfig::coupler(p), ArchitectureConfig::cascade(p, p, p)] {
            let m = AnalyticControlModel::for_arch(&params, &arch, 1e-3).unwrap();
            let e = analytic_errors(&params, &arch, &m);
            assert_eq!(e.total, 0.0);
            assert_eq!(e.transmon_idle, 0.0);
        }
    }

    #[test]
    fn model_rejects_bad_inputs() {
        assert!(AnalyticControlModel::new(0.5, 0.5, 0.0, 0.0, 1e-7, 1e-3).is_err());
        assert!(AnalyticControlModel::new(1.0, 0.5, -1.0, 0.0, 1e-7, 1e-3).is_err());
    }
}
