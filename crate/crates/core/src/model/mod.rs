//! Device parameters and the rates derived from them.
//!
//! Frequencies are stored as angular frequencies (rad/s) and decoherence
//! rates in 1/s. Every coupling link is described by its participation ratio
//! `p = (g/Δ)²`, so bare mode frequencies never appear.

mod config;

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub use config::{
    AnalyticConfig, CavityConfig, Config, CouplerConfig, PumpConfig, QftConfig, SimulationConfig, SnailConfig, TransmonConfig,
};

pub const TWO_PI: f64 = 2.0 * PI;

/// Upper bound on any participation ratio for which the dispersive expansion holds.
pub const MAX_PARTICIPATION: f64 = 0.1;

/// Converts a frequency in Hz (cycles per second) to rad/s.
pub fn angular(hz: f64) -> f64 {
    TWO_PI * hz
}

/// Decoherence of the SNAIL coupler mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplerNoise {
    pub gamma: f64,
    pub gamma_phi: f64,
    pub gamma_phi_e: f64,
    pub nbar: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeviceParams {
    /// Transmon Kerr nonlinearity `K`.
    pub kerr: f64,
    /// SNAIL cubic nonlinearity `g3`.
    pub g3: f64,
    pub gamma: f64,
    pub nbar_q: f64,
    pub gamma_phi: f64,
    /// Echoed transmon dephasing, used for noise at the detuning frequency.
    pub gamma_phi_e: f64,
    pub nbar_cav: f64,
    pub kappa: f64,
    pub kappa_phi: f64,
    pub xi1_3w: f64,
    pub xi1_4w: f64,
    pub xi2_4w: f64,
    /// Dielectric-loss multiplier on qubit-induced cavity decay.
    pub loss_factor: f64,
    pub coupler: CouplerNoise,
}

impl Default for DeviceParams {
    fn default() -> Self {
        let gamma = 1.0 / 200e-6;
        let gamma_phi = 1.0 / 400e-6;
        let gamma_phi_e = 1.0 / 1000e-6;
        let nbar_q = 1e-3;
        Self {
            kerr: angular(200e6),
            g3: angular(5e6),
            gamma,
            nbar_q,
            gamma_phi,
            gamma_phi_e,
            nbar_cav: 1e-4,
            kappa: 1.0,
            kappa_phi: 1.0 / 0.5,
            xi1_3w: 2.0,
            xi1_4w: 0.1,
            xi2_4w: 0.1,
            loss_factor: 1.0,
            coupler: CouplerNoise { gamma, gamma_phi, gamma_phi_e, nbar: nbar_q },
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("kerr", self.kerr),
            ("g3", self.g3),
            ("gamma", self.gamma),
            ("gamma_phi", self.gamma_phi),
            ("gamma_phi_e", self.gamma_phi_e),
            ("kappa", self.kappa),
            ("kappa_phi", self.kappa_phi),
            ("xi1_3w", self.xi1_3w),
            ("xi1_4w", self.xi1_4w),
            ("xi2_4w", self.xi2_4w),
            ("coupler.gamma", self.coupler.gamma),
            ("coupler.gamma_phi", self.coupler.gamma_phi),
            ("coupler.gamma_phi_e", self.coupler.gamma_phi_e),
        ];
        for (name, v) in rates {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        for (name, n) in [("nbar_q", self.nbar_q), ("nbar_cav", self.nbar_cav), ("coupler.nbar", self.coupler.nbar)] {
            if !(0.0..1.0).contains(&n) {
                return Err(Error::InvalidParameter(format!("{name} = {n} outside [0, 1)")));
            }
        }
        if !(self.loss_factor >= 1.0 && self.loss_factor.is_finite()) {
            return Err(Error::InvalidParameter(format!("loss_factor = {} below 1", self.loss_factor)));
        }
        Ok(())
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_kappa_phi(mut self, kappa_phi: f64) -> Self {
        self.kappa_phi = kappa_phi;
        self
    }

    /// Same couplings and pumps with every decoherence rate and occupation zeroed.
    pub fn without_decoherence(mut self) -> Self {
        self.gamma = 0.0;
        self.nbar_q = 0.0;
        self.gamma_phi = 0.0;
        self.gamma_phi_e = 0.0;
        self.nbar_cav = 0.0;
        self.kappa = 0.0;
        self.kappa_phi = 0.0;
        self.coupler = CouplerNoise { gamma: 0.0, gamma_phi: 0.0, gamma_phi_e: 0.0, nbar: 0.0 };
        self
    }

    pub fn is_decoherence_free(&self) -> bool {
        self.gamma == 0.0
            && self.gamma_phi == 0.0
            && self.gamma_phi_e == 0.0
            && self.kappa == 0.0
            && self.kappa_phi == 0.0
            && self.coupler.gamma == 0.0
            && self.coupler.gamma_phi == 0.0
            && self.coupler.gamma_phi_e == 0.0
    }

    /// Sideband rate `g_sb = ½ K ξ₁ √p` of the four-wave |f,0⟩ ↔ |g,1⟩ process.
    pub fn sideband_rate(&self, p: Participation) -> f64 {
        0.5 * self.kerr * self.xi1_4w * p.value().sqrt()
    }

    /// Three-wave beam-splitter rate `6 g3 ξ₁ √(p_a p_b)` through the SNAIL.
    pub fn beam_splitter_rate(&self, p_a: Participation, p_b: Participation) -> f64 {
        6.0 * self.g3 * self.xi1_3w * (p_a.value() * p_b.value()).sqrt()
    }

    /// Dispersive inverse Purcell decay `R γ p` through the transmon.
    pub fn inverse_purcell(&self, p: Participation) -> f64 {
        self.loss_factor * self.gamma * p.value()
    }

    /// Inverse Purcell decay `R γ_c p` through the coupler.
    pub fn coupler_inverse_purcell(&self, p: Participation) -> f64 {
        self.loss_factor * self.coupler.gamma * p.value()
    }

    /// Coupler-induced cavity relaxation `R (γ_c + γ_cφ) p` of the coupler master equation.
    pub fn coupler_induced_decay(&self, p: Participation) -> f64 {
        self.loss_factor * (self.coupler.gamma + self.coupler.gamma_phi) * p.value()
    }
}

/// Participation ratio `(g/Δ)²` of one coupling link.
///
/// Zero is admitted as the decoupled limit.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct Participation(f64);

impl Participation {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=MAX_PARTICIPATION).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "participation {p} outside [0, {MAX_PARTICIPATION}]"
            )));
        }
        Ok(Self(p))
    }

    pub fn max() -> Self {
        Self(MAX_PARTICIPATION)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Participation of every coupling link an architecture may use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Links {
    pub qubit_cavity: Participation,
    pub qubit_coupler: Participation,
    pub cavity_coupler: Participation,
    pub buffer_qubit: Participation,
    pub buffer_coupler: Participation,
}

impl Default for Links {
    fn default() -> Self {
        let p = Participation::max();
        Self { qubit_cavity: p, qubit_coupler: p, cavity_coupler: p, buffer_qubit: p, buffer_coupler: p }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Dispersive,
    Resonant,
}

/// Rates induced on a cavity by hybridization at participation `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateSet {
    pub chi: f64,
    pub chi_prime: f64,
    pub kerr_a: f64,
    pub g_sb: f64,
    pub g_bs: f64,
    pub kappa_gamma: f64,
    pub kappa_gamma_phi: f64,
    pub gamma_delta: f64,
    pub kappa_gamma_coupler: f64,
    pub thermal_jump_dephasing: f64,
}

/// All rates induced at participation `p`; `g_bs` assumes the same `p` on both links.
pub fn derived_rates(params: &DeviceParams, p: Participation, regime: Regime) -> RateSet {
    let pv = p.value();
    let k = params.kerr;
    let kappa_gamma = match regime {
        Regime::Dispersive => params.inverse_purcell(p),
        Regime::Resonant => 0.5 * (params.kappa + params.gamma),
    };
    RateSet {
        chi: 2.0 * k * pv,
        chi_prime: 2.0 * k * pv * pv,
        kerr_a: 0.5 * k * pv * pv,
        g_sb: params.sideband_rate(p),
        g_bs: params.beam_splitter_rate(p, p),
        kappa_gamma,
        kappa_gamma_phi: params.gamma_phi * pv * pv,
        gamma_delta: params.gamma_phi_e * pv,
        kappa_gamma_coupler: params.coupler_inverse_purcell(p),
        thermal_jump_dephasing: params.gamma * params.nbar_q,
    }
}

/// Three- and four-wave mixing rates for cavities `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixerRates {
    pub g_sms_3w: f64,
    pub g_sms_4w: f64,
    pub g_bs_3w: f64,
    pub g_bs_4w: f64,
    pub g_tms_3w: f64,
    pub g_tms_4w: f64,
    /// `3 g3 ξ₁ / γ`, which must be ≫ 1 for efficient squeezing.
    pub sms_efficiency: f64,
    /// `√(κ_a/κ_b)` for critically coupled modes, which `sms_efficiency`
    /// must exceed for efficient two-mode operations.
    pub bs_efficiency_condition: f64,
}

impl MixerRates {
    pub fn bs_efficiency_margin(&self) -> f64 {
        self.sms_efficiency / self.bs_efficiency_condition
    }
}

pub fn mixing_rates(params: &DeviceParams, p_a: Participation, p_b: Participation) -> MixerRates {
    let (pa, pb) = (p_a.value(), p_b.value());
    let g3w = 6.0 * params.g3 * params.xi1_3w * (pa * pb).sqrt();
    let g4w = 2.0 * params.kerr * params.xi1_4w * params.xi2_4w * (pa * pb).sqrt();
    let ratio = if pa > 0.0 && pb > 0.0 { (pa.max(pb) / pa.min(pb)).sqrt() } else { f64::INFINITY };
    let sms_efficiency =
        if params.gamma > 0.0 { 3.0 * params.g3 * params.xi1_3w / params.gamma } else { f64::INFINITY };
    MixerRates {
        g_sms_3w: 3.0 * params.g3 * params.xi1_3w * pa,
        g_sms_4w: params.kerr * params.xi1_4w * params.xi2_4w * pa,
        g_bs_3w: g3w,
        g_bs_4w: g4w,
        g_tms_3w: g3w,
        g_tms_4w: g4w,
        sms_efficiency,
        bs_efficiency_condition: ratio,
    }
}

/// Kerr nonlinearity `K = −12 g4` of a quartic term `g4 (q + q†)⁴`.
pub fn kerr_from_quartic(g4: f64) -> f64 {
    -12.0 * g4
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(v: f64) -> Participation {
        Participation::new(v).unwrap()
    }

    #[test]
    fn table_defaults() {
        let d = DeviceParams::default();
        d.validate().unwrap();
        assert_relative_eq!(d.kerr / TWO_PI, 200e6, max_relative = 1e-14);
        assert_relative_eq!(d.gamma, 5000.0);
        assert_relative_eq!(d.gamma_phi, 2500.0);
        assert_relative_eq!(d.gamma_phi_e, 1000.0);
        assert_relative_eq!(d.kappa_phi, 2.0);
        assert_eq!(d.coupler.gamma, d.gamma);
        assert_eq!(d.coupler.nbar, d.nbar_q);
    }

    #[test]
    fn dispersive_rates_at_max_participation() {
        let r = derived_rates(&DeviceParams::default(), p(0.1), Regime::Dispersive);
        assert_relative_eq!(r.chi / TWO_PI, 40e6, max_relative = 1e-12);
        assert_relative_eq!(r.chi_prime / TWO_PI, 4e6, max_relative = 1e-12);
        assert_relative_eq!(r.kerr_a / TWO_PI, 1e6, max_relative = 1e-12);
        assert_relative_eq!(r.g_bs / TWO_PI, 6e6, max_relative = 1e-12);
    }

    #[test]
    fn sideband_rate_and_time() {
        let d = DeviceParams::default();
        let g = d.sideband_rate(p(0.01));
        assert_relative_eq!(g / TWO_PI, 1e6, max_relative = 1e-12);
        assert_relative_eq!(PI / (2.0 * g), 250e-9, max_relative = 1e-12);
    }

    #[test]
    fn loss_factor_scales_purcell() {
        let mut d = DeviceParams::default();
        assert_relative_eq!(derived_rates(&d, p(1e-3), Regime::Dispersive).kappa_gamma, 5.0, max_relative = 1e-12);
        d.loss_factor = 1.6;
        assert_relative_eq!(derived_rates(&d, p(1e-3), Regime::Dispersive).kappa_gamma, 8.0, max_relative = 1e-12);
    }

    #[test]
    fn decoupled_limit() {
        let d = DeviceParams::default();
        let r = derived_rates(&d, p(0.0), Regime::Dispersive);
        assert_eq!([r.chi, r.chi_prime, r.kerr_a, r.g_sb, r.g_bs, r.kappa_gamma, r.kappa_gamma_phi, r.gamma_delta], [0.0; 8]);
        let res = derived_rates(&d, p(0.0), Regime::Resonant);
        assert_relative_eq!(res.kappa_gamma, 0.5 * (d.kappa + d.gamma));
    }

    #[test]
    fn mixing_examples() {
        let d = DeviceParams::default();
        let m = mixing_rates(&d, p(0.1), p(0.1));
        assert_relative_eq!(m.g_bs_3w / TWO_PI, 6e6, max_relative = 1e-12);
        assert_relative_eq!(m.sms_efficiency, 3.0 * TWO_PI * 5e6 * 2.0 / 5000.0, max_relative = 1e-12);
        assert!((m.sms_efficiency - 3.77e4).abs() < 0.01e4);
        let mut off = d;
        off.xi1_3w = 0.0;
        off.xi1_4w = 0.0;
        let z = mixing_rates(&off, p(0.1), p(0.05));
        assert_eq!([z.g_sms_3w, z.g_sms_4w, z.g_bs_3w, z.g_bs_4w, z.g_tms_3w, z.g_tms_4w], [0.0; 6]);
    }

    #[test]
    fn quartic_inversion() {
        assert_eq!(kerr_from_quartic(0.0), 0.0);
        assert_relative_eq!(kerr_from_quartic(angular(-200e6 / 12.0)) / TWO_PI, 200e6, max_relative = 1e-12);
        assert!(kerr_from_quartic(1.0) < 0.0);
    }

    #[test]
    fn participation_bounds() {
        assert!(Participation::new(0.1).is_ok());
        assert!(Participation::new(0.100001).is_err());
        assert!(Participation::new(-1e-9).is_err());
        assert!(Participation::new(f64::NAN).is_err());
    }
}
