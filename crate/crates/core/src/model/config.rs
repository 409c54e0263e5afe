//! TOML configuration schema.
//!
//! Frequencies are given in Hz and converted to rad/s; decoherence is given
//! as lifetimes in seconds (`inf` disables a channel). Every section and key
//! is optional and falls back to the device defaults; unknown keys are
//! rejected.
//!
//! ```toml
//! [transmon]
//! kerr_hz = 200e6
//! t1 = 200e-6
//! t_phi = 400e-6
//! t_phi_echo = 1e-3
//! nbar = 1e-3
//!
//! [snail]
//! g3_hz = 5e6
//!
//! [cavity]
//! t1 = 1.0
//! t_phi = 0.5
//! nbar = 1e-4
//! loss_factor = 1.0
//!
//! [pumps]
//! xi1_3w = 2.0
//! xi1_4w = 0.1
//! xi2_4w = 0.1
//!
//! [coupler]          # defaults to the transmon values
//! t1 = 200e-6
//!
//! [simulation]
//! transmon_dim = 3
//! cavity_dim = 3
//! buffer_dim = 3
//! ramp_time = 10e-9
//! t_ef = 240e-9
//! rel_tol = 1e-9
//! abs_tol = 1e-12
//!
//! [analytic]
//! alpha = 1.0
//! photon_number = 0.5
//!
//! [qft]
//! gate_time = 40e-9
//! swap_time = 60e-9
//! participation = 0.07
//! swap_error = 1e-4
//! cavity_t1 = 10e-3
//! eps_1q = 8e-4
//! eps_2q = 6e-3
//! ```

use serde::{Deserialize, Serialize};

use super::{angular, CouplerNoise, DeviceParams};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TransmonConfig {
    pub kerr_hz: Option<f64>,
    pub t1: Option<f64>,
    pub t_phi: Option<f64>,
    pub t_phi_echo: Option<f64>,
    pub nbar: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SnailConfig {
    pub g3_hz: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    pub t1: Option<f64>,
    pub t_phi: Option<f64>,
    pub nbar: Option<f64>,
    pub loss_factor: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    pub xi1_3w: Option<f64>,
    pub xi1_4w: Option<f64>,
    pub xi2_4w: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CouplerConfig {
    pub t1: Option<f64>,
    pub t_phi: Option<f64>,
    pub t_phi_echo: Option<f64>,
    pub nbar: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub transmon_dim: Option<usize>,
    pub cavity_dim: Option<usize>,
    pub buffer_dim: Option<usize>,
    pub ramp_time: Option<f64>,
    pub t_ef: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticConfig {
    pub alpha: Option<f64>,
    pub photon_number: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QftConfig {
    pub gate_time: Option<f64>,
    pub swap_time: Option<f64>,
    pub participation: Option<f64>,
    pub swap_error: Option<f64>,
    pub cavity_t1: Option<f64>,
    pub eps_1q: Option<f64>,
    pub eps_2q: Option<f64>,
}

/// Parsed configuration file.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub transmon: TransmonConfig,
    #[serde(default)]
    pub snail: SnailConfig,
    #[serde(default)]
    pub cavity: CavityConfig,
    #[serde(default)]
    pub pumps: PumpConfig,
    #[serde(default)]
    pub coupler: CouplerConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
    #[serde(default)]
    pub analytic: AnalyticConfig,
    #[serde(default)]
    pub qft: QftConfig,
}

fn rate_from_lifetime(name: &str, t: f64) -> Result<f64> {
    if t.is_infinite() && t > 0.0 {
        Ok(0.0)
    } else if t > 0.0 && t.is_finite() {
        Ok(1.0 / t)
    } else {
        Err(Error::Config(format!("{name} = {t} must be a positive lifetime or inf")))
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim().replace('\n', " ")))
    }

    /// Device parameters with defaults filled in, validated.
    pub fn device_params(&self) -> Result<DeviceParams> {
        let mut p = DeviceParams::default();
        let t = &self.transmon;
        if let Some(v) = t.kerr_hz {
            p.kerr = angular(v);
        }
        if let Some(v) = t.t1 {
            p.gamma = rate_from_lifetime("transmon.t1", v)?;
        }
        if let Some(v) = t.t_phi {
            p.gamma_phi = rate_from_lifetime("transmon.t_phi", v)?;
        }
        if let Some(v) = t.t_phi_echo {
            p.gamma_phi_e = rate_from_lifetime("transmon.t_phi_echo", v)?;
        }
        if let Some(v) = t.nbar {
            p.nbar_q = v;
        }
        if let Some(v) = self.snail.g3_hz {
            p.g3 = angular(v);
        }
        let c = &self.cavity;
        if let Some(v) = c.t1 {
            p.kappa = rate_from_lifetime("cavity.t1", v)?;
        }
        if let Some(v) = c.t_phi {
            p.kappa_phi = rate_from_lifetime("cavity.t_phi", v)?;
        }
        if let Some(v) = c.nbar {
            p.nbar_cav = v;
        }
        if let Some(v) = c.loss_factor {
            p.loss_factor = v;
        }
        let pm = &self.pumps;
        p.xi1_3w = pm.xi1_3w.unwrap_or(p.xi1_3w);
        p.xi1_4w = pm.xi1_4w.unwrap_or(p.xi1_4w);
        p.xi2_4w = pm.xi2_4w.unwrap_or(p.xi2_4w);
        let cc = &self.coupler;
        p.coupler = CouplerNoise {
            gamma: match cc.t1 {
                Some(v) => rate_from_lifetime("coupler.t1", v)?,
                None => p.gamma,
            },
            gamma_phi: match cc.t_phi {
                Some(v) => rate_from_lifetime("coupler.t_phi", v)?,
                None => p.gamma_phi,
            },
            gamma_phi_e: match cc.t_phi_echo {
                Some(v) => rate_from_lifetime("coupler.t_phi_echo", v)?,
                None => p.gamma_phi_e,
            },
            nbar: cc.nbar.unwrap_or(p.nbar_q),
        };
        p.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(p)
    }
}
