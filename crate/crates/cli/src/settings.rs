use std::path::Path;

use cavmem_core::dynamics::{ArchitectureConfig, ArchitectureKind, PulseSettings, Truncations};
use cavmem_core::model::{Config, DeviceParams, Participation};
use cavmem_core::protocols::QftSettings;
use cavmem_core::solver::ToleranceConfig;
use cavmem_core::{Error, Result};
use serde::Serialize;

/// Configuration with every default resolved.
#[derive(Clone, Debug, Serialize)]
pub struct Settings {
    pub device: DeviceParams,
    pub truncations: Truncations,
    pub pulse: PulseSettings,
    pub tolerance: ToleranceConfig,
    pub alpha: f64,
    pub photon_number: f64,
    pub qft: QftSettings,
    pub fast: bool,
    pub jobs: usize,
}

impl Settings {
    pub fn load(path: Option<&Path>, fast: bool, jobs: usize) -> Result<Self> {
        let config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
                Config::from_toml(&text)?
            }
            None => Config::default(),
        };
        Self::from_config(&config, fast, jobs)
    }

    pub fn from_config(config: &Config, fast: bool, jobs: usize) -> Result<Self> {
        let device = config.device_params()?;
        let s = &config.simulation;
        let d = Truncations::default();
        let truncations = Truncations {
            transmon: s.transmon_dim.unwrap_or(d.transmon),
            cavity: s.cavity_dim.unwrap_or(d.cavity),
            buffer: s.buffer_dim.unwrap_or(d.buffer),
        };
        if truncations.transmon < 3 || truncations.cavity < 2 || truncations.buffer < 2 {
            return Err(Error::Config(format!("truncations {truncations:?} below transmon 3, cavities 2")));
        }
        let dp = PulseSettings::default();
        let pulse = PulseSettings {
            ramp_time: s.ramp_time.unwrap_or(dp.ramp_time),
            t_ef: s.t_ef.unwrap_or(dp.t_ef),
            ef_drive: None,
        };
        if !(pulse.ramp_time >= 0.0 && pulse.t_ef > 2.0 * pulse.ramp_time && pulse.t_ef.is_finite()) {
            return Err(Error::Config(format!("pulse timing {pulse:?}")));
        }
        let dt = ToleranceConfig::default();
        let tolerance = ToleranceConfig {
            rel_tol: s.rel_tol.unwrap_or(dt.rel_tol),
            abs_tol: s.abs_tol.unwrap_or(dt.abs_tol),
            ..dt
        };
        tolerance.validate().map_err(|e| Error::Config(e.to_string()))?;
        let alpha = config.analytic.alpha.unwrap_or(1.0);
        let photon_number = config.analytic.photon_number.unwrap_or(0.5);
        if !(alpha >= 1.0 && photon_number > 0.0) {
            return Err(Error::Config(format!("analytic alpha = {alpha}, photon_number = {photon_number}")));
        }
        let qft = QftSettings::from_config(&config.qft, Some(pulse.ramp_time));
        qft.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(Self { device, truncations, pulse, tolerance, alpha, photon_number, qft, fast, jobs })
    }

    /// Architecture with the configured truncations and pulses; buffers of a
    /// cascade sit at the largest participation.
    pub fn arch(&self, kind: ArchitectureKind, p: Participation) -> ArchitectureConfig {
        let m = Participation::max();
        match kind {
            ArchitectureKind::Direct => ArchitectureConfig::direct(p),
            ArchitectureKind::Coupler => ArchitectureConfig::coupler(p),
            ArchitectureKind::Cascade => ArchitectureConfig::cascade(p, m, m),
        }
        .with_truncations(self.truncations)
        .with_pulse(self.pulse)
    }
}
