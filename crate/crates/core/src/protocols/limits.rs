use serde::Serialize;

use super::memory::optimize_links;
use crate::dynamics::{ArchitectureConfig, ArchitectureKind, PulseSettings};
use crate::error::{Error, Result};
use crate::fidelity::{analytic_errors, AnalyticControlModel};
use crate::model::{DeviceParams, Links, Participation};
use crate::numeric::find_root;

/// Largest memory time meeting a target error, with the intrinsic cavity
/// lifetime at which the optimal coupling is critical.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum MemoryLimit {
    Attainable {
        t_m_max: f64,
        /// Required intrinsic lifetime `1/κ`.
        lifetime: f64,
        links: Links,
        /// e–f rotation error charged per transfer.
        eps_ef: f64,
    },
    Unattainable {
        /// Smallest error reachable at any memory time.
        min_error: f64,
        eps_ef: f64,
    },
}

impl MemoryLimit {
    pub fn t_m_max(&self) -> Option<f64> {
        match self {
            Self::Attainable { t_m_max, .. } => Some(*t_m_max),
            Self::Unattainable { .. } => None,
        }
    }

    pub fn lifetime(&self) -> Option<f64> {
        match self {
            Self::Attainable { lifetime, .. } => Some(*lifetime),
            Self::Unattainable { .. } => None,
        }
    }
}

/// e–f error per transfer assumed for a cascade at `target`.
pub fn limit_ef_error(target: f64) -> f64 {
    if target <= 1e-3 * (1.0 + 1e-9) {
        0.0
    } else {
        1e-3
    }
}

struct LimitModel<'a> {
    params: &'a DeviceParams,
    arch: ArchitectureConfig,
    dephasing_on: bool,
    eps_ef: f64,
}

impl LimitModel<'_> {
    /// Intrinsic decay equal to the induced decay of the storage cavity.
    fn critical_kappa(&self, arch: &ArchitectureConfig) -> f64 {
        self.params.coupler_inverse_purcell(arch.storage_participation())
    }

    fn error(&self, arch: &ArchitectureConfig, t_m: f64) -> f64 {
        let kphi = if self.dephasing_on { self.params.kappa_phi } else { 0.0 };
        let params = self.params.clone().with_kappa(self.critical_kappa(arch)).with_kappa_phi(kphi);
        let Ok(m) = AnalyticControlModel::for_arch(&params, arch, 0.0) else {
            return f64::INFINITY;
        };
        let t_i = t_m - 2.0 * m.swap_time();
        if t_i < 0.0 {
            return 1.0 - t_i / t_m;
        }
        let e = analytic_errors(&params, arch, &AnalyticControlModel { t_i, ..m });
        let ef = if arch.kind == ArchitectureKind::Cascade { self.eps_ef } else { 0.0 };
        e.total - 2.0 * e.ef + 2.0 * ef
    }

    fn best(&self, t_m: f64) -> Result<(ArchitectureConfig, f64)> {
        optimize_links(&self.arch, &|a| self.error(a, t_m))
    }
}

/// Maximum memory time at error `target` with participations optimized on
/// the closed-form model, square pulses, and critical coupling defining the
/// required cavity lifetime.
pub fn max_memory_time(params: &DeviceParams, kind: ArchitectureKind, target: f64, dephasing_on: bool) -> Result<MemoryLimit> {
    if !(target > 0.0 && target < 0.1) {
        return Err(Error::InvalidParameter(format!("target error {target} outside (0, 0.1)")));
    }
    let p = Participation::max();
    let arch = match kind {
        ArchitectureKind::Coupler => ArchitectureConfig::coupler(p),
        ArchitectureKind::Cascade => ArchitectureConfig::cascade(p, p, p),
        ArchitectureKind::Direct => {
            return Err(Error::WrongArchitecture { expected: "coupler or cascade".into(), found: kind.name().into() })
        }
    }
    .with_pulse(PulseSettings { ramp_time: 0.0, ..PulseSettings::default() });
    let eps_ef = if kind == ArchitectureKind::Cascade { limit_ef_error(target) } else { 0.0 };
    let model = LimitModel { params, arch, dephasing_on, eps_ef };

    // shortest memory time: both transfers at the fastest links
    let t_lo = 2.0 * AnalyticControlModel::for_arch(params, &arch, 0.0)?.swap_time() * (1.0 + 1e-9);
    let e_lo = model.best(t_lo)?.1;
    if e_lo >= target {
        return Ok(MemoryLimit::Unattainable { min_error: e_lo, eps_ef });
    }
    let mut t_hi = t_lo;
    loop {
        t_hi *= 10.0;
        if model.best(t_hi)?.1 > target {
            break;
        }
        if t_hi > 1e9 {
            return Err(Error::Numerical(format!("error stays below {target} beyond 1e9 s")));
        }
    }
    let f = |lt: f64| model.best(lt.exp()).map(|r| r.1 - target).unwrap_or(f64::NAN);
    let lt = find_root(&f, (t_hi / 10.0).ln(), t_hi.ln(), 1e-9)?;
    let t_m_max = lt.exp();
    let (best, _) = model.best(t_m_max)?;
    Ok(MemoryLimit::Attainable { t_m_max, lifetime: 1.0 / model.critical_kappa(&best), links: best.links, eps_ef })
}
