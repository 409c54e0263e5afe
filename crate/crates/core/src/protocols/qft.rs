use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::{PulseEnvelope, PulseSettings};
use crate::error::{Error, Result};
use crate::model::{DeviceParams, Participation, QftConfig, MAX_PARTICIPATION};
use crate::numeric::minimize_bracketed;

/// Inputs of the QFT idling budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QftSettings {
    pub gate_time: f64,
    /// Transfer time at the reference participation.
    pub swap_time: f64,
    /// Reference storage participation.
    pub participation: f64,
    /// Transfer error at the reference participation.
    pub swap_error: f64,
    /// Intrinsic storage lifetime `1/κ`.
    pub cavity_t1: f64,
    pub eps_1q: f64,
    pub eps_2q: f64,
    /// Ramp length used when the transfer time is re-derived per qubit.
    pub ramp_time: f64,
}

impl Default for QftSettings {
    fn default() -> Self {
        Self {
            gate_time: 40e-9,
            swap_time: 60e-9,
            participation: 0.07,
            swap_error: 1e-4,
            cavity_t1: 10e-3,
            eps_1q: 8e-4,
            eps_2q: 6e-3,
            ramp_time: PulseSettings::default().ramp_time,
        }
    }
}

impl QftSettings {
    pub fn from_config(c: &QftConfig, ramp_time: Option<f64>) -> Self {
        let d = Self::default();
        Self {
            gate_time: c.gate_time.unwrap_or(d.gate_time),
            swap_time: c.swap_time.unwrap_or(d.swap_time),
            participation: c.participation.unwrap_or(d.participation),
            swap_error: c.swap_error.unwrap_or(d.swap_error),
            cavity_t1: c.cavity_t1.unwrap_or(d.cavity_t1),
            eps_1q: c.eps_1q.unwrap_or(d.eps_1q),
            eps_2q: c.eps_2q.unwrap_or(d.eps_2q),
            ramp_time: ramp_time.unwrap_or(d.ramp_time),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [self.gate_time, self.swap_time, self.cavity_t1];
        let unit = [self.swap_error, self.eps_1q, self.eps_2q];
        if pos.iter().any(|v| !(*v > 0.0 && v.is_finite()))
            || unit.iter().any(|v| !(0.0..1.0).contains(v))
            || !(self.ramp_time >= 0.0)
        {
            return Err(Error::InvalidParameter(format!("QFT settings {self:?}")));
        }
        Participation::new(self.participation)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QftQubit {
    pub j: usize,
    /// Idle time before (and again after) the qubit is used.
    pub t_j: f64,
    pub eps_tmon: f64,
    pub eps_mem: f64,
    pub participation: f64,
    pub t_bs: f64,
    pub eps_bs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QftBudget {
    pub k: usize,
    pub t_g: f64,
    pub qubits: Vec<QftQubit>,
    /// Cumulative memory idling error.
    pub eps_m: f64,
    /// Cumulative transmon idling error.
    pub eps_m_tmon: f64,
    /// Cumulative gate error.
    pub eps_q: f64,
}

/// Total storage decoherence `2(κ + κ_γ) + κ_φ + κ_γφ` through the coupler.
pub fn kappa_total(params: &DeviceParams, p: Participation) -> f64 {
    2.0 * (params.kappa + params.coupler_inverse_purcell(p)) + params.kappa_phi + params.coupler.gamma_phi * p.value().powi(2)
}

/// Transmon idle error of qubit `j`, `(2j − 3)(2γ + γ_φ) t_g / 3`.
pub fn transmon_qubit_error(params: &DeviceParams, j: usize, t_g: f64) -> f64 {
    (2 * j - 3) as f64 * (2.0 * params.gamma + params.gamma_phi) * t_g / 3.0
}

/// Memory error of qubit `j`, `4ε_BS + κ_tot (t_j − 2t_BS) / 3`.
pub fn memory_qubit_error(kappa_tot: f64, eps_bs: f64, t_j: f64, t_bs: f64) -> f64 {
    4.0 * eps_bs + kappa_tot * (t_j - 2.0 * t_bs) / 3.0
}

/// Cumulative gate error `k ε_1q + k(k − 1) ε_2q`.
pub fn gate_error(k: usize, eps_1q: f64, eps_2q: f64) -> f64 {
    let k = k as f64;
    k * eps_1q + k * (k - 1.0) * eps_2q
}

/// Closed form `k(k − 2)(2γ + γ_φ) t_g / 3` of the cumulative transmon error.
pub fn cumulative_transmon_error(params: &DeviceParams, k: usize, t_g: f64) -> f64 {
    let k = k as f64;
    k * (k - 2.0) * (2.0 * params.gamma + params.gamma_phi) * t_g / 3.0
}

/// Closed form `4(k − 2)ε_BS + (k − 2)κ_tot(k t_g − 2t_BS)/3` of the cumulative memory error.
pub fn cumulative_memory_error(kappa_tot: f64, eps_bs: f64, k: usize, t_g: f64, t_bs: f64) -> f64 {
    let k = k as f64;
    4.0 * (k - 2.0) * eps_bs + (k - 2.0) * kappa_tot * (k * t_g - 2.0 * t_bs) / 3.0
}

/// Transfer time and error at storage participation `p`: the time follows
/// the beam-splitter rate with ramps, the error scales with the time from
/// the reference point.
fn transfer_at(params: &DeviceParams, s: &QftSettings, p: Participation) -> Result<(f64, f64)> {
    let g = params.beam_splitter_rate(p, Participation::max());
    if g <= 0.0 {
        return Err(Error::InvalidParameter("beam-splitter rate is zero".into()));
    }
    let t = PulseEnvelope::with_area(s.ramp_time, PI / (2.0 * g))?.duration;
    let t_ref = PulseEnvelope::with_area(
        s.ramp_time,
        PI / (2.0 * params.beam_splitter_rate(Participation::new(s.participation)?, Participation::max())),
    )?
    .duration;
    Ok((t, s.swap_error * t / t_ref))
}

/// Idling budget of a QFT on `k` transmons; qubits 3..=k are parked in
/// cavity memories in the memory variant.
pub fn qft_budget(params: &DeviceParams, settings: &QftSettings, k: usize, per_qubit_optimize: bool) -> Result<QftBudget> {
    settings.validate()?;
    if k < 3 {
        return Err(Error::InvalidParameter(format!("QFT needs k ≥ 3 qubits, got {k}")));
    }
    let t_g = settings.gate_time;
    if settings.swap_time > 1.5 * t_g {
        return Err(Error::Infeasible(format!(
            "transfer time {:e} s exceeds the idle window of qubit 3 ({:e} s)",
            settings.swap_time,
            1.5 * t_g
        )));
    }
    let params = params.clone().with_kappa(1.0 / settings.cavity_t1);
    let p0 = Participation::new(settings.participation)?;
    let mut qubits = Vec::with_capacity(k - 2);
    for j in 3..=k {
        let t_j = (2 * j - 3) as f64 * t_g;
        let (p, t_bs, eps_bs) = if per_qubit_optimize {
            let err = |lp: f64| -> f64 {
                let Ok(p) = Participation::new(lp.exp().min(MAX_PARTICIPATION)) else { return f64::INFINITY };
                match transfer_at(&params, settings, p) {
                    Ok((t, e)) if 2.0 * t <= t_j => memory_qubit_error(kappa_total(&params, p), e, t_j, t),
                    Ok((t, _)) => 1.0 + (2.0 * t - t_j) / t_j,
                    Err(_) => f64::INFINITY,
                }
            };
            let (lp, _) = minimize_bracketed(&err, 1e-8f64.ln(), MAX_PARTICIPATION.ln(), 41, 1e-8)?;
            let p = Participation::new(lp.exp().min(MAX_PARTICIPATION))?;
            let (t, e) = transfer_at(&params, settings, p)?;
            if 2.0 * t > t_j {
                return Err(Error::Infeasible(format!("no participation fits qubit {j}")));
            }
            (p, t, e)
        } else {
            (p0, settings.swap_time, settings.swap_error)
        };
        qubits.push(QftQubit {
            j,
            t_j,
            eps_tmon: transmon_qubit_error(&params, j, t_g),
            eps_mem: memory_qubit_error(kappa_total(&params, p), eps_bs, t_j, t_bs),
            participation: p.value(),
            t_bs,
            eps_bs,
        });
    }
    Ok(QftBudget {
        k,
        t_g,
        eps_m: qubits.iter().map(|q| q.eps_mem).sum(),
        eps_m_tmon: qubits.iter().map(|q| q.eps_tmon).sum(),
        eps_q: gate_error(k, settings.eps_1q, settings.eps_2q),
        qubits,
    })
}

/// Largest `k` with cumulative error below `threshold` for each variant:
/// `(memory, transmon)`.
pub fn qft_thresholds(params: &DeviceParams, settings: &QftSettings, threshold: f64, k_max: usize) -> Result<(usize, usize)> {
    let b = qft_budget(params, settings, k_max, false)?;
    let last_below = |f: &dyn Fn(&QftQubit) -> f64| {
        let mut acc = 0.0;
        let mut k = 2;
        for q in &b.qubits {
            acc += f(q);
            if acc >= threshold {
                break;
            }
            k = q.j;
        }
        k
    };
    Ok((last_below(&|q| q.eps_mem), last_below(&|q| q.eps_tmon)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cumulative_sums_match_closed_forms() {
        let params = DeviceParams::default();
        let s = QftSettings::default();
        let b = qft_budget(&params, &s, 12, false).unwrap();
        let kt = kappa_total(&params.clone().with_kappa(1.0 / s.cavity_t1), Participation::new(0.07).unwrap());
        assert_relative_eq!(b.eps_m, cumulative_memory_error(kt, s.swap_error, 12, s.gate_time, s.swap_time), max_relative = 1e-12);
        assert_relative_eq!(b.eps_m_tmon, cumulative_transmon_error(&params, 12, s.gate_time), max_relative = 1e-12);
    }

    #[test]
    fn gate_budget_is_quadratic() {
        for k in 3..30 {
            let kf = k as f64;
            assert_relative_eq!(gate_error(k, 8e-4, 6e-3), 6e-3 * kf * kf - 5.2e-3 * kf, max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_slow_transfer() {
        let s = QftSettings { swap_time: 61e-9, ..QftSettings::default() };
        assert!(matches!(qft_budget(&DeviceParams::default(), &s, 5, false), Err(Error::Infeasible(_))));
    }

    #[test]
    fn optimized_never_worse() {
        let params = DeviceParams::default();
        let s = QftSettings::default();
        let fixed = qft_budget(&params, &s, 15, false).unwrap();
        let opt = qft_budget(&params, &s, 15, true).unwrap();
        for (a, b) in fixed.qubits.iter().zip(&opt.qubits) {
            assert!(b.eps_mem <= a.eps_mem * 1.02, "j = {}: {} vs {}", a.j, b.eps_mem, a.eps_mem);
        }
    }
}
