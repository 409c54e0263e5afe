//! End-to-end memory protocols: write, idle and read channels, participation
//! optimization, memory-time limits, Bell-pair storage and the QFT idling
//! budget.

mod bell;
mod limits;
mod memory;
mod qft;

use crate::fidelity::AnalyticControlModel;

pub use bell::{apply_pair, bell_protocol, memory_map, phi_plus, transmon_map, BellResult, LogicalMap, Swapped};
pub use limits::{limit_ef_error, max_memory_time, MemoryLimit};
pub use memory::{
    analytic_memory, analytic_objective, calibrated, critical_participation, idle_time, memory_channel, memory_error,
    optimize_links, optimize_participation, optimize_participation_analytic, run_idle, run_memory, run_swap,
    simulate_memory, transmon_idle_error, IdleResult, MemoryResult, MemorySpec, ParticipationMode, SwapResult, MIN_PARTICIPATION,
};
pub use qft::{
    cumulative_memory_error, cumulative_transmon_error, gate_error, kappa_total, memory_qubit_error, qft_budget,
    qft_thresholds, transmon_qubit_error, QftBudget, QftQubit, QftSettings,
};

/// Dispersive coupling that balances control and dressed idling errors,
/// `√(2αK / (n t_i))`.
pub fn chi_opt(model: &AnalyticControlModel, kerr: f64) -> f64 {
    (2.0 * model.alpha * kerr / (model.n * model.t_i)).sqrt()
}

/// Memory error of a dispersive memory at coupling `chi`:
/// `αγ_tot/χ + κ_tot n t_i + γ̄_tot χ n t_i / (2K)`.
pub fn dispersive_memory_error(model: &AnalyticControlModel, gamma_tot: f64, gamma_bar: f64, kappa_tot: f64, chi: f64, kerr: f64) -> f64 {
    let nt = model.n * model.t_i;
    model.alpha * gamma_tot / chi + kappa_tot * nt + gamma_bar * chi * nt / (2.0 * kerr)
}

/// Memory error at the optimal coupling, `γ_tot √(2α n t_i / K) + κ_tot n t_i`.
pub fn optimal_memory_error(model: &AnalyticControlModel, gamma_tot: f64, kappa_tot: f64, kerr: f64) -> f64 {
    let nt = model.n * model.t_i;
    gamma_tot * (2.0 * model.alpha * nt / kerr).sqrt() + kappa_tot * nt
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn model(alpha: f64, t_i: f64) -> AnalyticControlModel {
        AnalyticControlModel::new(alpha, 0.5, 0.0, 0.0, 0.0, t_i).unwrap()
    }

    #[test]
    fn chi_opt_reference_value() {
        let k = 2.0 * std::f64::consts::PI * 2e8;
        assert_relative_eq!(chi_opt(&model(1.0, 1e-3), k), 2_241_996.486_559, max_relative = 1e-12);
    }

    #[test]
    fn optimum_balances_the_coupling_dependent_terms() {
        let k = 1.2566e9;
        let m = model(2.0, 3e-4);
        let c = chi_opt(&m, k);
        let e = dispersive_memory_error(&m, 7500.0, 7500.0, 3.0, c, k);
        assert_relative_eq!(e, optimal_memory_error(&m, 7500.0, 3.0, k), max_relative = 1e-12);
        for f in [0.5, 0.9, 1.1, 2.0] {
            assert!(dispersive_memory_error(&m, 7500.0, 7500.0, 3.0, c * f, k) > e);
        }
    }
}
