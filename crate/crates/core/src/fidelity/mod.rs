//! Channel fidelities, single-jump perturbation theory, closed-form error
//! estimates and two-qubit concurrence.

mod analytic;
mod jump;

use nalgebra::{Matrix2, Matrix4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{CMatrix, C64};
use crate::solver::{CardinalState, QubitChannel};

pub use analytic::{
    analytic_errors, bs_error, cascade_bs_error, ef_error, idle_error, sideband_error, storage_rates,
    AnalyticControlModel, AnalyticErrors,
};
pub use jump::{first_order_error, single_jump_fidelity, single_jump_term};

/// Bloch-averaged fidelity of a qubit channel against an ideal unitary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityReport {
    pub avg_fidelity: f64,
    pub avg_error: f64,
    pub leakage: f64,
    /// Errors for `|0⟩, |1⟩, |+⟩, |−⟩, |+i⟩, |−i⟩`.
    pub per_state_errors: [f64; 6],
}

/// `(1/6) Σ ⟨ψ|U† ρ_out U|ψ⟩` over the cardinal states, with leakage counted as loss.
pub fn average_fidelity(channel: &QubitChannel, ideal: &CMatrix) -> Result<FidelityReport> {
    if ideal.shape() != (2, 2) {
        return Err(Error::InvalidParameter("ideal unitary must be 2×2".into()));
    }
    let mut per_state = [0.0; 6];
    for (k, s) in CardinalState::ALL.iter().enumerate() {
        let target = ideal * s.ket();
        let rho = QubitChannel::logical_block(channel.output(*s).matrix());
        let f = (target.adjoint() * rho * &target)[(0, 0)].re;
        per_state[k] = (1.0 - f).clamp(0.0, 1.0);
    }
    let avg_error = per_state.iter().sum::<f64>() / 6.0;
    Ok(FidelityReport { avg_fidelity: 1.0 - avg_error, avg_error, leakage: channel.leakage(), per_state_errors: per_state })
}

/// Phase `φ` of the virtual Z rotation `diag(1, e^{iφ})` that maximizes the average fidelity.
pub fn frame_phase(channel: &QubitChannel) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for s in [CardinalState::Plus, CardinalState::Minus, CardinalState::PlusI, CardinalState::MinusI] {
        let c = s.amplitudes()[1] * std::f64::consts::SQRT_2;
        acc += c * channel.output(s).matrix()[(0, 1)];
    }
    if acc.norm() == 0.0 {
        0.0
    } else {
        -acc.arg()
    }
}

pub fn virtual_z(phase: f64) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::from_polar(1.0, phase)]))
}

/// Average fidelity after the optimal virtual Z correction.
pub fn best_frame_fidelity(channel: &QubitChannel) -> Result<FidelityReport> {
    average_fidelity(channel, &virtual_z(frame_phase(channel)))
}

fn paulis() -> [Matrix2<C64>; 3] {
    let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    [Matrix2::new(o, l, l, o), Matrix2::new(o, -i, i, o), Matrix2::new(l, o, o, -l)]
}

/// First-order fidelity change per unit rate of a jump operator acting on a
/// qubit that is otherwise idle: `−¼Tr(L†L) + (1/12)Σ_j Tr(L†σ_j L σ_j)`.
pub fn delta_f(l: &CMatrix) -> Result<f64> {
    if l.shape() != (2, 2) {
        return Err(Error::InvalidParameter(format!("jump operator is {:?}, expected 2×2", l.shape())));
    }
    let l = Matrix2::new(l[(0, 0)], l[(0, 1)], l[(1, 0)], l[(1, 1)]);
    let ld = l.adjoint();
    let mut v = -0.25 * (ld * l).trace().re;
    for s in paulis() {
        v += (ld * s * l * s).trace().re / 12.0;
    }
    Ok(v)
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &CMatrix) -> Result<f64> {
    if rho.shape() != (4, 4) {
        return Err(Error::InvalidParameter(format!("state is {:?}, expected 4×4", rho.shape())));
    }
    let scale = rho.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if (rho - rho.adjoint()).iter().any(|z| z.norm() > 1e-10 * scale) {
        return Err(Error::InvalidState("concurrence of a non-Hermitian matrix".into()));
    }
    // λ_i are the singular values of √ρ (σ_y⊗σ_y) √ρ*
    let herm = Matrix4::from_fn(|i, j| (rho[(i, j)] + rho[(j, i)].conj()) * 0.5);
    let eig = herm.symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|v| C64::new(v.max(0.0).sqrt(), 0.0));
    let root = eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();
    let sy = paulis()[1];
    let yy = sy.kronecker(&sy);
    let mut lam: Vec<f64> = (root * yy * root.conjugate()).singular_values().iter().copied().collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Fidelity `⟨Φ₊|ρ|Φ₊⟩` of a two-qubit state.
pub fn bell_fidelity(rho: &CMatrix) -> f64 {
    let idx = [0, 3];
    idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).map(|(i, j)| rho[(i, j)].re).sum::<f64>() / 2.0
}
