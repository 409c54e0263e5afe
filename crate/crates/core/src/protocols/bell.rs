use serde::Serialize;

use super::memory::memory_channel;
use crate::dynamics::{transmon_idle_generator, ArchitectureConfig, Phase};
use crate::error::{Error, Result};
use crate::fidelity::{bell_fidelity, concurrence, frame_phase, virtual_z};
use crate::hilbert::{CMatrix, HilbertSpace, C64};
use crate::model::DeviceParams;
use crate::solver::{propagate_channel, LogicalEncoding, QubitChannel, ToleranceConfig};

/// Which halves of the Bell pair are stored in cavity memories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Swapped {
    None,
    One,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BellResult {
    pub t_m: f64,
    pub fidelity: f64,
    pub concurrence: f64,
}

/// Qubit channel restricted to the logical levels, in the corrected frame.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalMap {
    /// Images of `|0⟩⟨0|, |0⟩⟨1|, |1⟩⟨0|, |1⟩⟨1|`.
    pub basis: [CMatrix; 4],
}

impl LogicalMap {
    /// Logical part of `channel` with the optimal virtual Z undone.
    pub fn from_channel(channel: &QubitChannel) -> Self {
        let z = virtual_z(frame_phase(channel));
        let basis = [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(i, j)| z.adjoint() * channel.logical_basis(i, j) * &z);
        Self { basis }
    }

    pub fn identity() -> Self {
        Self {
            basis: [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(i, j)| {
                let mut m = CMatrix::zeros(2, 2);
                m[(i, j)] = C64::new(1.0, 0.0);
                m
            }),
        }
    }
}

/// `(A ⊗ B)(ρ)` for a two-qubit `ρ` with qubit A as the high index bit.
pub fn apply_pair(a: &LogicalMap, b: &LogicalMap, rho: &CMatrix) -> Result<CMatrix> {
    if rho.shape() != (4, 4) {
        return Err(Error::InvalidParameter(format!("state is {:?}, expected 4×4", rho.shape())));
    }
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let c = rho[(2 * i + j, 2 * k + l)];
                    if c != C64::new(0.0, 0.0) {
                        out += a.basis[2 * i + k].kronecker(&b.basis[2 * j + l]) * c;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `|Φ₊⟩⟨Φ₊|`.
pub fn phi_plus() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = C64::new(0.5, 0.0);
    }
    m
}

/// Logical map of one write–idle–read memory of total time `t_m`.
pub fn memory_map(params: &DeviceParams, arch: &ArchitectureConfig, t_m: f64, tol: &ToleranceConfig) -> Result<LogicalMap> {
    Ok(LogicalMap::from_channel(&memory_channel(params, arch, t_m, tol)?))
}

/// Logical map of a bare transmon idling for `t_m`.
pub fn transmon_map(params: &DeviceParams, dim: usize, t_m: f64, tol: &ToleranceConfig) -> Result<LogicalMap> {
    let gen = transmon_idle_generator(params, dim, t_m)?;
    let space = HilbertSpace::new([(crate::dynamics::TRANSMON, dim)])?;
    let ch = propagate_channel(&space, &[Phase::single(gen)], LogicalEncoding::transmon(), LogicalEncoding::transmon(), tol)?;
    Ok(LogicalMap::from_channel(&ch))
}

/// Fidelity and concurrence of `Φ₊` after each half is stored for `t_m`,
/// either in a memory or idling in its transmon.
pub fn bell_protocol(
    params: &DeviceParams,
    arch: &ArchitectureConfig,
    t_m: f64,
    swapped: Swapped,
    tol: &ToleranceConfig,
) -> Result<BellResult> {
    let dim = arch.truncations.transmon;
    let (a, b) = match swapped {
        Swapped::None => {
            let m = transmon_map(params, dim, t_m, tol)?;
            (m.clone(), m)
        }
        Swapped::One => (memory_map(params, arch, t_m, tol)?, transmon_map(params, dim, t_m, tol)?),
        Swapped::Both => {
            let m = memory_map(params, arch, t_m, tol)?;
            (m.clone(), m)
        }
    };
    let rho = apply_pair(&a, &b, &phi_plus())?;
    let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    Ok(BellResult { t_m, fidelity: bell_fidelity(&herm), concurrence: concurrence(&herm)? })
}
