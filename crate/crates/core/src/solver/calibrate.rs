use super::{evolve_ket, Piecewise, ToleranceConfig};
use crate::dynamics::{ef_area_amplitude, ef_rotation_with, ArchitectureConfig, EfDrive, PhaseGenerator};
use crate::error::{Error, Result};
use crate::hilbert::{CVector, C64};
use crate::model::DeviceParams;
use crate::numeric::minimize_bracketed;

/// Generator tuned to maximize a population transfer.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibratedPulse {
    pub generator: PhaseGenerator,
    pub parameter: f64,
    pub transfer: f64,
}

/// Probability that the decoherence-free evolution takes basis state `from` to `to`.
pub fn transfer_probability(
    gen: &PhaseGenerator,
    from: &[(&str, usize)],
    to: &[(&str, usize)],
    tol: &ToleranceConfig,
) -> Result<f64> {
    let (i, j) = (gen.space.fock_index(from)?, gen.space.fock_index(to)?);
    let mut psi = CVector::zeros(gen.space.total_dim());
    psi[i] = C64::new(1.0, 0.0);
    let pw = Piecewise::schrodinger(gen, tol);
    let out = evolve_ket(&pw, psi, 0.0, gen.duration(), tol)?;
    Ok(out[j].norm_sqr())
}

/// Maximizes the `from → to` transfer over one pulse parameter in `bracket`.
pub fn calibrate_pulse(
    build: &dyn Fn(f64) -> Result<PhaseGenerator>,
    bracket: (f64, f64),
    from: &[(&str, usize)],
    to: &[(&str, usize)],
    tol: &ToleranceConfig,
) -> Result<CalibratedPulse> {
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::Calibration(format!("empty bracket [{lo:e}, {hi:e}]")));
    }
    let miss = |x: f64| match build(x).and_then(|g| transfer_probability(&g, from, to, tol)) {
        Ok(p) => 1.0 - p,
        Err(_) => f64::INFINITY,
    };
    let (x, m) = minimize_bracketed(&miss, lo, hi, 11, 1e-10 * (hi - lo).abs().max(hi.abs()))
        .map_err(|e| Error::Calibration(e.to_string()))?;
    Ok(CalibratedPulse { generator: build(x)?, parameter: x, transfer: 1.0 - m })
}

/// Tunes amplitude and detuning of the e–f rotation by alternating searches.
pub fn calibrate_ef(params: &DeviceParams, arch: &ArchitectureConfig, tol: &ToleranceConfig) -> Result<(EfDrive, f64)> {
    let ideal = params.clone().without_decoherence();
    let from: &[(&str, usize)] = &[(crate::dynamics::TRANSMON, 1)];
    let to: &[(&str, usize)] = &[(crate::dynamics::TRANSMON, 2)];
    let eps0 = ef_area_amplitude(arch)?;
    let span = 10.0 * eps0 * eps0 / params.kerr.max(1.0);
    let mut drive = EfDrive { amplitude: eps0, detuning: 0.0 };
    let mut transfer = 0.0;
    for round in 0..4 {
        let width = 0.1 / (1 << round) as f64;
        let amp = calibrate_pulse(
            &|e| ef_rotation_with(&ideal, arch, e, drive.detuning),
            (drive.amplitude * (1.0 - width), drive.amplitude * (1.0 + width)),
            from,
            to,
            tol,
        )?;
        drive.amplitude = amp.parameter;
        let w = span / (1 << round) as f64;
        let det = calibrate_pulse(
            &|d| ef_rotation_with(&ideal, arch, drive.amplitude, d),
            (drive.detuning - w, drive.detuning + w),
            from,
            to,
            tol,
        )?;
        drive.detuning = det.parameter;
        transfer = det.transfer;
    }
    Ok((drive, transfer))
}
