//! Time evolution of phase generators.
//!
//! Flat envelope segments are propagated with the exact exponential of the
//! Liouvillian; ramps use adaptive Dormand–Prince 5(4) steps bounded by the
//! fastest coupling of the generator.

mod calibrate;
mod channel;

use serde::Serialize;

use crate::dynamics::{Phase, PhaseGenerator, PulseEnvelope};
use crate::error::{Error, Result};
use crate::hilbert::{CMatrix, CVector, DensityMatrix, Embedding, HilbertSpace, C64};

pub use calibrate::{calibrate_ef, calibrate_pulse, transfer_probability, CalibratedPulse};
pub use channel::{propagate_channel, CardinalState, LogicalEncoding, QubitChannel};

/// Integrator tolerances; `max_step` further caps the step size (s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ToleranceConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: Option<f64>,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-12, max_step: None }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_step.map_or(true, |h| h > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("tolerances {self:?}")))
        }
    }
}

/// Linear generator `A(t) = M₀ + s(t) M₁ + s(t)² M₂` driving `dX/dt = A(t) X`.
pub(crate) struct Piecewise {
    m0: CMatrix,
    m1: CMatrix,
    m2: Option<CMatrix>,
    envelope: PulseEnvelope,
    max_step: f64,
}

const MAX_STEPS: usize = 50_000_000;

impl Piecewise {
    fn step_bound(gen: &PhaseGenerator, tol: &ToleranceConfig) -> f64 {
        let c = gen.max_coupling();
        let bound = if c > 0.0 { 1.0 / (20.0 * c) } else { f64::INFINITY };
        tol.max_step.map_or(bound, |h| h.min(bound))
    }

    pub(crate) fn liouvillian(gen: &PhaseGenerator, tol: &ToleranceConfig) -> Result<Self> {
        let (l0, ld, lp) = gen.liouvillian_parts()?;
        let m2 = if gen.pump_terms.is_empty() { None } else { Some(lp.into_matrix()) };
        Ok(Self {
            m0: l0.into_matrix(),
            m1: ld.into_matrix(),
            m2,
            envelope: gen.envelope,
            max_step: Self::step_bound(gen, tol),
        })
    }

    /// Schrödinger evolution `dψ/dt = −i H(t) ψ`, ignoring dissipators.
    pub(crate) fn schrodinger(gen: &PhaseGenerator, tol: &ToleranceConfig) -> Self {
        let mi = C64::new(0.0, -1.0);
        Self {
            m0: gen.h_static.matrix() * mi,
            m1: gen.h_drive.matrix() * mi,
            m2: None,
            envelope: gen.envelope,
            max_step: Self::step_bound(gen, tol),
        }
    }

    /// Schrödinger evolution on a full space from lifted Hamiltonians.
    pub(crate) fn from_hamiltonians(h_static: &CMatrix, h_drive: &CMatrix, envelope: PulseEnvelope, max_step: f64) -> Self {
        let mi = C64::new(0.0, -1.0);
        Self { m0: h_static * mi, m1: h_drive * mi, m2: None, envelope, max_step }
    }

    pub(crate) fn step_limit(gen: &PhaseGenerator, tol: &ToleranceConfig) -> f64 {
        Self::step_bound(gen, tol)
    }

    fn at(&self, s: f64) -> CMatrix {
        let mut a = &self.m0 + &self.m1 * C64::new(s, 0.0);
        if let Some(m2) = &self.m2 {
            a += m2 * C64::new(s * s, 0.0);
        }
        a
    }

    fn at_time(&self, t: f64) -> CMatrix {
        self.at(self.envelope.value(t))
    }

    /// Evolves `x` from `t0` to `t1`; `force_rk` integrates flat segments too.
    pub(crate) fn evolve(&self, mut x: CMatrix, t0: f64, t1: f64, tol: &ToleranceConfig, force_rk: bool) -> Result<CMatrix> {
        for seg in self.envelope.segments() {
            let (a, b) = (seg.start.max(t0), seg.end.min(t1));
            if b <= a {
                continue;
            }
            x = match seg.flat {
                Some(s) if !force_rk => {
                    let e = (self.at(s) * C64::new(b - a, 0.0)).exp();
                    if e.iter().any(|z| !z.is_finite()) {
                        return Err(Error::Numerical("matrix exponential overflowed".into()));
                    }
                    e * x
                }
                _ => self.dopri(x, a, b, tol)?,
            };
        }
        Ok(x)
    }

    fn dopri(&self, mut x: CMatrix, t0: f64, t1: f64, tol: &ToleranceConfig) -> Result<CMatrix> {
        const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
        const A: [[f64; 6]; 7] = [
            [0.0; 6],
            [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
            [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
            [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
            [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
            [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
        ];
        const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
        const E: [f64; 7] = [
            71.0 / 57600.0,
            0.0,
            -71.0 / 16695.0,
            71.0 / 1920.0,
            -17253.0 / 339200.0,
            22.0 / 525.0,
            -1.0 / 40.0,
        ];
        let span = t1 - t0;
        let mut t = t0;
        let mut h = self.max_step.min(span);
        let mut steps = 0;
        while t < t1 {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Numerical("integrator exceeded step budget".into()));
            }
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }
            let mut k: Vec<CMatrix> = Vec::with_capacity(7);
            for i in 0..7 {
                let mut xi = x.clone();
                for (j, kj) in k.iter().enumerate() {
                    if A[i][j] != 0.0 {
                        xi += kj * C64::new(h * A[i][j], 0.0);
                    }
                }
                k.push(self.at_time(t + C[i] * h) * xi);
            }
            let mut x_new = x.clone();
            let mut err = CMatrix::zeros(x.nrows(), x.ncols());
            for i in 0..7 {
                if B[i] != 0.0 {
                    x_new += &k[i] * C64::new(h * B[i], 0.0);
                }
                if E[i] != 0.0 {
                    err += &k[i] * C64::new(h * E[i], 0.0);
                }
            }
            let mut norm: f64 = 0.0;
            for ((e, a), b) in err.iter().zip(x.iter()).zip(x_new.iter()) {
                let scale = tol.abs_tol + tol.rel_tol * a.norm().max(b.norm());
                norm = norm.max(e.norm() / scale);
            }
            if !norm.is_finite() {
                return Err(Error::Numerical("integrator produced non-finite values".into()));
            }
            if norm <= 1.0 {
                t = if last { t1 } else { t + h };
                x = x_new;
            }
            let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * factor).min(self.max_step);
            if h < 1e-14 * span.max(1e-300) && t < t1 {
                return Err(Error::Numerical(format!("step size underflow at t = {t:e}")));
            }
        }
        Ok(x)
    }
}

/// Evolves a list of (possibly non-physical) operators on `space` through one generator.
pub(crate) fn evolve_operators(
    gen: &PhaseGenerator,
    space: &HilbertSpace,
    ops: &[CMatrix],
    tol: &ToleranceConfig,
    force_rk: bool,
) -> Result<Vec<CMatrix>> {
    let emb = Embedding::new(space, &gen.labels())?;
    let blocks: Vec<CMatrix> = ops.iter().map(|m| emb.gather(m)).collect();
    let cols = blocks[0].ncols();
    let mut stacked = CMatrix::zeros(blocks[0].nrows(), cols * blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        stacked.columns_mut(i * cols, cols).copy_from(b);
    }
    let pw = Piecewise::liouvillian(gen, tol)?;
    let out = pw.evolve(stacked, 0.0, gen.duration(), tol, force_rk)?;
    Ok((0..ops.len()).map(|i| emb.scatter(&out.columns(i * cols, cols).into_owned())).collect())
}

fn finish(space: &HilbertSpace, m: CMatrix) -> Result<DensityMatrix> {
    let rho = DensityMatrix::from_matrix_unchecked(space, m);
    rho.check(1e-8, 1e-8, 1e-8).map_err(|e| Error::Numerical(format!("propagation lost physicality: {e}")))?;
    Ok(rho)
}

fn check_tol(tol: &ToleranceConfig) -> Result<()> {
    tol.validate()
}

/// State after the phase generator acts on `rho`; `rho` may live on a larger space.
pub fn propagate(gen: &PhaseGenerator, rho: &DensityMatrix, tol: &ToleranceConfig) -> Result<DensityMatrix> {
    check_tol(tol)?;
    let out = evolve_operators(gen, rho.space(), &[rho.matrix().clone()], tol, false)?;
    finish(rho.space(), out.into_iter().next().expect("one operator"))
}

/// Like [`propagate`] but integrates every segment, flat ones included.
pub fn integrate(gen: &PhaseGenerator, rho: &DensityMatrix, tol: &ToleranceConfig) -> Result<DensityMatrix> {
    check_tol(tol)?;
    let out = evolve_operators(gen, rho.space(), &[rho.matrix().clone()], tol, true)?;
    finish(rho.space(), out.into_iter().next().expect("one operator"))
}

/// States at the sorted times `times` within the phase.
pub fn propagate_sampled(
    gen: &PhaseGenerator,
    rho: &DensityMatrix,
    times: &[f64],
    tol: &ToleranceConfig,
) -> Result<Vec<DensityMatrix>> {
    check_tol(tol)?;
    let emb = Embedding::new(rho.space(), &gen.labels())?;
    let pw = Piecewise::liouvillian(gen, tol)?;
    let mut x = emb.gather(rho.matrix());
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &ti in times {
        if ti < t || ti > gen.duration() * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!("sample time {ti:e} out of order or range")));
        }
        x = pw.evolve(x, t, ti, tol, false)?;
        t = ti;
        out.push(finish(rho.space(), emb.scatter(&x))?);
    }
    Ok(out)
}

/// State after all blocks of a phase.
pub fn propagate_phase(phase: &Phase, rho: &DensityMatrix, tol: &ToleranceConfig) -> Result<DensityMatrix> {
    let mut r = rho.clone();
    for part in &phase.parts {
        r = propagate(part, &r, tol)?;
    }
    Ok(r)
}

pub fn propagate_schedule(schedule: &[Phase], rho: &DensityMatrix, tol: &ToleranceConfig) -> Result<DensityMatrix> {
    let mut r = rho.clone();
    for phase in schedule {
        r = propagate_phase(phase, &r, tol)?;
    }
    Ok(r)
}

/// Ket evolution of a decoherence-free generator from `t0` to `t1`.
pub(crate) fn evolve_ket(pw: &Piecewise, psi: CVector, t0: f64, t1: f64, tol: &ToleranceConfig) -> Result<CVector> {
    let m = pw.evolve(CMatrix::from_column_slice(psi.len(), 1, psi.as_slice()), t0, t1, tol, false)?;
    Ok(CVector::from_column_slice(m.as_slice()))
}
