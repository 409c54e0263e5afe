use std::f64::consts::PI;

use super::{
    ArchitectureConfig, ArchitectureKind, Phase, PhaseGenerator, PulseEnvelope, BUFFER, CAVITY,
    TRANSMON,
};
use crate::error::{Error, Result};
use crate::hilbert::{annihilator, thermal_terms, DissipativeTerm, HilbertSpace, Operator};
use crate::model::{derived_rates, DeviceParams, Participation, Regime};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Transmon to storage.
    Write,
    /// Storage to transmon.
    Read,
}

/// Dissipator list that drops channels with zero rate.
#[derive(Default)]
struct Terms(Vec<DissipativeTerm>);

impl Terms {
    fn lindblad(&mut self, op: Operator, rate: f64) -> Result<()> {
        if rate != 0.0 {
            self.0.push(DissipativeTerm::lindblad(op, rate)?);
        }
        Ok(())
    }

    fn thermal(&mut self, op: &Operator, rate: f64, nbar: f64) -> Result<()> {
        if rate != 0.0 {
            self.0.extend(thermal_terms(op, rate, nbar)?);
        }
        Ok(())
    }

    fn cross(&mut self, x: Operator, y: Operator, rate: f64) -> Result<()> {
        if rate != 0.0 {
            self.0.push(DissipativeTerm::cross_pair(x, y, rate)?);
        }
        Ok(())
    }

    /// Pump-induced diffusion `D[o] + D[o†]`.
    fn diffusion(&mut self, o: &Operator, rate: f64) -> Result<()> {
        self.lindblad(o.clone(), rate)?;
        self.lindblad(o.adjoint(), rate)
    }
}

/// Background noise of a cavity that does not depend on the phase being run.
struct CavityNoise {
    kappa: f64,
    nbar: f64,
    dephasing: f64,
    /// Relaxation through the coupler, with the coupler's occupation.
    coupler_decay: f64,
    coupler_nbar: f64,
}

impl CavityNoise {
    fn apply(&self, t: &mut Terms, c: &Operator, extra_dephasing: f64) -> Result<()> {
        t.thermal(c, self.kappa, self.nbar)?;
        t.thermal(c, self.coupler_decay, self.coupler_nbar)?;
        t.lindblad(c.adjoint().compose(c)?, self.dephasing + extra_dephasing)
    }
}

fn cavity_noise(params: &DeviceParams, arch: &ArchitectureConfig, label: &str) -> CavityNoise {
    let coupled = |p: Participation| CavityNoise {
        kappa: params.kappa,
        nbar: params.nbar_cav,
        dephasing: params.kappa_phi + params.coupler.gamma_phi * p.value().powi(2),
        coupler_decay: params.coupler_induced_decay(p),
        coupler_nbar: params.coupler.nbar,
    };
    match (arch.kind, label) {
        (ArchitectureKind::Direct, _) => CavityNoise {
            kappa: params.kappa,
            nbar: params.nbar_cav,
            dephasing: params.kappa_phi,
            coupler_decay: 0.0,
            coupler_nbar: 0.0,
        },
        (ArchitectureKind::Cascade, BUFFER) => {
            CavityNoise { kappa: arch.buffer_kappa(params), ..coupled(arch.links.buffer_coupler) }
        }
        _ => coupled(arch.links.cavity_coupler),
    }
}

struct Pair {
    q: Operator,
    c: Operator,
}

impl Pair {
    fn new(arch: &ArchitectureConfig, partner: &str) -> Result<Self> {
        let t = arch.truncations;
        let dim = if partner == BUFFER { t.buffer } else { t.cavity };
        let space = HilbertSpace::new([(TRANSMON, t.transmon), (partner, dim)])?;
        Ok(Self { q: annihilator(&space, TRANSMON)?, c: annihilator(&space, partner)? })
    }

    fn nq(&self) -> Operator {
        &self.q.adjoint() * &self.q
    }

    fn nc(&self) -> Operator {
        &self.c.adjoint() * &self.c
    }

    /// `−½K q†²q²` on the transmon.
    fn transmon_kerr(&self, params: &DeviceParams) -> Operator {
        let qd = self.q.adjoint();
        &(&qd.pow(2) * &self.q.pow(2)) * (-0.5 * params.kerr)
    }

    /// Dispersive Hamiltonian of the pair at participation `p`.
    fn dispersive(&self, params: &DeviceParams, p: Participation) -> Operator {
        let r = derived_rates(params, p, Regime::Dispersive);
        let cd = self.c.adjoint();
        let c2 = &cd.pow(2) * &self.c.pow(2);
        let nq = self.nq();
        &(&(&self.transmon_kerr(params) - &(&(&self.nc() * &nq) * r.chi)) - &(&c2 * r.kerr_a))
            - &(&(&c2 * &nq) * r.chi_prime)
    }

    /// Transmon and dressed-cavity dissipators of the dispersive pair.
    fn dispersive_terms(&self, params: &DeviceParams, p: Participation, noise: &CavityNoise) -> Result<Terms> {
        let r = derived_rates(params, p, Regime::Dispersive);
        let mut t = Terms::default();
        noise.apply(&mut t, &self.c, r.kappa_gamma_phi)?;
        t.thermal(&self.c, r.kappa_gamma, params.nbar_q)?;
        t.thermal(&self.q, params.gamma, params.nbar_q)?;
        t.lindblad(self.nq(), params.gamma_phi)?;
        t.lindblad(&self.c.adjoint() * &self.q, r.gamma_delta)?;
        t.lindblad(&self.q.adjoint() * &self.c, r.gamma_delta)?;
        t.cross(self.nc(), self.nq(), (params.gamma_phi * r.kappa_gamma_phi).sqrt())?;
        Ok(t)
    }
}

fn single_mode(label: &str, dim: usize) -> Result<(HilbertSpace, Operator)> {
    let space = HilbertSpace::new([(label, dim)])?;
    let a = annihilator(&space, label)?;
    Ok((space, a))
}

/// Transmon alone: Kerr, relaxation and pure dephasing.
pub fn transmon_idle_generator(params: &DeviceParams, dim: usize, duration: f64) -> Result<PhaseGenerator> {
    let (_, q) = single_mode(TRANSMON, dim)?;
    let qd = q.adjoint();
    let h = &(&qd.pow(2) * &q.pow(2)) * (-0.5 * params.kerr);
    let mut t = Terms::default();
    t.thermal(&q, params.gamma, params.nbar_q)?;
    t.lindblad(&qd * &q, params.gamma_phi)?;
    PhaseGenerator::undriven("transmon idle", h, t.0, duration)
}

/// Cavity alone with its background noise, used for spectators.
fn cavity_idle_block(params: &DeviceParams, arch: &ArchitectureConfig, label: &str, duration: f64) -> Result<PhaseGenerator> {
    let dim = if label == BUFFER { arch.truncations.buffer } else { arch.truncations.cavity };
    let (space, c) = single_mode(label, dim)?;
    let mut t = Terms::default();
    let mut extra = 0.0;
    if arch.kind == ArchitectureKind::Cascade && label == BUFFER {
        let p = arch.links.buffer_qubit;
        t.thermal(&c, params.inverse_purcell(p), params.nbar_q)?;
        extra = params.gamma_phi * p.value().powi(2);
    }
    cavity_noise(params, arch, label).apply(&mut t, &c, extra)?;
    PhaseGenerator::undriven(&format!("{label} idle"), Operator::zeros(&space), t.0, duration)
}

/// Idle of a transmon dispersively coupled to the storage cavity.
pub fn direct_idle_generator(params: &DeviceParams, arch: &ArchitectureConfig, duration: f64) -> Result<PhaseGenerator> {
    arch.require(&[ArchitectureKind::Direct])?;
    let p = arch.links.qubit_cavity;
    let pair = Pair::new(arch, CAVITY)?;
    let terms = pair.dispersive_terms(params, p, &cavity_noise(params, arch, CAVITY))?;
    PhaseGenerator::undriven("direct idle", pair.dispersive(params, p), terms.0, duration)
}

fn ef_partner(arch: &ArchitectureConfig) -> Result<(&'static str, Participation)> {
    match arch.kind {
        ArchitectureKind::Direct => Ok((CAVITY, arch.links.qubit_cavity)),
        ArchitectureKind::Cascade => Ok((BUFFER, arch.links.buffer_qubit)),
        ArchitectureKind::Coupler => Err(Error::WrongArchitecture {
            expected: "direct or cascade".into(),
            found: arch.kind.name().into(),
        }),
    }
}

/// Amplitude of the e–f drive whose envelope area gives a π rotation.
pub fn ef_area_amplitude(arch: &ArchitectureConfig) -> Result<f64> {
    let env = ef_envelope(arch)?;
    Ok(PI / (2.0 * 2f64.sqrt() * env.area()))
}

fn ef_envelope(arch: &ArchitectureConfig) -> Result<PulseEnvelope> {
    let tr = arch.pulse.ramp_time;
    PulseEnvelope::ramped(tr, arch.pulse.t_ef - 2.0 * tr)
}

/// e–f rotation with the calibrated drive if one is set, else the area-rule
/// amplitude without detuning.
pub fn ef_rotation_generator(params: &DeviceParams, arch: &ArchitectureConfig) -> Result<PhaseGenerator> {
    match arch.pulse.ef_drive {
        Some(d) => ef_rotation_with(params, arch, d.amplitude, d.detuning),
        None => ef_rotation_with(params, arch, ef_area_amplitude(arch)?, 0.0),
    }
}

/// e–f rotation with drive amplitude `amplitude` and frame detuning `detuning` (rad/s).
pub fn ef_rotation_with(
    params: &DeviceParams,
    arch: &ArchitectureConfig,
    amplitude: f64,
    detuning: f64,
) -> Result<PhaseGenerator> {
    let (partner, p) = ef_partner(arch)?;
    let pair = Pair::new(arch, partner)?;
    let nq = pair.nq();
    let h = &(&pair.dispersive(params, p) + &(&nq * params.kerr)) - &(&nq * detuning);
    let drive = &(&pair.q + &pair.q.adjoint()) * amplitude;
    let terms = pair.dispersive_terms(params, p, &cavity_noise(params, arch, partner))?;
    PhaseGenerator::new("ef rotation", h, drive, terms.0, Vec::new(), ef_envelope(arch)?)
}

/// Four-wave |f,0⟩ ↔ |g,1⟩ sideband between the transmon and its partner cavity.
pub fn sideband_generator(params: &DeviceParams, arch: &ArchitectureConfig) -> Result<PhaseGenerator> {
    let (partner, p) = ef_partner(arch)?;
    let pair = Pair::new(arch, partner)?;
    let g_sb = params.sideband_rate(p);
    if g_sb <= 0.0 {
        return Err(Error::InvalidParameter("sideband rate is zero".into()));
    }
    let (q, c) = (&pair.q, &pair.c);
    let h = &pair.dispersive(params, p) + &(&pair.nq() * (0.5 * params.kerr));
    // normalized so that ⟨g,1|H|f,0⟩ = g_sb
    let hop = &c.adjoint() * &q.pow(2);
    let drive = &(&hop + &hop.adjoint()) * (g_sb / 2f64.sqrt());

    let pv = p.value();
    let xi2 = params.xi1_4w.powi(2);
    let noise = cavity_noise(params, arch, partner);
    let mut t = Terms::default();
    noise.apply(&mut t, c, 0.0)?;
    t.thermal(c, params.inverse_purcell(p), params.nbar_q)?;
    t.thermal(q, params.gamma, params.nbar_q)?;
    t.lindblad(&pair.nq() + &(&pair.nc() * pv), params.gamma_phi)?;
    t.lindblad(&c.adjoint() * q, params.gamma_phi * pv)?;
    t.lindblad(c * &q.adjoint(), params.gamma_phi * pv)?;
    let mut pump = Terms::default();
    pump.diffusion(c, params.gamma_phi * xi2 * pv)?;
    pump.diffusion(q, params.gamma_phi * xi2)?;

    let env = PulseEnvelope::with_area(arch.pulse.ramp_time, PI / (2.0 * g_sb))?;
    PhaseGenerator::new("sideband", h, drive, t.0, pump.0, env)
}

/// Beam splitter between the transmon and the storage cavity through the coupler.
pub fn coupler_bs_generator(params: &DeviceParams, arch: &ArchitectureConfig) -> Result<PhaseGenerator> {
    arch.require(&[ArchitectureKind::Coupler])?;
    let (pa, pq) = (arch.links.cavity_coupler, arch.links.qubit_coupler);
    let g = params.beam_splitter_rate(pa, pq);
    if g <= 0.0 {
        return Err(Error::InvalidParameter("beam-splitter rate is zero".into()));
    }
    let pair = Pair::new(arch, CAVITY)?;
    let (q, a) = (&pair.q, &pair.c);
    let hop = &a.adjoint() * q;
    let drive = &(&hop + &hop.adjoint()) * g;
    let c = &params.coupler;
    let xi2 = params.xi1_3w.powi(2);
    let mut t = Terms::default();
    cavity_noise(params, arch, CAVITY).apply(&mut t, a, 0.0)?;
    t.thermal(q, params.gamma, params.nbar_q)?;
    t.lindblad(pair.nq(), params.gamma_phi)?;
    let joint = c.gamma_phi_e * pa.value() * pq.value();
    t.lindblad(hop.clone(), joint)?;
    t.lindblad(hop.adjoint(), joint)?;
    t.cross(pair.nc(), pair.nq(), c.gamma_phi * pa.value() * pq.value())?;
    let mut pump = Terms::default();
    pump.diffusion(a, c.gamma_phi_e * xi2 * pa.value())?;
    pump.diffusion(q, c.gamma_phi_e * xi2 * pq.value())?;
    let env = PulseEnvelope::with_area(arch.pulse.ramp_time, PI / (2.0 * g))?;
    PhaseGenerator::new("beam splitter", pair.transmon_kerr(params), drive, t.0, pump.0, env)
}

/// Undriven coupler architecture: transmon and cavity evolve independently.
pub fn coupler_idle_generator(params: &DeviceParams, arch: &ArchitectureConfig, duration: f64) -> Result<PhaseGenerator> {
    arch.require(&[ArchitectureKind::Coupler])?;
    let pair = Pair::new(arch, CAVITY)?;
    let mut t = Terms::default();
    cavity_noise(params, arch, CAVITY).apply(&mut t, &pair.c, 0.0)?;
    t.thermal(&pair.q, params.gamma, params.nbar_q)?;
    t.lindblad(pair.nq(), params.gamma_phi)?;
    PhaseGenerator::undriven("coupler idle", pair.transmon_kerr(params), t.0, duration)
}

/// Beam splitter between buffer and storage through the coupler.
fn cascade_bs_generator(params: &DeviceParams, arch: &ArchitectureConfig) -> Result<PhaseGenerator> {
    let (pa, pb) = (arch.links.cavity_coupler, arch.links.buffer_coupler);
    let g = params.beam_splitter_rate(pa, pb);
    if g <= 0.0 {
        return Err(Error::InvalidParameter("beam-splitter rate is zero".into()));
    }
    let t_dims = arch.truncations;
    let space = HilbertSpace::new([(BUFFER, t_dims.buffer), (CAVITY, t_dims.cavity)])?;
    let b = annihilator(&space, BUFFER)?;
    let a = annihilator(&space, CAVITY)?;
    let hop = &a.adjoint() * &b;
    let drive = &(&hop + &hop.adjoint()) * g;
    let c = &params.coupler;
    let xi2 = params.xi1_3w.powi(2);
    let pbq = arch.links.buffer_qubit;
    let mut t = Terms::default();
    cavity_noise(params, arch, CAVITY).apply(&mut t, &a, 0.0)?;
    cavity_noise(params, arch, BUFFER).apply(&mut t, &b, params.gamma_phi * pbq.value().powi(2))?;
    t.thermal(&b, params.inverse_purcell(pbq), params.nbar_q)?;
    let joint = c.gamma_phi_e * pa.value() * pb.value();
    t.lindblad(hop.clone(), joint)?;
    t.lindblad(hop.adjoint(), joint)?;
    t.cross(&a.adjoint() * &a, &b.adjoint() * &b, c.gamma_phi * pa.value() * pb.value())?;
    let mut pump = Terms::default();
    pump.diffusion(&a, c.gamma_phi_e * xi2 * pa.value())?;
    pump.diffusion(&b, c.gamma_phi_e * xi2 * pb.value())?;
    let env = PulseEnvelope::with_area(arch.pulse.ramp_time, PI / (2.0 * g))?;
    PhaseGenerator::new("buffer beam splitter", Operator::zeros(&space), drive, t.0, pump.0, env)
}

/// Write or read sequence of the cascade: e–f rotation, sideband into the
/// buffer, beam splitter into storage (reversed for read), with idle spectators.
pub fn cascade_schedule(params: &DeviceParams, arch: &ArchitectureConfig, direction: Direction) -> Result<Vec<Phase>> {
    arch.require(&[ArchitectureKind::Cascade])?;
    let with_storage = |g: PhaseGenerator| -> Result<Phase> {
        let d = g.duration();
        let name = g.name.clone();
        Phase::new(&name, vec![g, cavity_idle_block(params, arch, CAVITY, d)?])
    };
    let ef = with_storage(ef_rotation_generator(params, arch)?)?;
    let sb = with_storage(sideband_generator(params, arch)?)?;
    let bs = cascade_bs_generator(params, arch)?;
    let d = bs.duration();
    let bs = Phase::new("buffer beam splitter", vec![bs, transmon_idle_generator(params, arch.truncations.transmon, d)?])?;
    let mut phases = vec![ef, sb, bs];
    if direction == Direction::Read {
        phases.reverse();
    }
    Ok(phases)
}

/// Phases moving the state from the transmon into storage.
pub fn write_schedule(params: &DeviceParams, arch: &ArchitectureConfig) -> Result<Vec<Phase>> {
    match arch.kind {
        ArchitectureKind::Direct => Ok(vec![
            Phase::single(ef_rotation_generator(params, arch)?),
            Phase::single(sideband_generator(params, arch)?),
        ]),
        ArchitectureKind::Coupler => Ok(vec![Phase::single(coupler_bs_generator(params, arch)?)]),
        ArchitectureKind::Cascade => cascade_schedule(params, arch, Direction::Write),
    }
}

/// Phases moving the state from storage back to the transmon.
pub fn read_schedule(params: &DeviceParams, arch: &ArchitectureConfig) -> Result<Vec<Phase>> {
    match arch.kind {
        ArchitectureKind::Cascade => cascade_schedule(params, arch, Direction::Read),
        _ => {
            let mut s = write_schedule(params, arch)?;
            s.reverse();
            Ok(s)
        }
    }
}

/// Storage idle of `duration` for any architecture.
pub fn idle_phase(params: &DeviceParams, arch: &ArchitectureConfig, duration: f64) -> Result<Phase> {
    match arch.kind {
        ArchitectureKind::Direct => Ok(Phase::single(direct_idle_generator(params, arch, duration)?)),
        ArchitectureKind::Coupler => Ok(Phase::single(coupler_idle_generator(params, arch, duration)?)),
        ArchitectureKind::Cascade => Phase::new(
            "cascade idle",
            vec![
                transmon_idle_generator(params, arch.truncations.transmon, duration)?,
                cavity_idle_block(params, arch, BUFFER, duration)?,
                cavity_idle_block(params, arch, CAVITY, duration)?,
            ],
        ),
    }
}
