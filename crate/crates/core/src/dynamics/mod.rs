//! Generators of every protocol phase for the three control architectures.
//!
//! A [`PhaseGenerator`] acts on a block of modes: a static Hamiltonian, a
//! drive Hamiltonian scaled by the pulse envelope `s(t)`, always-on
//! dissipators, and pump-induced dissipators scaled by `s(t)²`. A [`Phase`]
//! groups generators on disjoint blocks that run for the same duration, so
//! decoupled modes never share a superoperator.

mod builders;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{
    liouvillian, CMatrix, DissipativeTerm, Embedding, HilbertSpace, Operator, Superoperator, C64,
};
use crate::model::{DeviceParams, Links, Participation};

pub use builders::{
    cascade_schedule, coupler_bs_generator, coupler_idle_generator, direct_idle_generator,
    ef_area_amplitude, ef_rotation_generator, ef_rotation_with, idle_phase, read_schedule, sideband_generator,
    transmon_idle_generator, write_schedule, Direction,
};

pub const TRANSMON: &str = "q";
pub const CAVITY: &str = "a";
pub const BUFFER: &str = "b";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ArchitectureKind {
    Direct,
    Coupler,
    Cascade,
}

impl ArchitectureKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Coupler => "coupler",
            Self::Cascade => "cascade",
        }
    }
}

impl std::fmt::Display for ArchitectureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Truncations {
    pub transmon: usize,
    pub cavity: usize,
    pub buffer: usize,
}

impl Default for Truncations {
    fn default() -> Self {
        Self { transmon: 3, cavity: 3, buffer: 3 }
    }
}

/// Pulse timing shared by all driven phases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PulseSettings {
    /// Length of each squared-sine ramp; zero gives square pulses.
    pub ramp_time: f64,
    /// Total duration of the e–f rotation, ramps included.
    pub t_ef: f64,
    /// Calibrated e–f drive; `None` uses the area rule.
    pub ef_drive: Option<EfDrive>,
}

impl Default for PulseSettings {
    fn default() -> Self {
        Self { ramp_time: 10e-9, t_ef: 240e-9, ef_drive: None }
    }
}

/// Amplitude and frame detuning (rad/s) of the e–f drive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EfDrive {
    pub amplitude: f64,
    pub detuning: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ArchitectureConfig {
    pub kind: ArchitectureKind,
    pub links: Links,
    pub truncations: Truncations,
    /// Intrinsic buffer decay; `None` means `√(κγ)`.
    pub buffer_kappa: Option<f64>,
    pub pulse: PulseSettings,
}

impl ArchitectureConfig {
    pub fn new(kind: ArchitectureKind, links: Links) -> Self {
        Self {
            kind,
            links,
            truncations: Truncations::default(),
            buffer_kappa: None,
            pulse: PulseSettings::default(),
        }
    }

    /// Transmon coupled directly to the storage cavity at participation `p`.
    pub fn direct(p: Participation) -> Self {
        Self::new(ArchitectureKind::Direct, Links { qubit_cavity: p, ..Links::default() })
    }

    /// SNAIL coupler with storage participation `p` and transmon participation 0.1.
    pub fn coupler(p: Participation) -> Self {
        Self::new(ArchitectureKind::Coupler, Links { cavity_coupler: p, ..Links::default() })
    }

    /// Buffer cavity between transmon and storage; `p_bq`, `p_bc` are the buffer's
    /// participations in the transmon and the coupler.
    pub fn cascade(p: Participation, p_bq: Participation, p_bc: Participation) -> Self {
        Self::new(
            ArchitectureKind::Cascade,
            Links { cavity_coupler: p, buffer_qubit: p_bq, buffer_coupler: p_bc, ..Links::default() },
        )
    }

    /// Participation of the storage cavity in its control element.
    pub fn storage_participation(&self) -> Participation {
        match self.kind {
            ArchitectureKind::Direct => self.links.qubit_cavity,
            _ => self.links.cavity_coupler,
        }
    }

    pub fn with_storage_participation(mut self, p: Participation) -> Self {
        match self.kind {
            ArchitectureKind::Direct => self.links.qubit_cavity = p,
            _ => self.links.cavity_coupler = p,
        }
        self
    }

    pub fn with_pulse(mut self, pulse: PulseSettings) -> Self {
        self.pulse = pulse;
        self
    }

    pub fn with_truncations(mut self, t: Truncations) -> Self {
        self.truncations = t;
        self
    }

    pub fn buffer_kappa(&self, params: &DeviceParams) -> f64 {
        self.buffer_kappa.unwrap_or_else(|| (params.kappa * params.gamma).sqrt())
    }

    /// Full Hilbert space: transmon, (buffer,) storage cavity.
    pub fn space(&self) -> Result<HilbertSpace> {
        let t = self.truncations;
        match self.kind {
            ArchitectureKind::Cascade => {
                HilbertSpace::new([(TRANSMON, t.transmon), (BUFFER, t.buffer), (CAVITY, t.cavity)])
            }
            _ => HilbertSpace::new([(TRANSMON, t.transmon), (CAVITY, t.cavity)]),
        }
    }

    pub(crate) fn require(&self, kinds: &[ArchitectureKind]) -> Result<()> {
        if kinds.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::WrongArchitecture {
                expected: kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(" or "),
                found: self.kind.name().to_string(),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum EnvelopeShape {
    Constant,
    /// Squared-sine rise and fall of `ramp_time` each around a flat top.
    Ramped { ramp_time: f64 },
}

/// Normalized drive amplitude `s(t) ∈ [0, 1]` over a phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PulseEnvelope {
    pub shape: EnvelopeShape,
    pub duration: f64,
}

/// Piece of an envelope: either flat at a fixed value or a ramp.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub flat: Option<f64>,
}

impl PulseEnvelope {
    pub fn constant(duration: f64) -> Result<Self> {
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::InvalidParameter(format!("duration {duration}")));
        }
        Ok(Self { shape: EnvelopeShape::Constant, duration })
    }

    pub fn ramped(ramp_time: f64, plateau: f64) -> Result<Self> {
        if !(ramp_time >= 0.0 && plateau >= 0.0 && (ramp_time + plateau).is_finite()) {
            return Err(Error::InvalidParameter(format!("ramp {ramp_time}, plateau {plateau}")));
        }
        if ramp_time == 0.0 {
            return Self::constant(plateau);
        }
        Ok(Self { shape: EnvelopeShape::Ramped { ramp_time }, duration: plateau + 2.0 * ramp_time })
    }

    /// Shortest envelope whose area equals `area`: flat top of `area − t_r`.
    pub fn with_area(ramp_time: f64, area: f64) -> Result<Self> {
        if area < ramp_time {
            return Err(Error::InvalidParameter(format!(
                "pulse area {area:e} s shorter than ramp {ramp_time:e} s"
            )));
        }
        Self::ramped(ramp_time, area - ramp_time)
    }

    pub fn ramp_time(&self) -> f64 {
        match self.shape {
            EnvelopeShape::Constant => 0.0,
            EnvelopeShape::Ramped { ramp_time } => ramp_time,
        }
    }

    pub fn plateau(&self) -> f64 {
        self.duration - 2.0 * self.ramp_time()
    }

    pub fn value(&self, t: f64) -> f64 {
        let tr = self.ramp_time();
        if tr == 0.0 {
            return 1.0;
        }
        let x = if t < tr {
            t / tr
        } else if t > self.duration - tr {
            (self.duration - t) / tr
        } else {
            1.0
        };
        (0.5 * std::f64::consts::PI * x.clamp(0.0, 1.0)).sin().powi(2)
    }

    /// `∫ s(t) dt` over the whole envelope.
    pub fn area(&self) -> f64 {
        self.plateau() + self.ramp_time()
    }

    pub fn segments(&self) -> Vec<Segment> {
        let tr = self.ramp_time();
        if tr == 0.0 {
            return vec![Segment { start: 0.0, end: self.duration, flat: Some(1.0) }];
        }
        let top = self.duration - tr;
        let mut segs = vec![Segment { start: 0.0, end: tr, flat: None }];
        if top > tr {
            segs.push(Segment { start: tr, end: top, flat: Some(1.0) });
        }
        segs.push(Segment { start: top, end: self.duration, flat: None });
        segs
    }
}

/// One protocol phase on a block of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGenerator {
    pub name: String,
    pub space: HilbertSpace,
    pub h_static: Operator,
    pub h_drive: Operator,
    pub terms: Vec<DissipativeTerm>,
    /// Dissipators proportional to the pump power, scaled by `s(t)²`.
    pub pump_terms: Vec<DissipativeTerm>,
    pub envelope: PulseEnvelope,
}

impl PhaseGenerator {
    /// Free evolution under `h` with dissipators `terms` for `duration`.
    pub fn undriven(name: &str, h: Operator, terms: Vec<DissipativeTerm>, duration: f64) -> Result<Self> {
        let space = h.space().clone();
        Self::new(name, h, Operator::zeros(&space), terms, Vec::new(), PulseEnvelope::constant(duration)?)
    }

    pub fn new(
        name: &str,
        h_static: Operator,
        h_drive: Operator,
        terms: Vec<DissipativeTerm>,
        pump_terms: Vec<DissipativeTerm>,
        envelope: PulseEnvelope,
    ) -> Result<Self> {
        let space = h_static.space().clone();
        if h_drive.space() != &space || terms.iter().chain(&pump_terms).any(|t| t.space() != &space) {
            return Err(Error::SpaceMismatch);
        }
        for (label, h) in [("static", &h_static), ("drive", &h_drive)] {
            let scale = h.max_abs().max(1.0);
            if h.hermiticity_error() > 1e-12 * scale {
                return Err(Error::InvalidParameter(format!("{label} Hamiltonian of `{name}` not Hermitian")));
            }
        }
        Ok(Self { name: name.to_string(), space, h_static, h_drive, terms, pump_terms, envelope })
    }

    pub fn duration(&self) -> f64 {
        self.envelope.duration
    }

    pub fn labels(&self) -> Vec<&str> {
        self.space.labels()
    }

    pub fn with_envelope(mut self, envelope: PulseEnvelope) -> Self {
        self.envelope = envelope;
        self
    }

    pub fn with_duration(self, duration: f64) -> Result<Self> {
        let env = match self.envelope.shape {
            EnvelopeShape::Constant => PulseEnvelope::constant(duration)?,
            EnvelopeShape::Ramped { ramp_time } => PulseEnvelope::ramped(ramp_time, duration - 2.0 * ramp_time)?,
        };
        Ok(self.with_envelope(env))
    }

    /// Copy with every dissipator removed.
    pub fn without_decoherence(&self) -> Self {
        let mut g = self.clone();
        g.terms.clear();
        g.pump_terms.clear();
        g
    }

    pub fn is_unitary(&self) -> bool {
        self.terms.iter().chain(&self.pump_terms).all(|t| t.rate() == 0.0)
    }

    pub fn is_driven(&self) -> bool {
        self.h_drive.max_abs() > 0.0 || !self.pump_terms.is_empty()
    }

    pub fn hamiltonian_at(&self, t: f64) -> Operator {
        &self.h_static + &(&self.h_drive * self.envelope.value(t))
    }

    /// Largest coupling scale, bounding the integrator step.
    pub fn max_coupling(&self) -> f64 {
        let row_norm = |m: &CMatrix| {
            (0..m.nrows()).map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
        };
        row_norm(self.h_static.matrix()) + row_norm(self.h_drive.matrix())
    }

    /// Liouvillian pieces `(L₀, L_drive, L_pump)` with `L(t) = L₀ + s L_drive + s² L_pump`.
    pub fn liouvillian_parts(&self) -> Result<(Superoperator, Superoperator, Superoperator)> {
        let l0 = liouvillian(&self.h_static, &self.terms)?;
        let ld = liouvillian(&self.h_drive, &[])?;
        let lp = liouvillian(&Operator::zeros(&self.space), &self.pump_terms)?;
        Ok((l0, ld, lp))
    }

    /// Liouvillian at envelope value `s`.
    pub fn liouvillian_at(&self, s: f64) -> Result<Superoperator> {
        let (l0, ld, lp) = self.liouvillian_parts()?;
        let m = l0.matrix() + ld.matrix() * C64::new(s, 0.0) + lp.matrix() * C64::new(s * s, 0.0);
        Superoperator::new(self.space.clone(), m)
    }

    /// Every dissipator lifted to `full`, pump terms at full strength.
    pub fn lifted_terms(&self, full: &HilbertSpace) -> Result<Vec<DissipativeTerm>> {
        let emb = Embedding::new(full, &self.labels())?;
        self.terms.iter().chain(&self.pump_terms).map(|t| lift_term(t, &emb)).collect()
    }
}

pub fn lift_term(term: &DissipativeTerm, emb: &Embedding) -> Result<DissipativeTerm> {
    let lift = |op: &Operator| Operator::new(emb.full().clone(), emb.lift(op.matrix()));
    match term {
        DissipativeTerm::Lindblad { op, rate } => DissipativeTerm::lindblad(lift(op)?, *rate),
        DissipativeTerm::CrossPair { x, y, rate } => DissipativeTerm::cross_pair(lift(x)?, lift(y)?, *rate),
    }
}

/// Generators on disjoint mode blocks that run simultaneously.
#[derive(Clone, Debug, PartialEq)]
pub struct Phase {
    pub name: String,
    pub parts: Vec<PhaseGenerator>,
}

impl Phase {
    pub fn new(name: &str, parts: Vec<PhaseGenerator>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidParameter(format!("phase `{name}` has no generators")));
        };
        let duration = first.duration();
        let mut seen: Vec<&str> = Vec::new();
        for p in &parts {
            if (p.duration() - duration).abs() > 1e-12 * duration.max(1e-300) {
                return Err(Error::InvalidParameter(format!("phase `{name}` mixes durations")));
            }
            for l in p.labels() {
                if seen.contains(&l) {
                    return Err(Error::InvalidParameter(format!("mode `{l}` appears twice in `{name}`")));
                }
                seen.push(l);
            }
        }
        if parts.iter().filter(|p| p.is_driven()).count() > 1 {
            return Err(Error::InvalidParameter(format!("phase `{name}` has more than one driven block")));
        }
        Ok(Self { name: name.to_string(), parts })
    }

    pub fn single(gen: PhaseGenerator) -> Self {
        Self { name: gen.name.clone(), parts: vec![gen] }
    }

    pub fn duration(&self) -> f64 {
        self.parts[0].duration()
    }

    /// The driven block, or the first block when nothing is driven.
    pub fn lead(&self) -> &PhaseGenerator {
        self.parts.iter().find(|p| p.is_driven()).unwrap_or(&self.parts[0])
    }

    pub fn without_decoherence(&self) -> Self {
        Self { name: self.name.clone(), parts: self.parts.iter().map(|p| p.without_decoherence()).collect() }
    }

    pub fn is_unitary(&self) -> bool {
        self.parts.iter().all(|p| p.is_unitary())
    }
}

/// Total duration of a schedule.
pub fn schedule_duration(schedule: &[Phase]) -> f64 {
    schedule.iter().map(|p| p.duration()).sum()
}
