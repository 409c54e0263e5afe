mod common;

use approx::assert_relative_eq;
use cavmem_core::dynamics::*;
use cavmem_core::hilbert::*;
use cavmem_core::model::*;
use cavmem_core::solver::*;
use common::{arch, KINDS};

fn every_generator(params: &DeviceParams, a: &ArchitectureConfig) -> Vec<PhaseGenerator> {
    let mut phases = write_schedule(params, a).unwrap();
    phases.extend(read_schedule(params, a).unwrap());
    phases.push(idle_phase(params, a, 1e-4).unwrap());
    phases.into_iter().flat_map(|p| p.parts).collect()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn liouvillians_preserve_trace() {
    let params = DeviceParams::default();
    for kind in KINDS {
        for p in [1e-4, 0.1] {
            for g in every_generator(&params, &arch(kind, p)) {
                let id = CMatrix::identity(g.space.total_dim(), g.space.total_dim());
                for s in [0.0, 0.5, 1.0] {
                    let l = g.liouvillian_at(s).unwrap();
                    let dual = l.apply_adjoint(&id);
                    assert!(max_abs(&dual) < 1e-10, "{} at s = {s}: {:e}", g.name, max_abs(&dual));
                }
            }
        }
    }
}

#[test]
fn hamiltonians_are_hermitian() {
    let params = DeviceParams::default();
    for kind in KINDS {
        for g in every_generator(&params, &arch(kind, 0.01)) {
            for t in [0.0, 0.3 * g.duration(), g.duration()] {
                let h = g.hamiltonian_at(t);
                assert!(h.hermiticity_error() <= 1e-12 * h.max_abs().max(1.0), "{}", g.name);
            }
        }
    }
}

#[test]
fn decoherence_free_phases_keep_purity() {
    let params = DeviceParams::default().without_decoherence();
    let tol = ToleranceConfig::default();
    for kind in KINDS {
        for g in every_generator(&params, &arch(kind, 0.01)) {
            assert!(g.is_unitary(), "{}", g.name);
            let d = g.space.total_dim();
            let ket = CVector::from_fn(d, |i, _| C64::new(1.0 / (1.0 + i as f64), 0.3 * i as f64));
            let rho = DensityMatrix::pure(&g.space, &ket).unwrap();
            let times: Vec<f64> = (1..=8).map(|k| g.duration() * k as f64 / 8.0).collect();
            for r in propagate_sampled(&g, &rho, &times, &tol).unwrap() {
                assert!((r.purity() - 1.0).abs() < 1e-8, "{}: purity {}", g.name, r.purity());
            }
        }
    }
}

/// Magnitude of the cavity coherence ⟨0|ρ|1⟩ after idling from (|0⟩+|1⟩)/√2.
fn cavity_coherence(params: &DeviceParams, a: &ArchitectureConfig, t: f64) -> f64 {
    let phase = idle_phase(params, a, t).unwrap();
    let space = a.space().unwrap();
    let mut ket = CVector::zeros(space.total_dim());
    ket[space.fock_index(&[]).unwrap()] = C64::new(1.0, 0.0);
    ket[space.fock_index(&[(CAVITY, 1)]).unwrap()] = C64::new(1.0, 0.0);
    let rho = DensityMatrix::pure(&space, &ket).unwrap();
    let out = propagate_phase(&phase, &rho, &ToleranceConfig::default()).unwrap();
    partial_trace(&out, &[CAVITY]).unwrap().matrix()[(0, 1)].norm()
}

#[test]
fn thermal_transmon_dephases_directly_coupled_cavity() {
    let params = DeviceParams::default();
    for p in [1e-4, 1e-3] {
        let direct = cavity_coherence(&params, &arch(ArchitectureKind::Direct, p), 1e-3);
        let coupler = cavity_coherence(&params, &arch(ArchitectureKind::Coupler, p), 1e-3);
        assert!(direct < coupler, "p = {p}: {direct} vs {coupler}");
    }
    let cold = DeviceParams { nbar_q: 0.0, ..params };
    let direct = cavity_coherence(&cold, &arch(ArchitectureKind::Direct, 1e-4), 1e-3);
    let coupler = cavity_coherence(&cold, &arch(ArchitectureKind::Coupler, 1e-4), 1e-3);
    assert_relative_eq!(direct, coupler, max_relative = 1e-4);
}

#[test]
fn buffer_lifetime_from_geometric_mean() {
    let a = arch(ArchitectureKind::Cascade, 0.01);
    assert_relative_eq!(1.0 / a.buffer_kappa(&DeviceParams::default()), 14.142e-3, max_relative = 1e-4);
}

#[test]
fn decoherence_free_write_fills_the_cavity() {
    let params = DeviceParams::default().without_decoherence();
    let tol = ToleranceConfig::default();
    for kind in KINDS {
        let mut a = arch(kind, 0.01);
        if kind != ArchitectureKind::Coupler {
            let (drive, _) = calibrate_ef(&params, &a, &tol).unwrap();
            a.pulse.ef_drive = Some(drive);
        }
        let space = a.space().unwrap();
        let rho = DensityMatrix::fock(&space, &[(TRANSMON, 1)]).unwrap();
        let out = propagate_schedule(&write_schedule(&params, &a).unwrap(), &rho, &tol).unwrap();
        let pop = out.population(&[(CAVITY, 1)]).unwrap();
        assert!(pop > 1.0 - 1e-5, "{kind:?}: {pop}");
    }
}

#[test]
fn ramped_pulse_keeps_its_area() {
    let tr = PulseSettings::default().ramp_time;
    let g = angular(6e6);
    let bare = std::f64::consts::PI / (2.0 * g);
    let env = PulseEnvelope::with_area(tr, bare).unwrap();
    assert_relative_eq!(env.plateau(), bare - tr, max_relative = 1e-12);
    assert_relative_eq!(env.area(), bare, max_relative = 1e-12);
}
