mod common;

use approx::assert_relative_eq;
use cavmem_core::dynamics::*;
use cavmem_core::fidelity::best_frame_fidelity;
use cavmem_core::hilbert::*;
use cavmem_core::model::*;
use cavmem_core::protocols::{calibrated, run_swap};
use cavmem_core::solver::*;
use common::{arch, expm_taylor, random_density, rng, KINDS};

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn trajectories_stay_physical() {
    let params = DeviceParams::default();
    let tol = ToleranceConfig::default();
    let mut r = rng(7);
    for kind in KINDS {
        let a = calibrated(&params, &arch(kind, 1e-3), &tol).unwrap();
        let mut phases = write_schedule(&params, &a).unwrap();
        phases.push(idle_phase(&params, &a, 2e-3).unwrap());
        for g in phases.iter().flat_map(|p| &p.parts) {
            let rho = random_density(&mut r, &g.space);
            let times: Vec<f64> = (1..=20).map(|k| g.duration() * k as f64 / 20.0).collect();
            for s in propagate_sampled(g, &rho, &times, &tol).unwrap() {
                assert!((s.trace() - 1.0).abs() < 1e-9, "{}: trace {}", g.name, s.trace());
                assert!(s.hermiticity_error() < 1e-9, "{}", g.name);
                assert!(s.min_eigenvalue() >= -1e-8, "{}: {}", g.name, s.min_eigenvalue());
            }
        }
    }
}

#[test]
fn constant_generators_match_dense_exponential() {
    let params = DeviceParams::default();
    let tol = ToleranceConfig::default();
    let mut r = rng(11);
    let gens = [
        direct_idle_generator(&params, &arch(ArchitectureKind::Direct, 0.01), 3e-4).unwrap(),
        coupler_idle_generator(&params, &arch(ArchitectureKind::Coupler, 0.05), 3e-4).unwrap(),
        transmon_idle_generator(&params, 3, 5e-5).unwrap(),
    ];
    for g in gens {
        let rho = random_density(&mut r, &g.space);
        let l = g.liouvillian_at(0.0).unwrap();
        let u = expm_taylor(&(l.matrix() * C64::new(g.duration(), 0.0)));
        let expected = unvectorize(&(u * vectorize(rho.matrix())), g.space.total_dim());
        let got = propagate(&g, &rho, &tol).unwrap();
        assert!(max_abs(&(got.matrix() - expected)) < 1e-8, "{}", g.name);
    }
}

/// Time-ordered product of midpoint exponentials, `slices` steps per ramp.
fn sliced_ket(g: &PhaseGenerator, psi: &CVector, slices: usize) -> CVector {
    let mut out = psi.clone();
    for seg in g.envelope.segments() {
        let n = if seg.flat.is_some() { 1 } else { slices };
        let dt = (seg.end - seg.start) / n as f64;
        for k in 0..n {
            let t = seg.start + (k as f64 + 0.5) * dt;
            let h = g.hamiltonian_at(t);
            out = expm_taylor(&(h.matrix() * C64::new(0.0, -dt))) * out;
        }
    }
    out
}

#[test]
fn ramped_pulse_matches_piecewise_constant_oracle() {
    let params = DeviceParams::default().without_decoherence();
    let tol = ToleranceConfig::default();
    let gens = [
        coupler_bs_generator(&params, &arch(ArchitectureKind::Coupler, 0.1)).unwrap(),
        sideband_generator(&params, &arch(ArchitectureKind::Direct, 0.05)).unwrap(),
    ];
    for g in gens {
        let d = g.space.total_dim();
        let psi = CVector::from_fn(d, |i, _| C64::new(((i + 1) as f64).sqrt(), 0.2 * i as f64)).normalize();
        let expected = sliced_ket(&g, &psi, 1000);
        let rho = DensityMatrix::pure(&g.space, &psi).unwrap();
        let got = propagate(&g, &rho, &tol).unwrap();
        let diff = max_abs(&(got.matrix() - &expected * expected.adjoint()));
        assert!(diff < 1e-7, "{}: {diff:e}", g.name);
    }
}

#[test]
fn halving_tolerances_leaves_fidelity_unchanged() {
    let params = DeviceParams::default();
    let tol = ToleranceConfig::default();
    let tight = ToleranceConfig { rel_tol: tol.rel_tol / 2.0, abs_tol: tol.abs_tol / 2.0, ..tol };
    for kind in KINDS {
        let a = arch(kind, 1e-3);
        let e1 = run_swap(&params, &a, &tol).unwrap().numeric;
        let e2 = run_swap(&params, &a, &tight).unwrap().numeric;
        assert!((e1 - e2).abs() < 1e-8, "{kind:?}: {e1} vs {e2}");
    }
}

#[test]
fn calibrated_ef_rotation_is_complete() {
    let params = DeviceParams::default();
    let tol = ToleranceConfig::default();
    let a = arch(ArchitectureKind::Direct, 0.01);
    let (drive, transfer) = calibrate_ef(&params, &a, &tol).unwrap();
    assert!(transfer > 1.0 - 1e-6, "{transfer}");
    let g = ef_rotation_with(&params.without_decoherence(), &a, drive.amplitude, drive.detuning).unwrap();
    assert_relative_eq!(g.duration(), 240e-9, max_relative = 1e-12);
    let stray = 1.0 - transfer_probability(&g, &[], &[], &tol).unwrap();
    assert!(stray < 1e-4, "{stray}");
}

#[test]
fn sideband_duration_from_its_area() {
    let params = DeviceParams::default().without_decoherence();
    let tol = ToleranceConfig::default();
    let a = arch(ArchitectureKind::Direct, 0.01);
    let g = sideband_generator(&params, &a).unwrap();
    let tr = a.pulse.ramp_time;
    assert!((g.duration() / (250e-9 + 2.0 * tr) - 1.0).abs() < 0.05, "{}", g.duration());
    let p = transfer_probability(&g, &[(TRANSMON, 2)], &[(CAVITY, 1)], &tol).unwrap();
    assert!(p > 1.0 - 1e-4, "{p}");
}

#[test]
fn empty_schedule_is_identity() {
    let space = HilbertSpace::new([(TRANSMON, 3), (CAVITY, 2)]).unwrap();
    let tol = ToleranceConfig::default();
    let ch = propagate_channel(&space, &[], LogicalEncoding::transmon(), LogicalEncoding::transmon(), &tol).unwrap();
    assert_eq!(best_frame_fidelity(&ch).unwrap().avg_error, 0.0);
}

#[test]
fn decoherence_free_swaps_are_perfect_transfers() {
    let params = DeviceParams::default().without_decoherence();
    let tol = ToleranceConfig::default();
    for kind in KINDS {
        let a = calibrated(&params, &arch(kind, 0.01), &tol).unwrap();
        let ch = propagate_channel(
            &a.space().unwrap(),
            &write_schedule(&params, &a).unwrap(),
            LogicalEncoding::transmon(),
            LogicalEncoding::cavity(),
            &tol,
        )
        .unwrap();
        let err = best_frame_fidelity(&ch).unwrap().avg_error;
        assert!(err < 1e-6, "{kind:?}: {err}");
    }
}

#[test]
fn channel_outputs_are_states() {
    let params = DeviceParams::default();
    let tol = ToleranceConfig::default();
    let a = arch(ArchitectureKind::Coupler, 1e-3);
    let ch = propagate_channel(
        &a.space().unwrap(),
        &write_schedule(&params, &a).unwrap(),
        LogicalEncoding::transmon(),
        LogicalEncoding::cavity(),
        &tol,
    )
    .unwrap();
    for out in ch.outputs() {
        assert!((out.trace() - 1.0).abs() < 1e-8);
        out.check(1e-9, 1e-8, 1e-8).unwrap();
    }
}
