mod common;

use cavmem_core::dynamics::*;
use cavmem_core::fidelity::*;
use cavmem_core::hilbert::*;
use cavmem_core::model::*;
use cavmem_core::protocols::*;
use cavmem_core::solver::ToleranceConfig;
use common::{random_matrix, rng};
use proptest::prelude::*;

#[test]
fn qft_sums_match_brute_force() {
    let params = DeviceParams::default();
    let s = QftSettings::default();
    let b = qft_budget(&params, &s, 100, false).unwrap();
    let kt = kappa_total(&params.clone().with_kappa(1.0 / s.cavity_t1), Participation::new(s.participation).unwrap());
    for k in 3..=100 {
        let odd: usize = (3..=k).map(|j| 2 * j - 3).sum();
        assert_eq!(odd, k * (k - 2));
        let head = &b.qubits[..k - 2];
        let mem: f64 = head.iter().map(|q| q.eps_mem).sum();
        let tmon: f64 = head.iter().map(|q| q.eps_tmon).sum();
        let mem_cf = cumulative_memory_error(kt, s.swap_error, k, s.gate_time, s.swap_time);
        assert!((mem / mem_cf - 1.0).abs() < 1e-12, "k = {k}");
        assert!((tmon / cumulative_transmon_error(&params, k, s.gate_time) - 1.0).abs() < 1e-12, "k = {k}");
        let gates: f64 = (0..k).map(|_| s.eps_1q).sum::<f64>() + (0..k * (k - 1)).map(|_| s.eps_2q).sum::<f64>();
        assert!((gate_error(k, s.eps_1q, s.eps_2q) / gates - 1.0).abs() < 1e-12);
    }
    let b12 = qft_budget(&params, &s, 12, false).unwrap();
    assert_eq!(b12.eps_m, b12.qubits.iter().map(|q| q.eps_mem).sum::<f64>());
}

/// Random qubit channel from two Kraus operators, `K₁ = U·diag(c₀, c₁)` and
/// `K₂ = V·diag(s₀, s₁)` with `c² + s² = 1`.
fn random_kraus(seed: u64) -> Vec<CMatrix> {
    let mut r = rng(seed);
    let q = |m: CMatrix| m.qr().q();
    let (u, v) = (q(random_matrix(&mut r, 2)), q(random_matrix(&mut r, 2)));
    let a = random_matrix(&mut r, 2);
    let (t0, t1) = (a[(0, 0)].re.abs(), a[(1, 1)].re.abs());
    let diag = |x: f64, y: f64| CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(x, 0.0), C64::new(y, 0.0)]));
    vec![u * diag(t0.cos(), t1.cos()), v * diag(t0.sin(), t1.sin())]
}

fn map_of(kraus: &[CMatrix]) -> LogicalMap {
    let basis = [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(i, j)| {
        let mut e = CMatrix::zeros(2, 2);
        e[(i, j)] = C64::new(1.0, 0.0);
        kraus.iter().map(|k| k * &e * k.adjoint()).fold(CMatrix::zeros(2, 2), |acc, m| acc + m)
    });
    LogicalMap { basis }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_maps_compose_as_tensor_products(sa in any::<u64>(), sb in any::<u64>(), sr in any::<u64>()) {
        let (ka, kb) = (random_kraus(sa), random_kraus(sb));
        let mut r = rng(sr);
        let x = random_matrix(&mut r, 4);
        let rho = &x * x.adjoint();
        let rho = &rho / rho.trace();
        let mut direct = CMatrix::zeros(4, 4);
        for a in &ka {
            for b in &kb {
                let k = a.kronecker(b);
                direct += &k * &rho * k.adjoint();
            }
        }
        let composed = apply_pair(&map_of(&ka), &map_of(&kb), &rho).unwrap();
        prop_assert!((composed - &direct).norm() < 1e-10);
        let ident = apply_pair(&LogicalMap::identity(), &LogicalMap::identity(), &rho).unwrap();
        prop_assert!((ident - rho).norm() < 1e-14);
    }

    #[test]
    fn analytic_optimum_respects_bounds(lt in (5e-6f64).ln()..(1e-1f64).ln(), coupler in any::<bool>()) {
        let params = DeviceParams::default().with_kappa(1.0);
        let kind = if coupler { ArchitectureKind::Coupler } else { ArchitectureKind::Direct };
        let t_m = lt.exp();
        let a = common::arch(kind, 0.1);
        let (best, errs) = optimize_participation_analytic(&params, &a, t_m).unwrap();
        prop_assert!(best.storage_participation().value() <= MAX_PARTICIPATION);
        let crit = a.with_storage_participation(Participation::new(critical_participation(&params, kind)).unwrap());
        prop_assert!(errs.total <= analytic_objective(&params, &crit, t_m) * (1.0 + 1e-12));
    }
}

#[test]
fn cascade_optimum_respects_bounds() {
    let params = DeviceParams::default().with_kappa(1.0);
    let a = common::arch(ArchitectureKind::Cascade, 0.1);
    for t_m in [1e-5, 1e-3] {
        let (best, errs) = optimize_participation_analytic(&params, &a, t_m).unwrap();
        for p in [best.storage_participation(), best.links.buffer_qubit, best.links.buffer_coupler] {
            assert!(p.value() <= MAX_PARTICIPATION);
        }
        let crit = a.with_storage_participation(Participation::new(critical_participation(&params, a.kind)).unwrap());
        assert!(errs.total <= analytic_objective(&params, &crit, t_m) * (1.0 + 1e-12));
    }
}

#[test]
fn storage_limit_grows_with_target() {
    let params = DeviceParams::default();
    for dephasing in [false, true] {
        let mut last = 0.0;
        for target in [1e-4, 3e-4, 1e-3, 3e-3, 1e-2] {
            let t = max_memory_time(&params, ArchitectureKind::Coupler, target, dephasing).unwrap().t_m_max().unwrap();
            assert!(t > last, "target {target}: {t:e} after {last:e}");
            last = t;
        }
    }
}

#[test]
fn memory_errors_are_consistent() {
    let params = DeviceParams::default().with_kappa(1e2);
    let tol = ToleranceConfig::default();
    for kind in [ArchitectureKind::Direct, ArchitectureKind::Coupler, ArchitectureKind::Cascade] {
        let a = common::arch(kind, 0.02);
        let r = simulate_memory(&params, &a, 5e-6, &tol).unwrap();
        let clean = simulate_memory(&params.without_decoherence(), &a, 5e-6, &tol).unwrap();
        assert!(clean.eps_total < 1e-5, "{kind:?}: {:e}", clean.eps_total);
        assert!(r.eps_total >= clean.eps_total, "{kind:?}");
        assert!(r.eps_total >= r.eps_write.max(r.eps_read), "{kind:?}: {r:?}");
        for e in [r.eps_total, r.eps_write, r.eps_read, r.eps_idle] {
            assert!((0.0..=1.0).contains(&e));
        }
        assert!((r.t_i + 2.0 * r.swap_duration - r.t_m).abs() < 1e-15);
    }
}

#[test]
fn too_short_memory_is_rejected() {
    let params = DeviceParams::default();
    let a = common::arch(ArchitectureKind::Coupler, 0.1);
    let t_min = 2.0 * AnalyticControlModel::for_arch(&params, &a, 0.0).unwrap().swap_time();
    assert!(simulate_memory(&params, &a, 0.5 * t_min, &ToleranceConfig::default()).is_err());
    assert!(MemorySpec::new(a, -1.0, ParticipationMode::Fixed).is_err());
}

#[test]
fn bell_pair_without_storage_is_perfect() {
    let params = DeviceParams::default().without_decoherence();
    let r = bell_protocol(&params, &common::arch(ArchitectureKind::Coupler, 0.1), 1e-6, Swapped::None, &ToleranceConfig::default())
        .unwrap();
    assert!((1.0 - r.fidelity).abs() < 1e-10 && (1.0 - r.concurrence).abs() < 1e-8, "{r:?}");
    assert!((bell_fidelity(&phi_plus()) - 1.0).abs() < 1e-15);
}
