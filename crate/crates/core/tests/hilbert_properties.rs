mod common;

use cavmem_core::hilbert::*;
use common::{random_density, random_hermitian, rng};
use proptest::prelude::*;

fn two_modes() -> HilbertSpace {
    HilbertSpace::new([("q", 3), ("a", 2)]).unwrap()
}

fn terms(space: &HilbertSpace) -> Vec<DissipativeTerm> {
    let q = annihilator(space, "q").unwrap();
    let a = annihilator(space, "a").unwrap();
    let nq = number(space, "q").unwrap();
    let na = number(space, "a").unwrap();
    let mut t = thermal_terms(&q, 0.7, 0.05).unwrap();
    t.extend(thermal_terms(&a, 0.2, 0.0).unwrap());
    t.push(DissipativeTerm::lindblad(nq.clone(), 0.4).unwrap());
    t.push(DissipativeTerm::lindblad(&a.adjoint() * &q, 0.3).unwrap());
    t.push(DissipativeTerm::cross_pair(na, nq, 0.25).unwrap());
    t
}

fn direct_action(h: &Operator, terms: &[DissipativeTerm], rho: &CMatrix) -> CMatrix {
    let i = C64::new(0.0, 1.0);
    let mut out = (h.matrix() * rho - rho * h.matrix()) * -i;
    for t in terms {
        out += t.act(rho);
    }
    out
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dissipators_annihilate_trace(seed in any::<u64>()) {
        let s = two_modes();
        let x = random_hermitian(&mut rng(seed), s.total_dim());
        for t in terms(&s) {
            prop_assert!(t.act(&x).trace().norm() < 1e-12);
        }
    }

    #[test]
    fn dissipators_keep_hermiticity(seed in any::<u64>()) {
        let s = two_modes();
        let rho = random_density(&mut rng(seed), &s);
        for t in terms(&s) {
            let out = t.apply(&rho).unwrap();
            prop_assert!(out.hermiticity_error() < 1e-12);
        }
        let q = annihilator(&s, "q").unwrap();
        prop_assert!(dissipator_action(&q, &rho).unwrap().hermiticity_error() < 1e-12);
        let (na, nq) = (number(&s, "a").unwrap(), number(&s, "q").unwrap());
        let pair = &cross_action(&na, &nq, &rho).unwrap() + &cross_action(&nq, &na, &rho).unwrap();
        prop_assert!(pair.hermiticity_error() < 1e-12);
    }

    #[test]
    fn liouvillian_matches_direct_action(seed in any::<u64>()) {
        let s = two_modes();
        let mut r = rng(seed);
        let h = Operator::new(s.clone(), random_hermitian(&mut r, s.total_dim())).unwrap();
        let t = terms(&s);
        let l = liouvillian(&h, &t).unwrap();
        for _ in 0..100 {
            let rho = random_density(&mut r, &s);
            let diff = l.apply(rho.matrix()) - direct_action(&h, &t, rho.matrix());
            prop_assert!(max_abs(&diff) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>()) {
        let s = HilbertSpace::new([("q", 3), ("b", 2), ("a", 3)]).unwrap();
        let rho = random_density(&mut rng(seed), &s);
        for keep in [vec!["q"], vec!["a"], vec!["b", "a"], vec!["a", "q"]] {
            let red = partial_trace(&rho, &keep).unwrap();
            prop_assert!((red.trace() - rho.trace()).abs() < 1e-12);
            prop_assert!(red.min_eigenvalue() > -1e-12);
        }
    }
}

#[test]
fn vacuum_of_damped_mode_is_stationary() {
    let s = HilbertSpace::new([("a", 4)]).unwrap();
    let a = annihilator(&s, "a").unwrap();
    let l = liouvillian(&Operator::zeros(&s), &thermal_terms(&a, 3.0, 0.0).unwrap()).unwrap();
    let vac = DensityMatrix::fock(&s, &[]).unwrap();
    assert!(max_abs(&l.apply(vac.matrix())) < 1e-10);
}

#[test]
fn single_photon_decay_rate_in_spectrum() {
    let s = HilbertSpace::new([("a", 2)]).unwrap();
    let a = annihilator(&s, "a").unwrap();
    let kappa = 2.5;
    let l = liouvillian(&Operator::zeros(&s), &[DissipativeTerm::lindblad(a, kappa).unwrap()]).unwrap();
    let eig = l.matrix().clone().eigenvalues().unwrap();
    assert!(eig.iter().any(|z| (z - C64::new(-kappa, 0.0)).norm() < 1e-12), "{eig}");
    assert!(eig.iter().any(|z| (z - C64::new(-kappa / 2.0, 0.0)).norm() < 1e-12));
}
