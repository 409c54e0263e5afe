#![allow(dead_code)]

use cavmem_core::dynamics::{ArchitectureConfig, ArchitectureKind};
use cavmem_core::hilbert::{CMatrix, DensityMatrix, HilbertSpace, Operator, C64};
use cavmem_core::model::Participation;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut StdRng, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut StdRng, d: usize) -> CMatrix {
    let a = random_matrix(rng, d);
    (&a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Full-rank density matrix `A A† / Tr(A A†)`.
pub fn random_density(rng: &mut StdRng, space: &HilbertSpace) -> DensityMatrix {
    let a = random_matrix(rng, space.total_dim());
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityMatrix::new(Operator::new(space.clone(), m / tr).unwrap()).unwrap()
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm_taylor(m: &CMatrix) -> CMatrix {
    let norm: f64 = m.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let s = norm.log2().ceil().max(0.0) as i32 + 1;
    let a = m / C64::new(2f64.powi(s), 0.0);
    let n = m.nrows();
    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=30 {
        term = &term * &a / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn arch(kind: ArchitectureKind, p: f64) -> ArchitectureConfig {
    let p = Participation::new(p).unwrap();
    let m = Participation::max();
    match kind {
        ArchitectureKind::Direct => ArchitectureConfig::direct(p),
        ArchitectureKind::Coupler => ArchitectureConfig::coupler(p),
        ArchitectureKind::Cascade => ArchitectureConfig::cascade(p, m, m),
    }
}

pub const KINDS: [ArchitectureKind; 3] = [ArchitectureKind::Direct, ArchitectureKind::Coupler, ArchitectureKind::Cascade];
