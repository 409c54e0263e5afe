use super::{same_space, CMatrix, CVector, DensityMatrix, HilbertSpace, Operator, C64};
use crate::error::{Error, Result};

/// A dissipative contribution to a master equation.
///
/// Cross terms only exist as the symmetrized pair `S[X,Y] + S[Y,X]`, which
/// keeps Hermitian inputs Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub enum DissipativeTerm {
    Lindblad { op: Operator, rate: f64 },
    CrossPair { x: Operator, y: Operator, rate: f64 },
}

impl DissipativeTerm {
    pub fn lindblad(op: Operator, rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("Lindblad rate {rate}")));
        }
        Ok(Self::Lindblad { op, rate })
    }

    pub fn cross_pair(x: Operator, y: Operator, rate: f64) -> Result<Self> {
        same_space(&x, &y)?;
        if !rate.is_finite() {
            return Err(Error::InvalidParameter(format!("cross rate {rate}")));
        }
        Ok(Self::CrossPair { x, y, rate })
    }

    pub fn rate(&self) -> f64 {
        match self {
            Self::Lindblad { rate, .. } | Self::CrossPair { rate, .. } => *rate,
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        match self {
            Self::Lindblad { op, .. } => op.space(),
            Self::CrossPair { x, .. } => x.space(),
        }
    }

    /// Copy of the term with its rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            Self::Lindblad { op, rate } => Self::Lindblad { op: op.clone(), rate: rate * factor },
            Self::CrossPair { x, y, rate } => {
                Self::CrossPair { x: x.clone(), y: y.clone(), rate: rate * factor }
            }
        }
    }

    /// Rate-weighted action on a raw matrix of matching dimension.
    pub fn act(&self, rho: &CMatrix) -> CMatrix {
        match self {
            Self::Lindblad { op, rate } => d_raw(op.matrix(), rho) * C64::new(*rate, 0.0),
            Self::CrossPair { x, y, rate } => {
                (s_raw(x.matrix(), y.matrix(), rho) + s_raw(y.matrix(), x.matrix(), rho))
                    * C64::new(*rate, 0.0)
            }
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<Operator> {
        if self.space() != rho.space() {
            return Err(Error::SpaceMismatch);
        }
        Operator::new(rho.space().clone(), self.act(rho.matrix()))
    }

    fn superoperator(&self) -> CMatrix {
        match self {
            Self::Lindblad { op, rate } => d_super(op.matrix()) * C64::new(*rate, 0.0),
            Self::CrossPair { x, y, rate } => {
                (s_super(x.matrix(), y.matrix()) + s_super(y.matrix(), x.matrix()))
                    * C64::new(*rate, 0.0)
            }
        }
    }
}

fn d_raw(l: &CMatrix, rho: &CMatrix) -> CMatrix {
    let ld = l.adjoint();
    let ldl = &ld * l;
    l * rho * &ld - (&ldl * rho + rho * &ldl) * C64::new(0.5, 0.0)
}

fn s_raw(x: &CMatrix, y: &CMatrix, rho: &CMatrix) -> CMatrix {
    let yd = y.adjoint();
    let ydx = &yd * x;
    x * rho * &yd - (&ydx * rho + rho * &ydx) * C64::new(0.5, 0.0)
}

fn left(a: &CMatrix) -> CMatrix {
    CMatrix::identity(a.nrows(), a.nrows()).kronecker(a)
}

fn right(b: &CMatrix) -> CMatrix {
    b.transpose().kronecker(&CMatrix::identity(b.nrows(), b.nrows()))
}

fn s_super(x: &CMatrix, y: &CMatrix) -> CMatrix {
    let ydx = y.adjoint() * x;
    y.conjugate().kronecker(x) - (left(&ydx) + right(&ydx)) * C64::new(0.5, 0.0)
}

fn d_super(l: &CMatrix) -> CMatrix {
    s_super(l, l)
}

/// `D[L]ρ = LρL† − ½{L†L, ρ}`.
pub fn dissipator_action(l: &Operator, rho: &DensityMatrix) -> Result<Operator> {
    if l.space() != rho.space() {
        return Err(Error::SpaceMismatch);
    }
    Operator::new(rho.space().clone(), d_raw(l.matrix(), rho.matrix()))
}

/// `S[X,Y]ρ = XρY† − ½(Y†Xρ + ρY†X)`.
pub fn cross_action(x: &Operator, y: &Operator, rho: &DensityMatrix) -> Result<Operator> {
    same_space(x, y)?;
    if x.space() != rho.space() {
        return Err(Error::SpaceMismatch);
    }
    Operator::new(rho.space().clone(), s_raw(x.matrix(), y.matrix(), rho.matrix()))
}

/// Relaxation and excitation by a bath at occupation `nbar`.
pub fn thermal_terms(o: &Operator, gamma: f64, nbar: f64) -> Result<Vec<DissipativeTerm>> {
    if !(gamma >= 0.0) || !(nbar >= 0.0) {
        return Err(Error::InvalidParameter(format!("thermal rate {gamma}, occupation {nbar}")));
    }
    let mut terms = vec![DissipativeTerm::lindblad(o.clone(), gamma * (nbar + 1.0))?];
    if nbar > 0.0 {
        terms.push(DissipativeTerm::lindblad(o.adjoint(), gamma * nbar)?);
    }
    Ok(terms)
}

/// Column-stacked vectorization of a square matrix.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, dim: usize) -> CMatrix {
    CMatrix::from_column_slice(dim, dim, v.as_slice())
}

/// Matrix acting on column-stacked density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d2 = space.total_dim() * space.total_dim();
        if matrix.nrows() != d2 || matrix.ncols() != d2 {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let d2 = space.total_dim() * space.total_dim();
        Self { space: space.clone(), matrix: CMatrix::identity(d2, d2) }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        unvectorize(&(&self.matrix * vectorize(rho)), self.space.total_dim())
    }

    /// Dual map applied to an observable: `Tr[O · 𝓛ρ] = Tr[𝓛†(O) · ρ]`.
    pub fn apply_adjoint(&self, obs: &CMatrix) -> CMatrix {
        let d = self.space.total_dim();
        // Tr[O X] = vec(Oᵀ)ᵀ vec(X), so the dual acts as Mᵀ on vec(Oᵀ)
        let v = self.matrix.transpose() * vectorize(&obs.transpose());
        unvectorize(&v, d).transpose()
    }
}

/// Generator `M` with `vec(ρ̇) = M vec(ρ)` for `ρ̇ = −i[H,ρ] + Σ terms`.
pub fn liouvillian(h: &Operator, terms: &[DissipativeTerm]) -> Result<Superoperator> {
    let mut m = (left(h.matrix()) - right(h.matrix())) * C64::new(0.0, -1.0);
    for term in terms {
        if term.space() != h.space() {
            return Err(Error::SpaceMismatch);
        }
        m += term.superoperator();
    }
    Ok(Superoperator { space: h.space().clone(), matrix: m })
}

#[cfg(test)]
mod tests {
    use super::super::{annihilator, number};
    use super::*;
    use approx::assert_relative_eq;

    fn qubit() -> HilbertSpace {
        HilbertSpace::new([("a", 2)]).unwrap()
    }

    #[test]
    fn decay_of_single_photon() {
        let s = qubit();
        let a = annihilator(&s, "a").unwrap();
        let rho = DensityMatrix::fock(&s, &[("a", 1)]).unwrap();
        let out = dissipator_action(&a, &rho).unwrap();
        assert_relative_eq!(out.matrix()[(0, 0)].re, 1.0);
        assert_relative_eq!(out.matrix()[(1, 1)].re, -1.0);
        let vac = DensityMatrix::fock(&s, &[]).unwrap();
        assert_eq!(dissipator_action(&a, &vac).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn pure_dephasing_halves_coherence() {
        let s = qubit();
        let n = number(&s, "a").unwrap();
        let plus = CMatrix::from_element(2, 2, C64::new(0.5, 0.0));
        let rho = DensityMatrix::new(Operator::new(s, plus).unwrap()).unwrap();
        let out = dissipator_action(&n, &rho).unwrap();
        assert_relative_eq!(out.matrix()[(0, 1)].re, -0.25);
        assert_relative_eq!(out.matrix()[(1, 0)].re, -0.25);
        assert_eq!(out.matrix()[(0, 0)].norm(), 0.0);
        assert_eq!(out.matrix()[(1, 1)].norm(), 0.0);
    }

    #[test]
    fn cross_with_identity_is_half_commutator() {
        let s = HilbertSpace::new([("a", 3)]).unwrap();
        let a = annihilator(&s, "a").unwrap();
        let x = &a + &a.adjoint();
        let id = Operator::identity(&s);
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = C64::new(0.6, 0.0);
        m[(1, 1)] = C64::new(0.4, 0.0);
        m[(0, 1)] = C64::new(0.2, 0.1);
        m[(1, 0)] = C64::new(0.2, -0.1);
        let rho = DensityMatrix::new(Operator::new(s, m.clone()).unwrap()).unwrap();
        let out = cross_action(&x, &id, &rho).unwrap();
        let comm = (x.matrix() * &m - &m * x.matrix()) * C64::new(0.5, 0.0);
        assert_relative_eq!((out.matrix() - comm).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn thermal_rates() {
        let s = qubit();
        let a = annihilator(&s, "a").unwrap();
        let terms = thermal_terms(&a, 100.0, 1e-4).unwrap();
        assert_eq!(terms.len(), 2);
        assert_relative_eq!(terms[0].rate(), 100.01, epsilon = 1e-12);
        assert_relative_eq!(terms[1].rate(), 0.01, epsilon = 1e-15);
        assert_eq!(thermal_terms(&a, 100.0, 0.0).unwrap().len(), 1);
        assert!(thermal_terms(&a, -1.0, 0.0).is_err());
        assert!(thermal_terms(&a, 1.0, -0.1).is_err());
    }

    #[test]
    fn liouvillian_of_nothing_is_zero() {
        let s = qubit();
        let l = liouvillian(&Operator::zeros(&s), &[]).unwrap();
        assert_eq!(l.matrix().iter().map(|z| z.norm()).sum::<f64>(), 0.0);
    }

    #[test]
    fn diagonal_hamiltonian_gives_imaginary_diagonal() {
        let s = HilbertSpace::new([("a", 3)]).unwrap();
        let h = &number(&s, "a").unwrap() * 2.5;
        let l = liouvillian(&h, &[]).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let z = l.matrix()[(i, j)];
                if i == j {
                    assert_eq!(z.re, 0.0);
                } else {
                    assert_eq!(z.norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let m = CMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64, 0.0));
        let v = vectorize(&m);
        assert_eq!(v[1].re, 1.0);
        assert_eq!(v[2].re, 2.0);
        assert_eq!(unvectorize(&v, 2), m);
    }

    #[test]
    fn adjoint_of_trace_preserving_map_fixes_identity() {
        let s = HilbertSpace::new([("a", 3)]).unwrap();
        let a = annihilator(&s, "a").unwrap();
        let l = liouvillian(&number(&s, "a").unwrap(), &thermal_terms(&a, 2.0, 0.1).unwrap())
            .unwrap();
        let out = l.apply_adjoint(&CMatrix::identity(3, 3));
        assert!(out.norm() < 1e-14);
    }
}
