use nalgebra::SymmetricEigen;

use super::{max_abs, same_space, CMatrix, CVector, Embedding, HilbertSpace, Operator, C64};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    operator: Operator,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity at the default tolerances.
    pub fn new(operator: Operator) -> Result<Self> {
        let rho = Self { operator };
        rho.check(HERMITIAN_TOL, TRACE_TOL, POSITIVITY_TOL)?;
        Ok(rho)
    }

    pub fn check(&self, herm_tol: f64, trace_tol: f64, pos_tol: f64) -> Result<()> {
        let herm = self.operator.hermiticity_error();
        if !(herm <= herm_tol) {
            return Err(Error::InvalidState(format!("non-Hermitian by {herm:.3e}")));
        }
        let tr = self.operator.trace();
        if !((tr.re - 1.0).abs() <= trace_tol && tr.im.abs() <= trace_tol) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let lmin = self.min_eigenvalue();
        if !(lmin >= -pos_tol) {
            return Err(Error::InvalidState(format!("negative eigenvalue {lmin:.3e}")));
        }
        Ok(())
    }

    /// Wraps a matrix without validation; callers vouch for the invariants.
    pub(crate) fn from_matrix_unchecked(space: &HilbertSpace, matrix: CMatrix) -> Self {
        Self { operator: Operator { space: space.clone(), matrix } }
    }

    pub fn pure(space: &HilbertSpace, ket: &CVector) -> Result<Self> {
        if ket.len() != space.total_dim() {
            return Err(Error::SpaceMismatch);
        }
        let norm = ket.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let k = ket / C64::new(norm, 0.0);
        Self::new(Operator::new(space.clone(), &k * k.adjoint())?)
    }

    /// Product Fock state with the named occupations and every other mode empty.
    pub fn fock(space: &HilbertSpace, occupied: &[(&str, usize)]) -> Result<Self> {
        let i = space.fock_index(occupied)?;
        Ok(Self { operator: Operator::basis_projector(space, i, i) })
    }

    pub fn maximally_mixed(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self { operator: &Operator::identity(space) * (1.0 / d as f64) }
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn matrix(&self) -> &CMatrix {
        self.operator.matrix()
    }

    pub fn space(&self) -> &HilbertSpace {
        self.operator.space()
    }

    pub fn trace(&self) -> f64 {
        self.operator.trace().re
    }

    pub fn purity(&self) -> f64 {
        let m = self.matrix();
        (m * m).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.matrix();
        let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(herm).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        same_space(&self.operator, op)?;
        Ok((self.matrix() * op.matrix()).trace())
    }

    /// Population of a basis state given as named occupations.
    pub fn population(&self, occupied: &[(&str, usize)]) -> Result<f64> {
        let i = self.space().fock_index(occupied)?;
        Ok(self.matrix()[(i, i)].re)
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(self.matrix() - self.matrix().adjoint()))
    }
}

/// Reduced state on the modes in `keep`, ordered as listed.
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    let emb = Embedding::new(rho.space(), keep)?;
    let reduced = emb.trace_rest(rho.matrix());
    Ok(DensityMatrix::from_matrix_unchecked(emb.sub(), reduced))
}
