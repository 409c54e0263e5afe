//! Truncated multimode Fock spaces, dense operators and Lindblad algebra.
//!
//! Tensor products follow the order in which modes are listed: the first
//! mode is the most significant digit of a basis index. Density matrices are
//! vectorized by column stacking, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

mod density;
mod superop;

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use density::{partial_trace, DensityMatrix};
pub use superop::{
    cross_action, dissipator_action, liouvillian, thermal_terms, unvectorize, vectorize,
    DissipativeTerm, Superoperator,
};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// One bosonic or anharmonic mode truncated to `dim` Fock levels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub label: String,
    pub dim: usize,
}

/// Ordered collection of modes with unique labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    modes: Vec<Mode>,
    total_dim: usize,
}

impl HilbertSpace {
    pub fn new<S: Into<String>>(modes: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut out: Vec<Mode> = Vec::new();
        for (label, dim) in modes {
            let label = label.into();
            if out.iter().any(|m| m.label == label) {
                return Err(Error::DuplicateMode(label));
            }
            if dim == 0 {
                return Err(Error::Truncation { label, dim, min: 1 });
            }
            out.push(Mode { label, dim });
        }
        let total_dim = out.iter().map(|m| m.dim).product();
        Ok(Self { modes: out, total_dim })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn labels(&self) -> Vec<&str> {
        self.modes.iter().map(|m| m.label.as_str()).collect()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.label == label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.modes[self.position(label)?].dim)
    }

    /// Space built from a subset of modes, in the order given.
    pub fn subspace(&self, labels: &[&str]) -> Result<Self> {
        let mut modes = Vec::with_capacity(labels.len());
        for l in labels {
            modes.push((l.to_string(), self.dim_of(l)?));
        }
        Self::new(modes)
    }

    /// Basis index of a product of Fock states, one occupation per mode.
    pub fn basis_index(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.modes.len() {
            return Err(Error::InvalidState(format!(
                "{} occupations for {} modes",
                occupations.len(),
                self.modes.len()
            )));
        }
        let mut idx = 0;
        for (m, &n) in self.modes.iter().zip(occupations) {
            if n >= m.dim {
                return Err(Error::InvalidState(format!(
                    "level {n} outside truncation {} of mode `{}`",
                    m.dim, m.label
                )));
            }
            idx = idx * m.dim + n;
        }
        Ok(idx)
    }

    /// Inverse of [`basis_index`](Self::basis_index).
    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes.len()];
        for (k, m) in self.modes.iter().enumerate().rev() {
            occ[k] = index % m.dim;
            index /= m.dim;
        }
        occ
    }

    /// Basis index for named occupations, all other modes in their ground state.
    pub fn fock_index(&self, occupied: &[(&str, usize)]) -> Result<usize> {
        let mut occ = vec![0; self.modes.len()];
        for (label, n) in occupied {
            occ[self.position(label)?] = *n;
        }
        self.basis_index(&occ)
    }

    /// Lifts a single-mode matrix to the full space with identities elsewhere.
    pub fn embed_local(&self, label: &str, local: &CMatrix) -> Result<Operator> {
        let pos = self.position(label)?;
        let dim = self.modes[pos].dim;
        if local.nrows() != dim || local.ncols() != dim {
            return Err(Error::SpaceMismatch);
        }
        let mut m = CMatrix::identity(1, 1);
        for (k, mode) in self.modes.iter().enumerate() {
            let factor = if k == pos { local.clone() } else { CMatrix::identity(mode.dim, mode.dim) };
            m = m.kronecker(&factor);
        }
        Ok(Operator { space: self.clone(), matrix: m })
    }
}

fn ladder_matrix(dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Annihilation operator of `label`, tensored with identities on other modes.
pub fn annihilator(space: &HilbertSpace, label: &str) -> Result<Operator> {
    let dim = space.dim_of(label)?;
    if dim < 2 {
        return Err(Error::Truncation { label: label.to_string(), dim, min: 2 });
    }
    space.embed_local(label, &ladder_matrix(dim))
}

pub fn creator(space: &HilbertSpace, label: &str) -> Result<Operator> {
    Ok(annihilator(space, label)?.adjoint())
}

pub fn number(space: &HilbertSpace, label: &str) -> Result<Operator> {
    let a = annihilator(space, label)?;
    Ok(&a.adjoint() * &a)
}

/// Dense operator on a [`HilbertSpace`].
///
/// Arithmetic via `+`, `-`, `*` panics when the operands live on different
/// spaces; use [`Operator::compose`] for a checked product.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self { space: space.clone(), matrix: CMatrix::identity(d, d) }
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self { space: space.clone(), matrix: CMatrix::zeros(d, d) }
    }

    /// Outer product `|i⟩⟨j|` of two basis states.
    pub fn basis_projector(space: &HilbertSpace, i: usize, j: usize) -> Self {
        let mut op = Self::zeros(space);
        op.matrix[(i, j)] = C64::new(1.0, 0.0);
        op
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

    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        same_space(self, rhs)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix * &rhs.matrix })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::identity(&self.space);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }
}

pub(crate) fn same_space(a: &Operator, b: &Operator) -> Result<()> {
    if a.space == b.space {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                assert_eq!(self.space, rhs.space, "operands act on different Hilbert spaces");
                Operator { space: self.space.clone(), matrix: &self.matrix $op &rhs.matrix }
            }
        }
        impl $trait<Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                &self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        Operator { space: self.space.clone(), matrix: &self.matrix * rhs }
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self * C64::new(rhs, 0.0)
    }
}

impl Mul<f64> for Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        &self * rhs
    }
}

impl Mul<C64> for Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        &self * rhs
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self * -1.0
    }
}

/// Index bookkeeping for a subset of modes inside a larger space.
///
/// Basis index `i` of the full space splits into a sub index `s(i)` over the
/// selected modes (in the order given) and a rest index `r(i)` over the
/// remaining modes. A full density matrix is then a `d_r × d_r` grid of
/// `d_s × d_s` blocks; [`gather`](Self::gather) lays those blocks out as
/// column-stacked vectors so a subspace superoperator acts on all of them
/// with a single matrix product.
#[derive(Clone, Debug)]
pub struct Embedding {
    sub: HilbertSpace,
    full: HilbertSpace,
    sub_dim: usize,
    rest_dim: usize,
    // full index for (s, r), stored as s + sub_dim * r
    index: Vec<usize>,
}

impl Embedding {
    pub fn new(full: &HilbertSpace, labels: &[&str]) -> Result<Self> {
        let sub = full.subspace(labels)?;
        let sub_pos: Vec<usize> = labels.iter().map(|l| full.position(l)).collect::<Result<_>>()?;
        let rest_pos: Vec<usize> = (0..full.modes().len()).filter(|k| !sub_pos.contains(k)).collect();
        let rest_dims: Vec<usize> = rest_pos.iter().map(|&k| full.modes()[k].dim).collect();
        let sub_dim = sub.total_dim();
        let rest_dim: usize = rest_dims.iter().product();
        let mut index = vec![0; sub_dim * rest_dim];
        for i in 0..full.total_dim() {
            let occ = full.occupations(i);
            let mut s = 0;
            for &k in &sub_pos {
                s = s * full.modes()[k].dim + occ[k];
            }
            let mut r = 0;
            for (&k, &d) in rest_pos.iter().zip(&rest_dims) {
                r = r * d + occ[k];
            }
            index[s + sub_dim * r] = i;
        }
        Ok(Self { sub, full: full.clone(), sub_dim, rest_dim, index })
    }

    pub fn sub(&self) -> &HilbertSpace {
        &self.sub
    }

    pub fn full(&self) -> &HilbertSpace {
        &self.full
    }

    pub fn sub_dim(&self) -> usize {
        self.sub_dim
    }

    pub fn rest_dim(&self) -> usize {
        self.rest_dim
    }

    fn at(&self, s: usize, r: usize) -> usize {
        self.index[s + self.sub_dim * r]
    }

    /// Rearranges `rho` into a `d_s² × d_r²` matrix whose column `r + d_r r'`
    /// is the vectorized block `⟨s, r|ρ|s', r'⟩`.
    pub fn gather(&self, rho: &CMatrix) -> CMatrix {
        let (ds, dr) = (self.sub_dim, self.rest_dim);
        CMatrix::from_fn(ds * ds, dr * dr, |row, col| {
            let (s, sp) = (row % ds, row / ds);
            let (r, rp) = (col % dr, col / dr);
            rho[(self.at(s, r), self.at(sp, rp))]
        })
    }

    /// Inverse of [`gather`](Self::gather).
    pub fn scatter(&self, blocks: &CMatrix) -> CMatrix {
        let (ds, dr) = (self.sub_dim, self.rest_dim);
        let d = self.full.total_dim();
        let mut rho = CMatrix::zeros(d, d);
        for col in 0..dr * dr {
            let (r, rp) = (col % dr, col / dr);
            for row in 0..ds * ds {
                let (s, sp) = (row % ds, row / ds);
                rho[(self.at(s, r), self.at(sp, rp))] = blocks[(row, col)];
            }
        }
        rho
    }

    /// Trace over the rest modes, leaving a matrix on the sub space.
    pub fn trace_rest(&self, rho: &CMatrix) -> CMatrix {
        let ds = self.sub_dim;
        CMatrix::from_fn(ds, ds, |s, sp| {
            (0..self.rest_dim).map(|r| rho[(self.at(s, r), self.at(sp, r))]).sum()
        })
    }

    /// Lifts a sub-space operator to the full space (identity on the rest).
    pub fn lift(&self, op: &CMatrix) -> CMatrix {
        let d = self.full.total_dim();
        let mut out = CMatrix::zeros(d, d);
        for r in 0..self.rest_dim {
            for s in 0..self.sub_dim {
                for sp in 0..self.sub_dim {
                    out[(self.at(s, r), self.at(sp, r))] = op[(s, sp)];
                }
            }
        }
        out
    }
}
