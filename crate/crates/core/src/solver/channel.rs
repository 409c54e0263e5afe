use serde::Serialize;

use super::{evolve_operators, ToleranceConfig};
use crate::dynamics::{schedule_duration, Phase, CAVITY, TRANSMON};
use crate::error::{Error, Result};
use crate::hilbert::{CMatrix, CVector, DensityMatrix, Embedding, HilbertSpace, C64};

/// Mode whose two lowest levels carry the logical qubit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogicalEncoding {
    pub mode: String,
}

impl LogicalEncoding {
    pub fn new(mode: &str) -> Self {
        Self { mode: mode.to_string() }
    }

    pub fn transmon() -> Self {
        Self::new(TRANSMON)
    }

    pub fn cavity() -> Self {
        Self::new(CAVITY)
    }
}

/// The six eigenstates of the Pauli operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CardinalState {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl CardinalState {
    pub const ALL: [Self; 6] = [Self::Zero, Self::One, Self::Plus, Self::Minus, Self::PlusI, Self::MinusI];

    /// Amplitudes on `|0⟩, |1⟩`.
    pub fn amplitudes(self) -> [C64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = |x: f64| C64::new(x, 0.0);
        match self {
            Self::Zero => [r(1.0), r(0.0)],
            Self::One => [r(0.0), r(1.0)],
            Self::Plus => [r(h), r(h)],
            Self::Minus => [r(h), r(-h)],
            Self::PlusI => [r(h), C64::new(0.0, h)],
            Self::MinusI => [r(h), C64::new(0.0, -h)],
        }
    }

    pub fn ket(self) -> CVector {
        CVector::from_column_slice(&self.amplitudes())
    }

    pub fn projector(self) -> CMatrix {
        let k = self.ket();
        &k * k.adjoint()
    }
}

/// Map from a logical qubit in one mode to the full state of another mode.
///
/// Stored as the images of `|i⟩⟨j|`, each reduced to the output mode.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitChannel {
    pub input: LogicalEncoding,
    pub output: LogicalEncoding,
    pub duration: f64,
    basis: [CMatrix; 4],
    outputs: Vec<DensityMatrix>,
    out_space: HilbertSpace,
}

impl QubitChannel {
    /// Builds a channel from the images of `|0⟩⟨0|, |0⟩⟨1|, |1⟩⟨0|, |1⟩⟨1|`.
    pub fn from_basis(
        input: LogicalEncoding,
        output: LogicalEncoding,
        out_space: HilbertSpace,
        basis: [CMatrix; 4],
        duration: f64,
    ) -> Result<Self> {
        let d = out_space.total_dim();
        if basis.iter().any(|b| b.nrows() != d || b.ncols() != d) {
            return Err(Error::SpaceMismatch);
        }
        let mut ch = Self { input, output, duration, basis, outputs: Vec::new(), out_space };
        ch.outputs = CardinalState::ALL
            .iter()
            .map(|s| {
                let rho = DensityMatrix::from_matrix_unchecked(&ch.out_space, ch.apply(&s.projector()));
                rho.check(1e-8, 1e-8, 1e-8)
                    .map_err(|e| Error::Numerical(format!("channel output for {s:?}: {e}")))?;
                Ok(rho)
            })
            .collect::<Result<_>>()?;
        Ok(ch)
    }

    /// Image of an arbitrary 2×2 input operator.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let d = self.out_space.total_dim();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..2 {
            for j in 0..2 {
                out += &self.basis[2 * i + j] * rho[(i, j)];
            }
        }
        out
    }

    pub fn output(&self, s: CardinalState) -> &DensityMatrix {
        let k = CardinalState::ALL.iter().position(|&c| c == s).expect("cardinal state");
        &self.outputs[k]
    }

    pub fn outputs(&self) -> &[DensityMatrix] {
        &self.outputs
    }

    pub fn output_space(&self) -> &HilbertSpace {
        &self.out_space
    }

    /// The 2×2 logical block of an output matrix.
    pub fn logical_block(m: &CMatrix) -> CMatrix {
        m.view((0, 0), (2, 2)).into_owned()
    }

    /// Image of `|i⟩⟨j|` projected onto the logical levels.
    pub fn logical_basis(&self, i: usize, j: usize) -> CMatrix {
        Self::logical_block(&self.basis[2 * i + j])
    }

    /// Population outside the logical levels, averaged over the cardinal states.
    pub fn leakage(&self) -> f64 {
        let avg: f64 = self
            .outputs
            .iter()
            .map(|r| {
                let m = r.matrix();
                (2..m.nrows()).map(|k| m[(k, k)].re).sum::<f64>()
            })
            .sum();
        (avg / 6.0).max(0.0)
    }
}

/// Runs `schedule` on every logical basis operator with all other modes empty
/// and reduces the result to the output mode.
pub fn propagate_channel(
    space: &HilbertSpace,
    schedule: &[Phase],
    input: LogicalEncoding,
    output: LogicalEncoding,
    tol: &ToleranceConfig,
) -> Result<QubitChannel> {
    tol.validate()?;
    for enc in [&input, &output] {
        if space.dim_of(&enc.mode)? < 2 {
            return Err(Error::Truncation { label: enc.mode.clone(), dim: space.dim_of(&enc.mode)?, min: 2 });
        }
    }
    let d = space.total_dim();
    let idx = |n: usize| space.fock_index(&[(input.mode.as_str(), n)]);
    let (i0, i1) = (idx(0)?, idx(1)?);
    let mut ops: Vec<CMatrix> = Vec::with_capacity(4);
    for a in [i0, i1] {
        for b in [i0, i1] {
            let mut m = CMatrix::zeros(d, d);
            m[(a, b)] = C64::new(1.0, 0.0);
            ops.push(m);
        }
    }
    for phase in schedule {
        for part in &phase.parts {
            ops = evolve_operators(part, space, &ops, tol, false)?;
        }
    }
    let emb = Embedding::new(space, &[output.mode.as_str()])?;
    let reduced: Vec<CMatrix> = ops.iter().map(|m| emb.trace_rest(m)).collect();
    let basis: [CMatrix; 4] = reduced.try_into().expect("four basis images");
    QubitChannel::from_basis(input, output, emb.sub().clone(), basis, schedule_duration(schedule))
}
