use crate::dynamics::{lift_term, Phase};
use crate::error::{Error, Result};
use crate::hilbert::{CMatrix, DissipativeTerm, Embedding, HilbertSpace, Operator};
use crate::numeric::gauss_legendre;
use crate::solver::{CardinalState, LogicalEncoding, Piecewise, ToleranceConfig};

const NODES: usize = 64;

/// Dissipators active during one phase: always-on and pump-weighted (`s²`).
type PhaseTerms = (Vec<DissipativeTerm>, Vec<DissipativeTerm>);

fn initial_kets(space: &HilbertSpace, encoding: &LogicalEncoding) -> Result<CMatrix> {
    let i0 = space.fock_index(&[(encoding.mode.as_str(), 0)])?;
    let i1 = space.fock_index(&[(encoding.mode.as_str(), 1)])?;
    let mut x = CMatrix::zeros(space.total_dim(), 6);
    for (k, s) in CardinalState::ALL.iter().enumerate() {
        let [a, b] = s.amplitudes();
        x[(i0, k)] = a;
        x[(i1, k)] = b;
    }
    Ok(x)
}

/// Cardinal-averaged loss rate `−⟨ψ|𝒟(|ψ⟩⟨ψ|)|ψ⟩` of a set of terms.
fn loss_rate(kets: &CMatrix, terms: &[DissipativeTerm]) -> f64 {
    let mut total = 0.0;
    for k in 0..kets.ncols() {
        let psi = kets.column(k);
        let rho = &psi * psi.adjoint();
        for t in terms {
            total -= (psi.adjoint() * t.act(&rho) * psi)[(0, 0)].re;
        }
    }
    total / kets.ncols() as f64
}

fn phase_piecewise(space: &HilbertSpace, phase: &Phase, tol: &ToleranceConfig) -> Result<Piecewise> {
    let d = space.total_dim();
    let mut hs = CMatrix::zeros(d, d);
    let mut hd = CMatrix::zeros(d, d);
    let mut step = f64::INFINITY;
    for part in &phase.parts {
        let emb = Embedding::new(space, &part.labels())?;
        hs += emb.lift(part.h_static.matrix());
        hd += emb.lift(part.h_drive.matrix());
        step = step.min(Piecewise::step_limit(part, tol));
    }
    Ok(Piecewise::from_hamiltonians(&hs, &hd, phase.lead().envelope, step))
}

fn integrate_jumps(
    space: &HilbertSpace,
    schedule: &[Phase],
    encoding: &LogicalEncoding,
    terms_of: &dyn Fn(&Phase) -> Result<PhaseTerms>,
    tol: &ToleranceConfig,
) -> Result<f64> {
    if let Some(p) = schedule.iter().find(|p| !p.is_unitary()) {
        return Err(Error::InvalidParameter(format!("phase `{}` is not decoherence-free", p.name)));
    }
    let (xs, ws) = gauss_legendre(NODES);
    let mut kets = initial_kets(space, encoding)?;
    let mut error = 0.0;
    for phase in schedule {
        let (fixed, pumped) = terms_of(phase)?;
        let pw = phase_piecewise(space, phase, tol)?;
        let env = phase.lead().envelope;
        let mut t = 0.0;
        for seg in env.segments() {
            let (a, b) = (seg.start, seg.end);
            let half = 0.5 * (b - a);
            for (x, w) in xs.iter().zip(&ws) {
                let tn = a + half * (1.0 + x);
                kets = pw.evolve(kets, t, tn, tol, false)?;
                t = tn;
                let s = env.value(tn);
                let mut rate = loss_rate(&kets, &fixed);
                if !pumped.is_empty() {
                    rate += s * s * loss_rate(&kets, &pumped);
                }
                error += w * half * rate;
            }
            kets = pw.evolve(kets, t, b, tol, false)?;
            t = b;
        }
    }
    Ok(error)
}

/// First-order error from one jump operator `l` at `rate` acting throughout
/// a decoherence-free schedule, averaged over the cardinal inputs.
pub fn single_jump_fidelity(
    space: &HilbertSpace,
    schedule: &[Phase],
    encoding: &LogicalEncoding,
    l: &Operator,
    rate: f64,
) -> Result<f64> {
    if l.space() != space {
        return Err(Error::SpaceMismatch);
    }
    single_jump_term(space, schedule, encoding, &DissipativeTerm::lindblad(l.clone(), rate)?, &ToleranceConfig::default())
}

/// As [`single_jump_fidelity`] for any dissipative term on the full space.
pub fn single_jump_term(
    space: &HilbertSpace,
    schedule: &[Phase],
    encoding: &LogicalEncoding,
    term: &DissipativeTerm,
    tol: &ToleranceConfig,
) -> Result<f64> {
    if term.space() != space {
        return Err(Error::SpaceMismatch);
    }
    let terms = vec![term.clone()];
    integrate_jumps(space, schedule, encoding, &|_| Ok((terms.clone(), Vec::new())), tol)
}

/// Sum of the single-jump errors of every dissipator in a noisy schedule,
/// evaluated along its decoherence-free dynamics.
pub fn first_order_error(
    space: &HilbertSpace,
    schedule: &[Phase],
    encoding: &LogicalEncoding,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let ideal: Vec<Phase> = schedule.iter().map(|p| p.without_decoherence()).collect();
    let noisy = schedule.to_vec();
    let lookup = |phase: &Phase| -> Result<PhaseTerms> {
        let k = ideal.iter().position(|p| std::ptr::eq(p, phase)).expect("phase from schedule");
        let mut fixed = Vec::new();
        let mut pumped = Vec::new();
        for part in &noisy[k].parts {
            let emb = Embedding::new(space, &part.labels())?;
            for t in &part.terms {
                fixed.push(lift_term(t, &emb)?);
            }
            for t in &part.pump_terms {
                pumped.push(lift_term(t, &emb)?);
            }
        }
        Ok((fixed, pumped))
    };
    integrate_jumps(space, &ideal, encoding, &lookup, tol)
}

