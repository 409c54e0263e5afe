//! Scalar optimization, root finding and quadrature helpers.

use argmin::core::{CostFunction, Executor};
use argmin::solver::brent::{BrentOpt, BrentRoot};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

struct Scalar<'a>(&'a dyn Fn(f64) -> f64);

impl CostFunction for Scalar<'_> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, x: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok((self.0)(*x))
    }
}

/// Brent minimization of `f` on `[lo, hi]`; returns `(argmin, min)`.
pub fn minimize_scalar(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    let solver = BrentOpt::new(lo, hi).set_tolerance(tol, 1e-14);
    let res = Executor::new(Scalar(f), solver)
        .configure(|s| s.max_iters(500))
        .run()
        .map_err(|e| Error::Numerical(format!("minimization failed: {e}")))?;
    let st = res.state();
    match st.best_param {
        Some(x) if st.best_cost.is_finite() => Ok((x, st.best_cost)),
        _ => Err(Error::Numerical("minimization produced no finite value".into())),
    }
}

/// Minimizes over a coarse grid first, then refines with Brent around the best cell.
pub fn minimize_bracketed(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, grid: usize, tol: f64) -> Result<(f64, f64)> {
    let n = grid.max(3);
    let xs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let (kbest, _) = ys
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Numerical("objective not finite on grid".into()))?;
    let a = xs[kbest.saturating_sub(1)];
    let b = xs[(kbest + 1).min(n - 1)];
    let (x, y) = minimize_scalar(f, a, b, tol)?;
    if y <= ys[kbest] {
        Ok((x, y))
    } else {
        Ok((xs[kbest], ys[kbest]))
    }
}

/// Brent root of `f` on `[lo, hi]`; the endpoints must bracket a sign change.
pub fn find_root(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (fa, fb) = (f(lo), f(hi));
    if !(fa.is_finite() && fb.is_finite()) || fa * fb > 0.0 {
        return Err(Error::Numerical(format!("no sign change in [{lo:e}, {hi:e}]")));
    }
    let res = Executor::new(Scalar(f), BrentRoot::new(lo, hi, tol))
        .configure(|s| s.max_iters(500))
        .run()
        .map_err(|e| Error::Numerical(format!("root finding failed: {e}")))?;
    res.state().best_param.ok_or_else(|| Error::Numerical("root finding produced no value".into()))
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Golub–Welsch: eigenvalues of the Jacobi matrix are the nodes
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], 2.0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `n` points spaced evenly in log between `lo` and `hi`, both included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect();
    g[0] = lo;
    g[n - 1] = hi;
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert_relative_eq!(i, 2.0 / 15.0, epsilon = 1e-13);
        let (x, w) = gauss_legendre(64);
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * (3.0 * x).cos()).sum();
        assert_relative_eq!(i, 2.0 * 3f64.sin() / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn brent_finds_parabola_minimum() {
        let (x, y) = minimize_scalar(&|x| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-10).unwrap();
        assert_relative_eq!(x, 0.3, epsilon = 1e-6);
        assert_relative_eq!(y, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn root_of_cubic() {
        let r = find_root(&|x| x * x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(r, 2f64.cbrt(), epsilon = 1e-10);
        assert!(find_root(&|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-3, 1e1, 5);
        assert_relative_eq!(g[0], 1e-3, max_relative = 1e-14);
        assert_relative_eq!(g[2], 1e-1, max_relative = 1e-14);
        assert_eq!((g[0], g[4]), (1e-3, 1e1));
    }
}
