use nalgebra::{DMatrix, DVector};

use super::matrix::TransitionMatrix;
use crate::error::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-10;
const NEGATIVE_SLACK: f64 = 1e-12;

/// Stationary distribution of a [`TransitionMatrix`].
#[derive(Debug, Clone)]
pub struct SteadyState {
    pi: Vec<f64>,
    residual: f64,
}

impl SteadyState {
    pub fn probabilities(&self) -> &[f64] {
        &self.pi
    }

    /// `max |pi P - pi|`.
    pub fn residual(&self) -> f64 {
        self.residual
    }
}

pub fn residual(p: &TransitionMatrix, pi: &[f64]) -> f64 {
    let v = DVector::from_column_slice(pi);
    let moved = p.matrix.tr_mul(&v);
    (moved - v).amax()
}

/// Solves `pi P = pi`, `sum pi = 1` by a pivoted dense solve, falling back to
/// power iteration on the lazy chain `(P + I) / 2` when the direct answer
/// does not meet the residual tolerance.
pub fn steady_state(p: &TransitionMatrix) -> Result<SteadyState> {
    let classes = recurrent_classes(p);
    if classes != 1 {
        return Err(Error::Solver(format!(
            "chain has {classes} closed communicating classes; the stationary law is not unique"
        )));
    }
    if let Some(pi) = direct_solve(p) {
        let r = residual(p, &pi);
        if r <= RESIDUAL_TOL {
            return Ok(SteadyState { pi, residual: r });
        }
    }
    let pi = power_iteration(p, 1e-15, 5_000_000)?;
    let r = residual(p, &pi);
    if r > RESIDUAL_TOL {
        return Err(Error::Solver(format!("power iteration stalled at residual {r:e}")));
    }
    Ok(SteadyState { pi, residual: r })
}

fn direct_solve(p: &TransitionMatrix) -> Option<Vec<f64>> {
    let n = p.dim();
    // (P^T - I) pi = 0 with the last balance equation replaced by sum pi = 1.
    let mut a: DMatrix<f64> = p.matrix.transpose() - DMatrix::identity(n, n);
    a.row_mut(n - 1).fill(1.0);
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let x = a.lu().solve(&rhs)?;
    normalize(x.as_slice())
}

fn normalize(x: &[f64]) -> Option<Vec<f64>> {
    if x.iter().any(|v| !v.is_finite() || *v < -NEGATIVE_SLACK) {
        return None;
    }
    let clipped: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return None;
    }
    Some(clipped.into_iter().map(|v| v / total).collect())
}

/// Power iteration on `(P + I) / 2`, which shares the stationary law of `P`
/// but is aperiodic. Uses the sparsity of `P`.
pub fn power_iteration(p: &TransitionMatrix, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = p.dim();
    let entries: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let v = p.get(i, j);
            (v != 0.0).then_some((i, j, v))
        })
        .collect();
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        next.iter_mut().zip(&pi).for_each(|(x, &v)| *x = 0.5 * v);
        for &(i, j, v) in &entries {
            next[j] += 0.5 * pi[i] * v;
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        let delta = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut pi, &mut next);
        if delta < tol {
            return Ok(pi);
        }
    }
    Err(Error::Solver(format!("power iteration did not converge in {max_iter} steps")))
}

/// Number of closed communicating classes (recurrent classes of a finite chain).
fn recurrent_classes(p: &TransitionMatrix) -> usize {
    let n = p.dim();
    let succ: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| p.get(i, j) > 0.0).collect()).collect();
    let reach: Vec<Vec<bool>> = (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &v in &succ[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen
        })
        .collect();
    // A state is recurrent iff everything it reaches reaches it back.
    let recurrent: Vec<bool> = (0..n).map(|s| (0..n).all(|t| !reach[s][t] || reach[t][s])).collect();
    let mut assigned = vec![false; n];
    let mut classes = 0;
    for s in 0..n {
        if recurrent[s] && !assigned[s] {
            classes += 1;
            for t in 0..n {
                if reach[s][t] {
                    assigned[t] = true;
                }
            }
        }
    }
    classes
}
