//! Plain Newton iteration with a dense LU step, shared by the Nyström and
//! discrete Galerkin solvers.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialGuess {
    /// The right-hand side `f` at the nodes (Nyström) or the coefficients of
    /// `P_n f` (Galerkin).
    RightHandSide,
    /// Explicit starting vector in the solver's unknowns.
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonConfig {
    /// Stop once the sup-norm of the residual is at most `tol`.
    pub tol: f64,
    pub max_iter: usize,
    pub initial: InitialGuess,
    pub execution: Execution,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 50,
            initial: InitialGuess::RightHandSide,
            execution: Execution::default(),
        }
    }
}

impl NewtonConfig {
    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::parameter(
                "tol",
                format!("must be positive and finite, got {}", self.tol),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::parameter("max_iter", "must be positive"));
        }
        Ok(())
    }

    pub(crate) fn starting_point(&self, default: impl FnOnce() -> Vec<f64>, len: usize) -> Result<Vec<f64>> {
        match &self.initial {
            InitialGuess::RightHandSide => Ok(default()),
            InitialGuess::Values(v) if v.len() == len => Ok(v.clone()),
            InitialGuess::Values(v) => Err(Error::parameter(
                "initial",
                format!("expected {len} starting values, got {}", v.len()),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct NewtonOutcome {
    pub x: Vec<f64>,
    /// Residual evaluations performed, including the converged one.
    pub iterations: usize,
    pub residual_norm: f64,
    /// Sup-norm of the residual at every iterate.
    pub trace: Vec<f64>,
}

pub(crate) fn sup_norm(v: &[f64]) -> f64 {
    v.iter()
        .fold(0.0_f64, |acc, x| if x.is_nan() { f64::NAN } else { acc.max(x.abs()) })
}

/// Solves `F(x) = 0` from `x0`. `jacobian` returns `F'(x)`.
pub(crate) fn solve<R, J>(
    x0: Vec<f64>,
    config: &NewtonConfig,
    mut residual: R,
    mut jacobian: J,
) -> Result<NewtonOutcome>
where
    R: FnMut(&[f64]) -> Result<Vec<f64>>,
    J: FnMut(&[f64]) -> Result<DMatrix<f64>>,
{
    let mut x = x0;
    let mut trace = Vec::new();
    for k in 1..=config.max_iter {
        let f = residual(&x)?;
        let norm = sup_norm(&f);
        trace.push(norm);
        if !norm.is_finite() {
            return Err(Error::Convergence { iterations: k, trace });
        }
        if norm <= config.tol {
            return Ok(NewtonOutcome {
                x,
                iterations: k,
                residual_norm: norm,
                trace,
            });
        }
        if k == config.max_iter {
            break;
        }
        let jac = jacobian(&x)?;
        let dim = jac.nrows();
        let rhs = DVector::from_iterator(f.len(), f.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs).ok_or(Error::Singular {
            dimension: dim,
            iteration: k,
        })?;
        if step.iter().any(|v| !v.is_finite()) {
            return Err(Error::Convergence { iterations: k, trace });
        }
        x.iter_mut().zip(step.iter()).for_each(|(xi, di)| *xi += di);
    }
    Err(Error::Convergence {
        iterations: config.max_iter,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn solves_scalar_equation_quadratically() {
        let cfg = NewtonConfig::default();
        let out = solve(
            vec![1.0],
            &cfg,
            |x| Ok(vec![x[0] * x[0] - 2.0]),
            |x| Ok(DMatrix::from_element(1, 1, 2.0 * x[0])),
        )
        .unwrap();
        assert_abs_diff_eq!(out.x[0], 2f64.sqrt(), epsilon = 1e-12);
        assert!(out.iterations <= 7);
        let t = &out.trace;
        for w in t.windows(2).skip(1) {
            if w[1] > 1e-14 {
                assert!(w[1] <= 2.0 * w[0] * w[0]);
            }
        }
    }

    #[test]
    fn reports_divergence_and_singularity() {
        let cfg = NewtonConfig {
            max_iter: 5,
            ..NewtonConfig::default()
        };
        // x² + 1 = 0 has no real root.
        let err = solve(
            vec![0.5],
            &cfg,
            |x| Ok(vec![x[0] * x[0] + 1.0]),
            |x| Ok(DMatrix::from_element(1, 1, 2.0 * x[0])),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Convergence { iterations: 5, .. }));

        let err = solve(vec![0.0], &cfg, |_| Ok(vec![1.0]), |_| Ok(DMatrix::zeros(1, 1))).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(NewtonConfig {
            tol: 0.0,
            ..NewtonConfig::default()
        }
        .validate()
        .is_err());
        assert!(NewtonConfig {
            max_iter: 0,
            ..NewtonConfig::default()
        }
        .validate()
        .is_err());
    }
}
