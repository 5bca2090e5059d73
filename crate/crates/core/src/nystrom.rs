//! Nyström discretisation of the Urysohn operator on a [`CompositeGrid`].
//!
//! `K_m(x)(s) = Σ_b W_b κ(s, t_b, x(t_b))` with `t_b` the global nodes and
//! `W_b = (h/p) w_q`. Solving `x_m - K_m(x_m) = f` only involves the node
//! values; the solution extends to all of `[0, 1]` through
//! `x_m(s) = f(s) + K_m(x_m)(s)`.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::newton::{self, NewtonConfig};
use crate::problem::UrysohnProblem;
use crate::quadrature::CompositeGrid;

/// Largest `m·ρ` for which [`solve_nystrom`] assembles its dense Jacobian.
pub const MAX_NYSTROM_NODES: usize = 5000;

/// Values at the global quadrature nodes of a grid, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction(Vec<f64>);

impl GridFunction {
    pub fn new(grid: &CompositeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::parameter(
                "values",
                format!("grid has {} nodes, got {} values", grid.len(), values.len()),
            ));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Evaluation {
                what: "grid function",
                location: format!("node {} (t = {})", i, grid.nodes()[i]),
                value: *v,
            });
        }
        Ok(Self(values))
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: &CompositeGrid, f: F) -> Result<Self> {
        Self::new(grid, grid.nodes().iter().map(|&t| f(t)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_point(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::Domain { what: "s", value: s })
    }
}

fn kernel_failure(s: f64, t: f64, value: f64) -> Error {
    Error::Evaluation {
        what: "kernel",
        location: format!("s = {s}, node t = {t}"),
        value,
    }
}

/// `K_m(x)(s)` without the domain check.
pub(crate) fn km_at(problem: &UrysohnProblem, grid: &CompositeGrid, x: &[f64], s: f64) -> Result<f64> {
    let mut sum = 0.0;
    for ((&t, &w), &u) in grid.nodes().iter().zip(grid.weights()).zip(x) {
        let k = problem.kappa(s, t, u);
        if !k.is_finite() {
            return Err(kernel_failure(s, t, k));
        }
        sum += w * k;
    }
    Ok(sum)
}

pub fn apply_km(problem: &UrysohnProblem, grid: &CompositeGrid, x: &GridFunction, s: f64) -> Result<f64> {
    check_point(s)?;
    km_at(problem, grid, x.values(), s)
}

/// `K_m(x)` at many points.
pub fn apply_km_many(
    problem: &UrysohnProblem,
    grid: &CompositeGrid,
    x: &GridFunction,
    targets: &[f64],
    execution: Execution,
) -> Result<Vec<f64>> {
    targets.iter().try_for_each(|&s| check_point(s))?;
    execution.try_map(targets.len(), |i| km_at(problem, grid, x.values(), targets[i]))
}

/// `K_m(x)` at the grid's own nodes.
pub(crate) fn km_at_nodes(
    problem: &UrysohnProblem,
    grid: &CompositeGrid,
    x: &[f64],
    execution: Execution,
) -> Result<Vec<f64>> {
    let nodes = grid.nodes();
    execution.try_map(nodes.len(), |a| km_at(problem, grid, x, nodes[a]))
}

/// `K_m'(base) v (s) = Σ_b W_b ∂κ/∂u(s, t_b, base_b) v_b`.
pub fn km_prime_apply(
    problem: &UrysohnProblem,
    grid: &CompositeGrid,
    base: &GridFunction,
    v: &GridFunction,
    s: f64,
) -> Result<f64> {
    check_point(s)?;
    let mut sum = 0.0;
    for (((&t, &w), &u), &vb) in grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(base.values())
        .zip(v.values())
    {
        let d = problem.kappa_du(s, t, u);
        if !d.is_finite() {
            return Err(kernel_failure(s, t, d));
        }
        sum += w * d * vb;
    }
    Ok(sum)
}

#[derive(Debug, Clone)]
pub struct NystromSolution {
    problem: UrysohnProblem,
    grid: Arc<CompositeGrid>,
    node_values: GridFunction,
    newton_iterations: usize,
    final_residual_norm: f64,
    residual_trace: Vec<f64>,
}

impl NystromSolution {
    pub fn problem(&self) -> &UrysohnProblem {
        &self.problem
    }

    pub fn grid(&self) -> &CompositeGrid {
        &self.grid
    }

    /// `φ_m` at the quadrature nodes.
    pub fn node_values(&self) -> &GridFunction {
        &self.node_values
    }

    pub fn newton_iterations(&self) -> usize {
        self.newton_iterations
    }

    pub fn final_residual_norm(&self) -> f64 {
        self.final_residual_norm
    }

    pub fn residual_trace(&self) -> &[f64] {
        &self.residual_trace
    }

    /// Natural extension `f(s) + K_m(φ_m)(s)`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        Ok(self.problem.rhs(s) + apply_km(&self.problem, &self.grid, &self.node_values, s)?)
    }
}

/// Node residual `X - K_m(X) - f`, with `f` sampled at the nodes in `rhs`.
pub fn nystrom_residual(
    problem: &UrysohnProblem,
    grid: &CompositeGrid,
    x: &[f64],
    rhs: &[f64],
    execution: Execution,
) -> Result<Vec<f64>> {
    let k = km_at_nodes(problem, grid, x, execution)?;
    Ok(x.iter().zip(&k).zip(rhs).map(|((xi, ki), fi)| xi - ki - fi).collect())
}

/// `I - A`, `A_{ab} = W_b ∂κ/∂u(t_a, t_b, X_b)`.
pub fn nystrom_jacobian(
    problem: &UrysohnProblem,
    grid: &CompositeGrid,
    x: &[f64],
    execution: Execution,
) -> Result<DMatrix<f64>> {
    let nodes = grid.nodes();
    let weights = grid.weights();
    let n = nodes.len();
    let rows = execution.try_map(n, |a| {
        let s = nodes[a];
        let mut row = Vec::with_capacity(n);
        for b in 0..n {
            let d = problem.kappa_du(s, nodes[b], x[b]);
            if !d.is_finite() {
                return Err(kernel_failure(s, nodes[b], d));
            }
            row.push(-weights[b] * d + if a == b { 1.0 } else { 0.0 });
        }
        Ok(row)
    })?;
    Ok(DMatrix::from_fn(n, n, |a, b| rows[a][b]))
}

pub fn solve_nystrom(
    problem: &UrysohnProblem,
    grid: Arc<CompositeGrid>,
    newton: &NewtonConfig,
) -> Result<NystromSolution> {
    newton.validate()?;
    if grid.len() > MAX_NYSTROM_NODES {
        return Err(Error::Configuration(format!(
            "Nystrom solve needs m*rho <= {MAX_NYSTROM_NODES} for the dense Jacobian, got {}",
            grid.len()
        )));
    }
    let rhs: Vec<f64> = grid.nodes().iter().map(|&t| problem.rhs(t)).collect();
    let x0 = newton.starting_point(|| rhs.clone(), grid.len())?;
    let exec = newton.execution;
    let out = newton::solve(
        x0,
        newton,
        |x| nystrom_residual(problem, &grid, x, &rhs, exec),
        |x| nystrom_jacobian(problem, &grid, x, exec),
    )?;
    let node_values = GridFunction::new(&grid, out.x)?;
    Ok(NystromSolution {
        problem: problem.clone(),
        grid,
        node_values,
        newton_iterations: out.iterations,
        final_residual_norm: out.residual_norm,
        residual_trace: out.trace,
    })
}
