//! Discrete Galerkin and discrete iterated Galerkin solutions.
//!
//! The discrete Galerkin solution `z_G ∈ X_n` solves
//! `z_G - P_n K_m(z_G) = P_n f`; it is computed in coefficient space, where
//! the unknowns are the `n·r` coefficients `c_{j,η}`:
//!
//! ```text
//! F(c) = c - Π(c) - c_f,   Π_{(j,η)}(c) = ⟨K_m(z_c), φ_{j,η}⟩_{Δ_j,m}
//! ```
//!
//! The iterated solution `z_S = K_m(z_G) + f` is continuous and converges at
//! the partition points at rate `h^{2r}`.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::newton::{self, NewtonConfig};
use crate::nystrom::{apply_km_many, km_at, km_at_nodes, GridFunction};
use crate::problem::UrysohnProblem;
use crate::projection::{check_precision, project_values, DiscreteBasis, PiecewiseLegendre};
use crate::quadrature::{CompositeGrid, QuadratureRule};

pub const MAX_ORDER: usize = 4;
pub const MAX_UNKNOWNS: usize = 2000;
/// Cap on `m·ρ`; every Newton step costs `O((m·ρ)² r)` kernel evaluations.
pub const MAX_GALERKIN_NODES: usize = 100_000;

/// How the refinement factor `p = m/n` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefinementRule {
    /// `p = n^r`, so `h̃ = h^{r+1}`.
    #[default]
    Power,
    Fixed(usize),
}

impl RefinementRule {
    pub fn refinement(self, n: usize, r: usize) -> Result<usize> {
        match self {
            RefinementRule::Fixed(0) => Err(Error::parameter("p", "refinement factor must be positive")),
            RefinementRule::Fixed(p) => Ok(p),
            RefinementRule::Power => u32::try_from(r)
                .ok()
                .and_then(|r| n.checked_pow(r))
                .ok_or_else(|| Error::parameter("p", format!("n^r overflows for n = {n}, r = {r}"))),
        }
    }
}

/// Smallest Gauss point count with `2ρ - 1 >= 3r`.
pub fn minimal_gauss_points(r: usize) -> usize {
    (3 * r + 2) / 2
}

/// Discretisation parameters of one discrete Galerkin solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GalerkinSetup {
    pub n: usize,
    pub r: usize,
    pub p: usize,
    pub rho: usize,
}

impl GalerkinSetup {
    /// Defaults `p = n^r` and the minimal admissible `ρ`.
    pub fn new(n: usize, r: usize) -> Result<Self> {
        Self::with_rule(n, r, RefinementRule::Power, None)
    }

    pub fn with_rule(n: usize, r: usize, rule: RefinementRule, rho: Option<usize>) -> Result<Self> {
        let setup = Self {
            n,
            r,
            p: rule.refinement(n, r)?,
            rho: rho.unwrap_or_else(|| minimal_gauss_points(r)),
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::parameter("n", "must be positive"));
        }
        if self.r == 0 || self.r > MAX_ORDER {
            return Err(Error::parameter(
                "r",
                format!("must lie in 1..={MAX_ORDER}, got {}", self.r),
            ));
        }
        if self.p == 0 {
            return Err(Error::parameter("p", "refinement factor must be positive"));
        }
        if 2 * self.rho < 3 * self.r + 1 {
            return Err(Error::Configuration(format!(
                "rho = {} gives degree of precision {} < 3r = {}",
                self.rho,
                (2 * self.rho).saturating_sub(1),
                3 * self.r
            )));
        }
        if self.n * self.r > MAX_UNKNOWNS {
            return Err(Error::Configuration(format!(
                "n*r = {} exceeds {MAX_UNKNOWNS} unknowns",
                self.n * self.r
            )));
        }
        let nodes = self.n.checked_mul(self.p).and_then(|m| m.checked_mul(self.rho));
        if nodes.is_none_or(|k| k > MAX_GALERKIN_NODES) {
            return Err(Error::Configuration(format!(
                "m*rho = {}*{}*{} exceeds {MAX_GALERKIN_NODES} quadrature nodes",
                self.n, self.p, self.rho
            )));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.n * self.p
    }

    pub fn grid(&self) -> Result<CompositeGrid> {
        self.validate()?;
        CompositeGrid::new(self.n, self.p, QuadratureRule::gauss(self.rho)?)
    }
}

#[derive(Debug, Clone)]
pub struct GalerkinSolution {
    problem: UrysohnProblem,
    grid: Arc<CompositeGrid>,
    basis: DiscreteBasis,
    z_g: PiecewiseLegendre,
    z_g_node_values: GridFunction,
    newton_iterations: usize,
    final_residual_norm: f64,
    residual_trace: Vec<f64>,
    execution: Execution,
}

impl GalerkinSolution {
    pub fn problem(&self) -> &UrysohnProblem {
        &self.problem
    }

    pub fn grid(&self) -> &CompositeGrid {
        &self.grid
    }

    pub fn r(&self) -> usize {
        self.basis.r()
    }

    /// `z_G` in the orthonormal basis.
    pub fn z_g(&self) -> &PiecewiseLegendre {
        &self.z_g
    }

    pub fn z_g_node_values(&self) -> &GridFunction {
        &self.z_g_node_values
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

    /// `z_S(s) = K_m(z_G)(s) + f(s)`.
    pub fn iterated_eval(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain { what: "s", value: s });
        }
        Ok(km_at(&self.problem, &self.grid, self.z_g_node_values.values(), s)? + self.problem.rhs(s))
    }

    pub fn iterated(&self) -> IteratedSolution<'_> {
        IteratedSolution { galerkin: self }
    }

    /// `(t_i, |exact(t_i) - z_S(t_i)|)` for `i = 0..=n`.
    pub fn partition_point_errors<F: Fn(f64) -> f64>(&self, exact: F) -> Result<Vec<(f64, f64)>> {
        let points = self.grid.partition_points();
        let values = self.iterated().eval_many(&points)?;
        Ok(points
            .iter()
            .zip(values)
            .map(|(&t, z)| (t, (exact(t) - z).abs()))
            .collect())
    }
}

/// The discrete iterated Galerkin solution `z_S = K_m(z_G) + f`.
#[derive(Debug, Clone, Copy)]
pub struct IteratedSolution<'a> {
    galerkin: &'a GalerkinSolution,
}

impl IteratedSolution<'_> {
    pub fn eval(&self, s: f64) -> Result<f64> {
        self.galerkin.iterated_eval(s)
    }

    pub fn eval_many(&self, targets: &[f64]) -> Result<Vec<f64>> {
        let g = self.galerkin;
        let k = apply_km_many(&g.problem, &g.grid, &g.z_g_node_values, targets, g.execution)?;
        Ok(targets.iter().zip(k).map(|(&s, k)| k + g.problem.rhs(s)).collect())
    }

    /// `z_S` at the quadrature nodes.
    pub fn node_values(&self) -> Result<GridFunction> {
        let g = self.galerkin;
        GridFunction::new(&g.grid, self.eval_many(g.grid.nodes())?)
    }

    /// `P_n z_S`, which coincides with `z_G`.
    pub fn reprojection(&self) -> Result<PiecewiseLegendre> {
        let g = self.galerkin;
        Ok(project_values(self.node_values()?.values(), &g.grid, &g.basis))
    }
}

/// The nonlinear map `F(c) = c - P_n K_m(z_c) - P_n f` in coefficient space.
pub struct GalerkinOperator<'a> {
    problem: &'a UrysohnProblem,
    grid: &'a CompositeGrid,
    basis: &'a DiscreteBasis,
    rhs_coeffs: Vec<f64>,
    execution: Execution,
}

impl<'a> GalerkinOperator<'a> {
    pub fn new(
        problem: &'a UrysohnProblem,
        grid: &'a CompositeGrid,
        basis: &'a DiscreteBasis,
        execution: Execution,
    ) -> Result<Self> {
        let rhs = GridFunction::from_fn(grid, |t| problem.rhs(t))?;
        Ok(Self {
            problem,
            grid,
            basis,
            rhs_coeffs: project_values(rhs.values(), grid, basis).into_coeffs(),
            execution,
        })
    }

    /// Coefficients of `P_n f`.
    pub fn rhs_coeffs(&self) -> &[f64] {
        &self.rhs_coeffs
    }

    pub fn dimension(&self) -> usize {
        self.rhs_coeffs.len()
    }

    fn node_values(&self, c: &[f64]) -> Result<Vec<f64>> {
        let pl = PiecewiseLegendre::new(self.basis.r(), self.grid.n(), c.to_vec())?;
        Ok(pl.node_values(self.grid, self.basis))
    }

    pub fn residual(&self, c: &[f64]) -> Result<Vec<f64>> {
        let z = self.node_values(c)?;
        let k = km_at_nodes(self.problem, self.grid, &z, self.execution)?;
        let projected = project_values(&k, self.grid, self.basis);
        Ok(c.iter()
            .zip(projected.coeffs())
            .zip(&self.rhs_coeffs)
            .map(|((ci, pi), fi)| ci - pi - fi)
            .collect())
    }

    /// `δ_{(j,η),(k,ξ)} - ⟨K_m'(z_c) φ_{k,ξ}, φ_{j,η}⟩_{Δ_j,m}`.
    ///
    /// Assembled one block row `j` at a time: for each node `a ∈ Δ_j`,
    /// `M_a(k,ξ) = Σ_{b∈Δ_k} W_b ∂κ/∂u(t_a, t_b, z_b) φ_{k,ξ}(t_b)`, then
    /// `J_{(j,η),·} -= h̃ w_a φ_{j,η}(t_a) M_a`.
    pub fn jacobian(&self, c: &[f64]) -> Result<DMatrix<f64>> {
        let grid = self.grid;
        let basis = self.basis;
        let r = basis.r();
        let n = grid.n();
        let k = grid.nodes_per_interval();
        let dim = n * r;
        let z = self.node_values(c)?;
        let nodes = grid.nodes();
        // W_b φ_{k,ξ}(t_b), row b
        let weighted_basis: Vec<f64> = (0..grid.len())
            .flat_map(|b| {
                let o = b % k;
                let w = grid.weights()[b];
                (0..r).map(move |xi| w * basis.phi_at(o, xi))
            })
            .collect();
        let fine_h = grid.fine_h();

        let blocks = self.execution.try_map(n, |j| {
            let mut block = vec![0.0; r * dim];
            let mut m_a = vec![0.0; dim];
            for o in 0..k {
                let a = j * k + o;
                let s = nodes[a];
                m_a.iter_mut().for_each(|v| *v = 0.0);
                for (b, (&t, &u)) in nodes.iter().zip(&z).enumerate() {
                    let d = self.problem.kappa_du(s, t, u);
                    if !d.is_finite() {
                        return Err(Error::Evaluation {
                            what: "kernel derivative",
                            location: format!("s = {s}, node t = {t}"),
                            value: d,
                        });
                    }
                    let col = (b / k) * r;
                    for xi in 0..r {
                        m_a[col + xi] += d * weighted_basis[b * r + xi];
                    }
                }
                let wa = fine_h * grid.offset_weights()[o];
                for eta in 0..r {
                    let scale = wa * basis.phi_at(o, eta);
                    let row = &mut block[eta * dim..(eta + 1) * dim];
                    row.iter_mut().zip(&m_a).for_each(|(rv, mv)| *rv -= scale * mv);
                }
            }
            Ok(block)
        })?;

        Ok(DMatrix::from_fn(dim, dim, |row, col| {
            let (j, eta) = (row / r, row % r);
            let v = blocks[j][eta * dim + col];
            if row == col {
                1.0 + v
            } else {
                v
            }
        }))
    }
}

pub fn solve_discrete_galerkin(
    problem: &UrysohnProblem,
    setup: &GalerkinSetup,
    newton: &NewtonConfig,
) -> Result<GalerkinSolution> {
    newton.validate()?;
    let grid = Arc::new(setup.grid()?);
    check_precision(&grid, setup.r)?;
    let basis = DiscreteBasis::new(&grid, setup.r)?;
    let system = GalerkinOperator::new(problem, &grid, &basis, newton.execution)?;
    let c0 = newton.starting_point(|| system.rhs_coeffs.clone(), system.dimension())?;
    let out = newton::solve(c0, newton, |c| system.residual(c), |c| system.jacobian(c))?;

    let z_g = PiecewiseLegendre::new(setup.r, setup.n, out.x)?;
    let z_g_node_values = GridFunction::new(&grid, z_g.node_values(&grid, &basis))?;
    Ok(GalerkinSolution {
        problem: problem.clone(),
        grid,
        basis,
        z_g,
        z_g_node_values,
        newton_iterations: out.iterations,
        final_residual_norm: out.residual_norm,
        residual_trace: out.trace,
        execution: newton.execution,
    })
}
