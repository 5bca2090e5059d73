//! Solvers for nonlinear Urysohn integral equations
//!
//! ```text
//! x(s) - ∫_0^1 κ(s, t, x(t)) dt = f(s),   s ∈ [0, 1],
//! ```
//!
//! whose kernel is of Green's-function type: smooth on each of the triangles
//! `t <= s` and `s < t`, with a possible jump in derivatives across `t = s`.
//!
//! Three discretisations share one composite Gauss–Legendre grid:
//!
//! * [`nystrom::solve_nystrom`] replaces the integral by the composite rule
//!   and solves for the node values;
//! * [`galerkin::solve_discrete_galerkin`] projects onto piecewise polynomials
//!   of degree `< r` with the discrete orthogonal projection;
//! * the iterated solution `z_S = K_m(z_G) + f`, which superconverges at the
//!   partition points, and [`extrapolation::richardson`] lifts it one more
//!   even power of `h`.
//!
//! ```
//! use urysohn::{builtin, convergence_study, StudyConfig};
//!
//! let report = convergence_study(&builtin(), &StudyConfig::new(1, vec![10, 20])).unwrap();
//! let row = &report.levels[0].rows[0];
//! assert!(row.eps_ex.unwrap() < row.eps_s);
//! ```

pub mod error;
pub mod exec;
pub mod extrapolation;
pub mod galerkin;
pub mod newton;
pub mod nystrom;
pub mod poly_basis;
pub mod problem;
pub mod projection;
pub mod quadrature;

pub use error::{Error, Result};
pub use exec::Execution;
pub use extrapolation::{convergence_study, estimate_order, richardson, ConvergenceReport, PointValues, StudyConfig};
pub use galerkin::{solve_discrete_galerkin, GalerkinOperator, GalerkinSetup, GalerkinSolution, RefinementRule};
pub use newton::{InitialGuess, NewtonConfig};
pub use nystrom::{solve_nystrom, GridFunction, NystromSolution};
pub use problem::{builtin, problem_by_name, registry, Kernel, UrysohnProblem};
pub use projection::{project, DiscreteBasis, PiecewiseLegendre};
pub use quadrature::{CompositeGrid, QuadratureRule};
