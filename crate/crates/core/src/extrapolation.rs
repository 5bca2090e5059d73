//! Richardson extrapolation at partition points and convergence ladders.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::galerkin::{solve_discrete_galerkin, GalerkinSetup, RefinementRule};
use crate::newton::NewtonConfig;
use crate::problem::UrysohnProblem;

/// Errors at or below this are treated as round-off; no order is estimated.
pub const ORDER_FLOOR: f64 = 1e-14;

const ALIGN_TOL: f64 = 1e-14;

/// Values at the partition points `0 = t_0 < … < t_n = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointValues {
    t: Vec<f64>,
    values: Vec<f64>,
}

impl PointValues {
    pub fn new(t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if t.len() != values.len() {
            return Err(Error::parameter(
                "values",
                format!("{} points but {} values", t.len(), values.len()),
            ));
        }
        if t.len() < 2 {
            return Err(Error::parameter("t", "need at least the two endpoints"));
        }
        if t[0] != 0.0 || t[t.len() - 1] != 1.0 {
            return Err(Error::parameter("t", "must start at 0 and end at 1"));
        }
        if t.windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::parameter("t", "must be strictly increasing"));
        }
        Ok(Self { t, values })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (t, values) = pairs.into_iter().unzip();
        Self::new(t, values)
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t.iter().copied().zip(self.values.iter().copied())
    }

    /// Number of subintervals.
    pub fn intervals(&self) -> usize {
        self.t.len() - 1
    }
}

/// `(2^{2r} fine - coarse) / (2^{2r} - 1)` at the coarse points.
pub fn richardson(coarse: &PointValues, fine: &PointValues, r: usize) -> Result<PointValues> {
    if r == 0 || r > 26 {
        return Err(Error::parameter("r", format!("must lie in 1..=26, got {r}")));
    }
    if fine.intervals() != 2 * coarse.intervals() {
        return Err(Error::Alignment(format!(
            "fine grid has {} intervals, expected {}",
            fine.intervals(),
            2 * coarse.intervals()
        )));
    }
    let w = (1u64 << (2 * r)) as f64;
    let values = coarse
        .iter()
        .enumerate()
        .map(|(i, (t, zc))| {
            let tf = fine.t[2 * i];
            if (tf - t).abs() > ALIGN_TOL {
                return Err(Error::Alignment(format!("coarse point {t} vs fine point {tf}")));
            }
            Ok((w * fine.values[2 * i] - zc) / (w - 1.0))
        })
        .collect::<Result<Vec<_>>>()?;
    PointValues::new(coarse.t.clone(), values)
}

/// `log2(e_coarse / e_fine)`, or `None` when either error is at the floor.
pub fn estimate_order(e_coarse: f64, e_fine: f64) -> Option<f64> {
    (e_coarse > ORDER_FLOOR && e_fine > ORDER_FLOOR).then(|| (e_coarse / e_fine).log2())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub r: usize,
    /// Ladder `n, 2n, 4n, …`.
    pub n_list: Vec<usize>,
    pub refinement: RefinementRule,
    /// Gauss points; `None` picks the smallest admissible count.
    pub rho: Option<usize>,
    pub newton: NewtonConfig,
    /// How ladder levels are scheduled against each other.
    pub execution: Execution,
}

impl StudyConfig {
    pub fn new(r: usize, n_list: Vec<usize>) -> Self {
        Self {
            r,
            n_list,
            refinement: RefinementRule::Power,
            rho: None,
            newton: NewtonConfig::default(),
            execution: Execution::default(),
        }
    }

    pub fn setups(&self) -> Result<Vec<GalerkinSetup>> {
        if self.n_list.is_empty() {
            return Err(Error::parameter("n_list", "empty ladder"));
        }
        if let Some(w) = self.n_list.windows(2).find(|w| w[1] != 2 * w[0]) {
            return Err(Error::parameter(
                "n_list",
                format!("each level must double the previous one, got {} after {}", w[1], w[0]),
            ));
        }
        self.n_list
            .iter()
            .map(|&n| GalerkinSetup::with_rule(n, self.r, self.refinement, self.rho))
            .collect()
    }
}

/// Solver statistics for one ladder level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub rho: usize,
    pub newton_iterations: usize,
    pub final_residual: f64,
    pub wall_clock_seconds: f64,
}

/// One row of a level table, at an interior partition point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub t: f64,
    pub eps_s: f64,
    pub order_s: Option<f64>,
    pub eps_ex: Option<f64>,
    pub order_ex: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub stats: SolveStats,
    /// `z_S` at all partition points of this level.
    pub iterated: PointValues,
    /// Extrapolated values from this level and the next one.
    pub extrapolated: Option<PointValues>,
    pub rows: Vec<PointRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub problem: String,
    pub r: usize,
    pub levels: Vec<LevelReport>,
}

impl ConvergenceReport {
    pub fn level(&self, n: usize) -> Option<&LevelReport> {
        self.levels.iter().find(|l| l.stats.n == n)
    }

    pub fn total_wall_clock_seconds(&self) -> f64 {
        self.levels.iter().map(|l| l.stats.wall_clock_seconds).sum()
    }
}

fn solve_level(
    problem: &UrysohnProblem,
    setup: &GalerkinSetup,
    newton: &NewtonConfig,
) -> Result<(SolveStats, PointValues)> {
    let start = Instant::now();
    let sol = solve_discrete_galerkin(problem, setup, newton)?;
    let t = sol.grid().partition_points();
    let z = sol.iterated().eval_many(&t)?;
    let stats = SolveStats {
        n: setup.n,
        p: setup.p,
        m: setup.m(),
        rho: setup.rho,
        newton_iterations: sol.newton_iterations(),
        final_residual: sol.final_residual_norm(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((stats, PointValues::new(t, z)?))
}

fn errors(values: &PointValues, exact: &dyn Fn(f64) -> f64) -> Vec<f64> {
    values.iter().map(|(t, z)| (exact(t) - z).abs()).collect()
}

/// Solves every ladder level, then tabulates errors and orders.
///
/// Orders and extrapolated values at level `n` use levels `2n` (and `4n`
/// for the extrapolated order) restricted to the points of level `n`.
pub fn convergence_study(problem: &UrysohnProblem, config: &StudyConfig) -> Result<ConvergenceReport> {
    let exact = problem
        .exact_fn()
        .ok_or_else(|| Error::Configuration(format!("problem `{}` has no exact solution", problem.name())))?;
    let setups = config.setups()?;
    let solved = config.execution.try_map(setups.len(), |l| {
        solve_level(problem, &setups[l], &config.newton).map_err(|e| Error::Level {
            n: setups[l].n,
            source: Box::new(e),
        })
    })?;

    let eps_s: Vec<Vec<f64>> = solved.iter().map(|(_, z)| errors(z, &exact)).collect();
    let extrapolated = (0..solved.len())
        .map(|l| {
            solved
                .get(l + 1)
                .map(|(_, fine)| richardson(&solved[l].1, fine, config.r))
                .transpose()
        })
        .collect::<Result<Vec<_>>>()?;
    let eps_ex: Vec<Option<Vec<f64>>> = extrapolated
        .iter()
        .map(|ex| ex.as_ref().map(|ex| errors(ex, &exact)))
        .collect();

    let levels = solved
        .iter()
        .enumerate()
        .map(|(l, (stats, iterated))| {
            let n = stats.n;
            let rows = (1..n)
                .map(|i| {
                    let fine = |e: &[f64]| e[2 * i];
                    let order_s = eps_s.get(l + 1).and_then(|f| estimate_order(eps_s[l][i], fine(f)));
                    let ex = eps_ex[l].as_ref().map(|e| e[i]);
                    let order_ex = match (ex, eps_ex.get(l + 1).and_then(Option::as_ref)) {
                        (Some(c), Some(f)) => estimate_order(c, fine(f)),
                        _ => None,
                    };
                    PointRow {
                        t: iterated.t()[i],
                        eps_s: eps_s[l][i],
                        order_s,
                        eps_ex: ex,
                        order_ex,
                    }
                })
                .collect();
            LevelReport {
                stats: stats.clone(),
                iterated: iterated.clone(),
                extrapolated: extrapolated[l].clone(),
                rows,
            }
        })
        .collect();

    Ok(ConvergenceReport {
        problem: problem.name().to_string(),
        r: config.r,
        levels,
    })
}
