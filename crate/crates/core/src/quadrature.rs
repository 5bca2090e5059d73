//! Gauss–Legendre rules on `[0, 1]` and the composite rule on a refined
//! uniform partition.
//!
//! A [`CompositeGrid`] couples two uniform partitions of `[0, 1]`: the coarse
//! one with `n` subintervals `Δ_j = [t_{j-1}, t_j]`, `h = 1/n`, on which the
//! approximating piecewise polynomials live, and the fine one with `m = p·n`
//! subintervals of width `h/p` that carries the quadrature. Each coarse
//! subinterval therefore holds `p·ρ` quadrature nodes
//! `t_{j-1} + μ_{qν} h` with offsets `μ_{qν} = (ν - 1 + μ_q)/p`.

use std::f64::consts::PI;

use crate::error::{check_finite, Error, Result};

pub const MAX_GAUSS_POINTS: usize = 20;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    degree_of_precision: usize,
}

impl QuadratureRule {
    /// `ρ`-point Gauss–Legendre rule mapped to `[0, 1]`, exact for polynomials
    /// of degree `2ρ - 1`.
    pub fn gauss(points: usize) -> Result<Self> {
        if points == 0 || points > MAX_GAUSS_POINTS {
            return Err(Error::parameter(
                "rho",
                format!("number of Gauss points must lie in 1..={MAX_GAUSS_POINTS}, got {points}"),
            ));
        }
        let (nodes, weights) = gauss_legendre_unit(points);
        Ok(Self {
            nodes,
            weights,
            degree_of_precision: 2 * points - 1,
        })
    }

    /// Smallest Gauss rule with degree of precision at least `degree`.
    pub fn gauss_exact_for(degree: usize) -> Result<Self> {
        Self::gauss(degree / 2 + 1)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn degree_of_precision(&self) -> usize {
        self.degree_of_precision
    }

    /// `∫_a^b g` by the affinely mapped rule.
    pub fn integrate_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, g: F) -> f64 {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(a + len * x))
            .sum::<f64>()
            * len
    }

    /// `∫_a^b g` on `panels` equal panels, each integrated by this rule.
    pub fn integrate_panels<F: Fn(f64) -> f64>(&self, a: f64, b: f64, panels: usize, g: F) -> f64 {
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|i| {
                let lo = a + width * i as f64;
                let hi = if i + 1 == panels { b } else { lo + width };
                self.integrate_on(lo, hi, &g)
            })
            .sum()
    }
}

/// Legendre polynomial `P_k(x)` on `[-1, 1]` and its derivative.
fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = next;
    }
    let dp = k as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Gauss–Legendre nodes and weights on `[0, 1]`, nodes increasing.
///
/// Roots of `P_ρ` are found by Newton's method from the Tricomi-type initial
/// guess; only the upper half is computed and mirrored so the rule is exactly
/// symmetric about `1/2`.
fn gauss_legendre_unit(points: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; points];
    let mut weights = vec![0.0; points];
    let half = points.div_ceil(2);
    for i in 0..half {
        // i-th largest root on [-1, 1]
        let mut x = (PI * (i as f64 + 0.75) / (points as f64 + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_with_derivative(points, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        if points % 2 == 1 && i + 1 == half {
            x = 0.0;
        }
        let (_, dp) = legendre_with_derivative(points, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map to [0,1]: node (1 ± x)/2, weight w/2
        let hi = points - 1 - i;
        nodes[hi] = 0.5 * (1.0 + x);
        nodes[i] = 0.5 * (1.0 - x);
        weights[hi] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    (nodes, weights)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeGrid {
    n: usize,
    p: usize,
    rule: QuadratureRule,
    /// `μ_{qν}`, ordered by `ν` then `q`; length `p·ρ`.
    offsets: Vec<f64>,
    /// `w_q` aligned with `offsets`.
    offset_weights: Vec<f64>,
    /// `μ^j_{qν}`, ordered `j`-major, then `ν`, then `q`; length `m·ρ`.
    nodes: Vec<f64>,
    /// `(h/p)·w_q` aligned with `nodes`.
    weights: Vec<f64>,
}

impl CompositeGrid {
    pub fn new(n: usize, p: usize, rule: QuadratureRule) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("n", "number of coarse subintervals must be positive"));
        }
        if p == 0 {
            return Err(Error::parameter("p", "refinement factor must be positive"));
        }
        let pf = p as f64;
        let mut offsets = Vec::with_capacity(p * rule.len());
        let mut offset_weights = Vec::with_capacity(p * rule.len());
        for nu in 0..p {
            for (&mu, &w) in rule.nodes().iter().zip(rule.weights()) {
                offsets.push((nu as f64 + mu) / pf);
                offset_weights.push(w);
            }
        }
        let h = 1.0 / n as f64;
        let mut nodes = Vec::with_capacity(n * offsets.len());
        let mut weights = Vec::with_capacity(n * offsets.len());
        for j in 0..n {
            let left = j as f64 / n as f64;
            for (&mu, &w) in offsets.iter().zip(&offset_weights) {
                nodes.push(left + mu * h);
                weights.push(h / pf * w);
            }
        }
        Ok(Self {
            n,
            p,
            rule,
            offsets,
            offset_weights,
            nodes,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of fine subintervals `m = p·n`.
    pub fn m(&self) -> usize {
        self.n * self.p
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Fine mesh width `h̃ = 1/m`.
    pub fn fine_h(&self) -> f64 {
        1.0 / self.m() as f64
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn offset_weights(&self) -> &[f64] {
        &self.offset_weights
    }

    /// Nodes per coarse subinterval, `p·ρ`.
    pub fn nodes_per_interval(&self) -> usize {
        self.offsets.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index range of the nodes lying in `Δ_{j+1}` (0-based `j`).
    pub fn interval_range(&self, j: usize) -> std::ops::Range<usize> {
        let k = self.nodes_per_interval();
        j * k..(j + 1) * k
    }

    /// Coarse partition point `t_i = i/n`.
    pub fn partition_point(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    /// All `n + 1` partition points.
    pub fn partition_points(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.partition_point(i)).collect()
    }

    /// Weighted sum of values given at the global nodes.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Composite rule `(h/p) Σ_j Σ_ν Σ_q w_q g(μ^j_{qν})`.
pub fn integrate_composite<F: Fn(f64) -> f64>(g: F, grid: &CompositeGrid) -> Result<f64> {
    let mut sum = 0.0;
    for (&t, &w) in grid.nodes().iter().zip(grid.weights()) {
        let v = check_finite(g(t), "integrand", || format!("t = {t}"))?;
        sum += w * v;
    }
    Ok(sum)
}
