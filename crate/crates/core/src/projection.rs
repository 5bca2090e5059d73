//! Discrete inner product on the coarse subintervals and the discrete
//! orthogonal projection `P_n` onto piecewise polynomials of degree `< r`.
//!
//! The basis of `X_n` is `φ_{j,η}(t) = h^{-1/2} L_η((t - t_{j-1})/h)` on
//! `Δ_j`, zero elsewhere. `Δ_1` is closed, the others are half-open
//! `(t_{j-1}, t_j]`, so interior partition points belong to the subinterval on
//! their left.

use serde::Serialize;

use crate::error::{check_finite, Error, Result};
use crate::poly_basis::{shifted_legendre_all, MAX_LEGENDRE_DEGREE};
use crate::quadrature::CompositeGrid;

/// Fails unless the basic rule is exact for degree `3r`, which makes the
/// basis discretely orthonormal.
pub fn check_precision(grid: &CompositeGrid, r: usize) -> Result<()> {
    if r == 0 || r > MAX_LEGENDRE_DEGREE + 1 {
        return Err(Error::parameter(
            "r",
            format!("order must lie in 1..={}, got {r}", MAX_LEGENDRE_DEGREE + 1),
        ));
    }
    let dop = grid.rule().degree_of_precision();
    if dop < 3 * r {
        return Err(Error::Configuration(format!(
            "basic rule has degree of precision {dop} but r = {r} needs at least {} (2 rho - 1 >= 3 r)",
            3 * r
        )));
    }
    Ok(())
}

/// `L_η(μ_{qν})` for every node offset of a subinterval; identical on every
/// `Δ_j`.
#[derive(Debug, Clone)]
pub struct DiscreteBasis {
    r: usize,
    /// Row `o` holds `L_0(μ_o), …, L_{r-1}(μ_o)`.
    values: Vec<f64>,
    inv_sqrt_h: f64,
}

impl DiscreteBasis {
    pub fn new(grid: &CompositeGrid, r: usize) -> Result<Self> {
        check_precision(grid, r)?;
        let mut values = vec![0.0; grid.nodes_per_interval() * r];
        for (o, &mu) in grid.offsets().iter().enumerate() {
            shifted_legendre_all(mu, &mut values[o * r..(o + 1) * r]);
        }
        Ok(Self {
            r,
            values,
            inv_sqrt_h: (grid.n() as f64).sqrt(),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `L_η(μ_o)` for local offset `o`.
    #[inline]
    pub fn legendre_at(&self, o: usize, eta: usize) -> f64 {
        self.values[o * self.r + eta]
    }

    /// `φ_{j,η}` at the `o`-th node of `Δ_j` (any `j`).
    #[inline]
    pub fn phi_at(&self, o: usize, eta: usize) -> f64 {
        self.inv_sqrt_h * self.values[o * self.r + eta]
    }

    fn row(&self, o: usize) -> &[f64] {
        &self.values[o * self.r..(o + 1) * self.r]
    }

    pub fn inv_sqrt_h(&self) -> f64 {
        self.inv_sqrt_h
    }
}

/// An element of `X_n` stored by its coefficients `c_{j,η}` in the
/// orthonormal basis `φ_{j,η}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLegendre {
    r: usize,
    n: usize,
    /// `c_{j,η}` at index `j·r + η` (0-based `j`).
    coeffs: Vec<f64>,
}

impl PiecewiseLegendre {
    pub fn new(r: usize, n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if r == 0 || r > MAX_LEGENDRE_DEGREE + 1 {
            return Err(Error::parameter(
                "r",
                format!("order must lie in 1..={}, got {r}", MAX_LEGENDRE_DEGREE + 1),
            ));
        }
        if n == 0 {
            return Err(Error::parameter("n", "must be positive"));
        }
        if coeffs.len() != n * r {
            return Err(Error::parameter(
                "coeffs",
                format!("expected {} coefficients, got {}", n * r, coeffs.len()),
            ));
        }
        Ok(Self { r, n, coeffs })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// `c_{j,η}`, 0-based `j`.
    pub fn coefficient(&self, j: usize, eta: usize) -> f64 {
        self.coeffs[j * self.r + eta]
    }

    /// 0-based index of the subinterval owning `s`, honouring the
    /// left-closed convention at interior partition points.
    pub fn interval_of(&self, s: f64) -> usize {
        interval_of(self.n, s)
    }

    /// `Σ_η c_{j(s),η} φ_{j(s),η}(s)`.
    pub fn evaluate(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain { what: "s", value: s });
        }
        let j = self.interval_of(s);
        let nf = self.n as f64;
        let tau = (s * nf - j as f64).clamp(0.0, 1.0);
        let mut basis = [0.0; MAX_LEGENDRE_DEGREE + 1];
        shifted_legendre_all(tau, &mut basis[..self.r]);
        let row = &self.coeffs[j * self.r..(j + 1) * self.r];
        Ok(nf.sqrt() * row.iter().zip(&basis).map(|(c, l)| c * l).sum::<f64>())
    }

    /// Values at every node of `grid` (whose `n` must match).
    pub fn node_values(&self, grid: &CompositeGrid, basis: &DiscreteBasis) -> Vec<f64> {
        debug_assert_eq!(grid.n(), self.n);
        debug_assert_eq!(basis.r(), self.r);
        let k = grid.nodes_per_interval();
        let mut out = Vec::with_capacity(grid.len());
        for j in 0..self.n {
            let row = &self.coeffs[j * self.r..(j + 1) * self.r];
            for o in 0..k {
                let v: f64 = row.iter().zip(basis.row(o)).map(|(c, l)| c * l).sum();
                out.push(basis.inv_sqrt_h() * v);
            }
        }
        out
    }
}

pub(crate) fn interval_of(n: usize, s: f64) -> usize {
    let nf = n as f64;
    let mut j = (s * nf).ceil() as usize;
    // s within rounding of t_{j-1} belongs to Δ_{j-1}
    if j >= 1 && ((j - 1) as f64 / nf) >= s {
        j -= 1;
    }
    j.clamp(1, n) - 1
}

/// `⟨x, y⟩_{Δ_j,m} = h̃ Σ_ν Σ_q w_q x(μ^j_{qν}) y(μ^j_{qν})` for 0-based `j`.
pub fn discrete_inner_product<X, Y>(x: X, y: Y, j: usize, grid: &CompositeGrid) -> Result<f64>
where
    X: Fn(f64) -> f64,
    Y: Fn(f64) -> f64,
{
    if j >= grid.n() {
        return Err(Error::parameter(
            "j",
            format!("subinterval index {j} out of range for n = {}", grid.n()),
        ));
    }
    let mut sum = 0.0;
    for idx in grid.interval_range(j) {
        let t = grid.nodes()[idx];
        let xv = check_finite(x(t), "x", || format!("t = {t}"))?;
        let yv = check_finite(y(t), "y", || format!("t = {t}"))?;
        sum += grid.offset_weights()[idx - j * grid.nodes_per_interval()] * xv * yv;
    }
    Ok(grid.fine_h() * sum)
}

/// `P_n x` from the values of `x` at the global nodes.
pub fn project_values(values: &[f64], grid: &CompositeGrid, basis: &DiscreteBasis) -> PiecewiseLegendre {
    debug_assert_eq!(values.len(), grid.len());
    let r = basis.r();
    let k = grid.nodes_per_interval();
    let scale = grid.fine_h() * basis.inv_sqrt_h();
    let weights = grid.offset_weights();
    let mut coeffs = vec![0.0; grid.n() * r];
    for (j, chunk) in values.chunks_exact(k).enumerate() {
        let row = &mut coeffs[j * r..(j + 1) * r];
        for (o, &v) in chunk.iter().enumerate() {
            let wv = weights[o] * v;
            for (c, l) in row.iter_mut().zip(basis.row(o)) {
                *c += wv * l;
            }
        }
        row.iter_mut().for_each(|c| *c *= scale);
    }
    PiecewiseLegendre { r, n: grid.n(), coeffs }
}

/// `P_n x` with `c_{j,η} = ⟨x, φ_{j,η}⟩_{Δ_j,m}`.
pub fn project<X: Fn(f64) -> f64>(x: X, grid: &CompositeGrid, r: usize) -> Result<PiecewiseLegendre> {
    let basis = DiscreteBasis::new(grid, r)?;
    let values = grid
        .nodes()
        .iter()
        .map(|&t| check_finite(x(t), "x", || format!("t = {t}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(project_values(&values, grid, &basis))
}
