//! Orthonormal shifted Legendre polynomials on `[0, 1]` and the constants of
//! the asymptotic error expansion built from them.
//!
//! `L_η(t) = √(2η+1) P_η(2t - 1)` so that `∫₀¹ L_η L_ξ = δ_{ηξ}`. From these:
//!
//! * `Λ_r(τ, s) = Σ_{η<r} L_η(τ) L_η(s)`, the reproducing kernel of
//!   polynomials of degree `< r`;
//! * `J_k(τ) = ∫₀¹ Λ_r(τ, s) (s - τ)^k / k! ds`, the coefficients of the
//!   expansion of the projection error `P_n x - x`;
//! * `b̄_{2r,p} = ∫∫ Λ_r(τ, s) (τ - s)^p/p! · B_{2r-p}(s)/(2r-p)! dτ ds`
//!   with `B_k` the Bernoulli polynomials.
//!
//! Every integral here has a polynomial integrand and is evaluated by a Gauss
//! rule whose degree of precision covers it, so the values are exact up to
//! rounding.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;

pub const MAX_LEGENDRE_DEGREE: usize = 12;

/// Largest Bernoulli degree supported; coefficients stay well conditioned.
pub const MAX_BERNOULLI_DEGREE: usize = 20;

/// `L_η(t)` without the domain check.
pub(crate) fn shifted_legendre(eta: usize, t: f64) -> f64 {
    let x = 2.0 * t - 1.0;
    let (mut prev, mut cur) = (1.0, x);
    let value = match eta {
        0 => 1.0,
        1 => x,
        _ => {
            for k in 2..=eta {
                let kf = k as f64;
                let next = ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf;
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    (2.0 * eta as f64 + 1.0).sqrt() * value
}

/// Values `L_0(t), …, L_{r-1}(t)` written into `out`.
pub(crate) fn shifted_legendre_all(t: f64, out: &mut [f64]) {
    let x = 2.0 * t - 1.0;
    let r = out.len();
    if r == 0 {
        return;
    }
    let (mut prev, mut cur) = (1.0, x);
    out[0] = 1.0;
    if r > 1 {
        out[1] = 3f64.sqrt() * x;
    }
    for (k, slot) in out.iter_mut().enumerate().skip(2) {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf;
        prev = cur;
        cur = next;
        *slot = (2.0 * kf + 1.0).sqrt() * cur;
    }
}

fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

fn check_order(r: usize) -> Result<()> {
    if r == 0 || r > MAX_LEGENDRE_DEGREE + 1 {
        return Err(Error::parameter(
            "r",
            format!("order must lie in 1..={}, got {r}", MAX_LEGENDRE_DEGREE + 1),
        ));
    }
    Ok(())
}

/// Orthonormal shifted Legendre polynomial `L_η(t)` on `[0, 1]`.
pub fn legendre(eta: usize, t: f64) -> Result<f64> {
    if eta > MAX_LEGENDRE_DEGREE {
        return Err(Error::parameter(
            "eta",
            format!("degree must be at most {MAX_LEGENDRE_DEGREE}, got {eta}"),
        ));
    }
    check_unit("t", t)?;
    Ok(shifted_legendre(eta, t))
}

/// `Λ_r(τ, s) = Σ_{η<r} L_η(τ) L_η(s)`.
pub fn lambda_r(r: usize, tau: f64, s: f64) -> Result<f64> {
    check_order(r)?;
    check_unit("tau", tau)?;
    check_unit("s", s)?;
    Ok(lambda_unchecked(r, tau, s))
}

fn lambda_unchecked(r: usize, tau: f64, s: f64) -> f64 {
    (0..r)
        .map(|eta| shifted_legendre(eta, tau) * shifted_legendre(eta, s))
        .sum()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `J_k(τ) = ∫₀¹ Λ_r(τ, s)(s - τ)^k / k! ds` for `1 <= k <= 2r + 1`.
pub fn j_k(r: usize, k: usize, tau: f64) -> Result<f64> {
    check_order(r)?;
    if k == 0 || k > 2 * r + 1 {
        return Err(Error::parameter("k", format!("must lie in 1..={}, got {k}", 2 * r + 1)));
    }
    check_unit("tau", tau)?;
    let rule = QuadratureRule::gauss_exact_for(r - 1 + k)?;
    Ok(j_k_with(&rule, r, k, tau))
}

fn j_k_with(rule: &QuadratureRule, r: usize, k: usize, tau: f64) -> f64 {
    let kf = factorial(k);
    rule.nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&s, &w)| w * lambda_unchecked(r, tau, s) * (s - tau).powi(k as i32) / kf)
        .sum()
}

/// Bernoulli numbers `B_0..=B_k` with the `B_1 = -1/2` convention.
fn bernoulli_numbers(k: usize) -> Vec<f64> {
    let mut b = vec![0.0; k + 1];
    b[0] = 1.0;
    for n in 1..=k {
        // Σ_{j=0}^{n} C(n+1, j) B_j = 0
        let acc: f64 = (0..n).map(|j| binomial(n + 1, j) * b[j]).sum();
        b[n] = -acc / (n as f64 + 1.0);
    }
    b
}

/// Bernoulli polynomial `B_k(s) = Σ_j C(k, j) B_j s^{k-j}`.
///
/// Normalised by `B_0 = 1`, `∫₀¹ B_k = 0` for `k >= 1`, `B_k' = k B_{k-1}`;
/// in particular `B_1(s) = s - 1/2`.
pub fn bernoulli(k: usize, s: f64) -> Result<f64> {
    if k > MAX_BERNOULLI_DEGREE {
        return Err(Error::parameter(
            "k",
            format!("Bernoulli degree must be at most {MAX_BERNOULLI_DEGREE}, got {k}"),
        ));
    }
    let numbers = bernoulli_numbers(k);
    // Horner in s over coefficients C(k, j) B_j of s^{k-j}.
    Ok((0..=k).fold(0.0, |acc, j| acc * s + binomial(k, j) * numbers[j]))
}

/// `b̄_{2r,p}` for `1 <= p <= 2r`.
pub fn bbar(r: usize, p: usize) -> Result<f64> {
    check_order(r)?;
    if p == 0 || p > 2 * r {
        return Err(Error::parameter("p", format!("must lie in 1..={}, got {p}", 2 * r)));
    }
    // Degree in τ: (r-1) + p. Degree in s: (r-1) + p + (2r-p) = 3r - 1.
    let rule = QuadratureRule::gauss_exact_for(3 * r + 1)?;
    let numbers = bernoulli_numbers(2 * r - p);
    let kb = 2 * r - p;
    let bern = |s: f64| (0..=kb).fold(0.0, |acc, j| acc * s + binomial(kb, j) * numbers[j]);
    let scale = factorial(p) * factorial(kb);
    let mut total = 0.0;
    for (&s, &ws) in rule.nodes().iter().zip(rule.weights()) {
        let bs = bern(s);
        for (&tau, &wt) in rule.nodes().iter().zip(rule.weights()) {
            total += ws * wt * lambda_unchecked(r, tau, s) * (tau - s).powi(p as i32) * bs;
        }
    }
    Ok(total / scale)
}

/// `∫₀¹ J_r(τ)² dτ`.
pub fn j_square_integral(r: usize) -> Result<f64> {
    check_order(r)?;
    // J_r has degree <= 2r - 1 in τ, so J_r² has degree <= 4r - 2.
    Ok(j_square_integral_with(r, &QuadratureRule::gauss_exact_for(4 * r - 2)?))
}

fn j_square_integral_with(r: usize, outer: &QuadratureRule) -> f64 {
    let inner = QuadratureRule::gauss_exact_for(2 * r - 1).expect("inner rule in range");
    outer
        .nodes()
        .iter()
        .zip(outer.weights())
        .map(|(&tau, &w)| {
            let j = j_k_with(&inner, r, r, tau);
            w * j * j
        })
        .sum()
}

/// The `r`-dependent constants of the superconvergence expansion, bundled for
/// reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticCoefficients {
    pub r: usize,
    /// `b̄_{2r,p}` for `p = 1..=2r` (index `p - 1`).
    pub bbar: Vec<f64>,
    pub j_square_integral: f64,
}

impl AsymptoticCoefficients {
    pub fn new(r: usize) -> Result<Self> {
        check_order(r)?;
        let bbar = (1..=2 * r).map(|p| bbar(r, p)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            r,
            bbar,
            j_square_integral: j_square_integral(r)?,
        })
    }

    pub fn j(&self, k: usize, tau: f64) -> Result<f64> {
        j_k(self.r, k, tau)
    }
}
