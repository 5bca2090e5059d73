//! Urysohn problems `x(s) - ∫₀¹ κ(s, t, x(t)) dt = f(s)` with kernels of
//! Green's-function type: smooth on each of `Ω₁ = {t <= s}` and
//! `Ω₂ = {s <= t}`, continuous across the diagonal, with derivative jumps in
//! `s` and `t` there.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_finite, Error, Result};
use crate::quadrature::QuadratureRule;

/// Kernel split into its two smooth branches.
///
/// Implementations supply `∂κ/∂u` analytically; Newton's method depends on
/// it being exact.
pub trait Kernel: Send + Sync {
    /// `κ₁(s, t, u)` on `t <= s`.
    fn lower(&self, s: f64, t: f64, u: f64) -> f64;
    /// `κ₂(s, t, u)` on `s <= t`.
    fn upper(&self, s: f64, t: f64, u: f64) -> f64;
    fn lower_du(&self, s: f64, t: f64, u: f64) -> f64;
    fn upper_du(&self, s: f64, t: f64, u: f64) -> f64;

    /// True when the kernel vanishes identically; solvers may shortcut.
    fn is_zero(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `Ω₁`, `t <= s`.
    Lower,
    /// `Ω₂`, `s < t`.
    Upper,
}

impl Branch {
    /// Diagonal ties go to `Ω₁`; the branches agree there.
    #[inline]
    pub fn of(s: f64, t: f64) -> Self {
        if t <= s {
            Branch::Lower
        } else {
            Branch::Upper
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOrder {
    Value,
    /// `∂κ/∂u`
    FirstU,
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type KernelFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct UrysohnProblem {
    name: String,
    kernel: Arc<dyn Kernel>,
    rhs: ScalarFn,
    exact: Option<ScalarFn>,
}

impl fmt::Debug for UrysohnProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UrysohnProblem")
            .field("name", &self.name)
            .field("has_exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

impl UrysohnProblem {
    pub fn new<K, F>(name: impl Into<String>, kernel: K, rhs: F) -> Self
    where
        K: Kernel + 'static,
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            kernel: Arc::new(kernel),
            rhs: Arc::new(rhs),
            exact: None,
        }
    }

    pub fn with_exact<F>(mut self, exact: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.exact = Some(Arc::new(exact));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kernel(&self) -> &dyn Kernel {
        self.kernel.as_ref()
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    #[inline]
    pub fn rhs(&self, s: f64) -> f64 {
        (self.rhs)(s)
    }

    pub fn exact(&self, s: f64) -> Option<f64> {
        self.exact.as_ref().map(|phi| phi(s))
    }

    /// Exact solution as a callable, if known.
    pub fn exact_fn(&self) -> Option<impl Fn(f64) -> f64 + '_> {
        self.exact.as_ref().map(|phi| move |s| phi(s))
    }

    #[inline]
    pub(crate) fn kappa(&self, s: f64, t: f64, u: f64) -> f64 {
        match Branch::of(s, t) {
            Branch::Lower => self.kernel.lower(s, t, u),
            Branch::Upper => self.kernel.upper(s, t, u),
        }
    }

    #[inline]
    pub(crate) fn kappa_du(&self, s: f64, t: f64, u: f64) -> f64 {
        match Branch::of(s, t) {
            Branch::Lower => self.kernel.lower_du(s, t, u),
            Branch::Upper => self.kernel.upper_du(s, t, u),
        }
    }

    /// `κ(s, t, u)` or `∂κ/∂u (s, t, u)` with the branch chosen by `t <= s`.
    pub fn kernel_eval(&self, s: f64, t: f64, u: f64, order: DerivativeOrder) -> Result<f64> {
        for (what, value) in [("s", s), ("t", t)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Domain { what, value });
            }
        }
        if !u.is_finite() {
            return Err(Error::parameter("u", format!("must be finite, got {u}")));
        }
        let value = match order {
            DerivativeOrder::Value => self.kappa(s, t, u),
            DerivativeOrder::FirstU => self.kappa_du(s, t, u),
        };
        check_finite(value, "kernel", || format!("(s, t, u) = ({s}, {t}, {u})"))
    }
}

/// Kernel assembled from closures, for ad-hoc and test problems.
#[derive(Clone)]
pub struct ClosureKernel {
    lower: KernelFn,
    upper: KernelFn,
    lower_du: KernelFn,
    upper_du: KernelFn,
}

impl ClosureKernel {
    /// A kernel with no diagonal jump: both branches are `value`.
    pub fn smooth<V, D>(value: V, du: D) -> Self
    where
        V: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        let value: KernelFn = Arc::new(value);
        let du: KernelFn = Arc::new(du);
        Self {
            lower: value.clone(),
            upper: value,
            lower_du: du.clone(),
            upper_du: du,
        }
    }

    pub fn branched<A, B, C, D>(lower: A, upper: B, lower_du: C, upper_du: D) -> Self
    where
        A: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        C: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            lower: Arc::new(lower),
            upper: Arc::new(upper),
            lower_du: Arc::new(lower_du),
            upper_du: Arc::new(upper_du),
        }
    }
}

impl Kernel for ClosureKernel {
    fn lower(&self, s: f64, t: f64, u: f64) -> f64 {
        (self.lower)(s, t, u)
    }
    fn upper(&self, s: f64, t: f64, u: f64) -> f64 {
        (self.upper)(s, t, u)
    }
    fn lower_du(&self, s: f64, t: f64, u: f64) -> f64 {
        (self.lower_du)(s, t, u)
    }
    fn upper_du(&self, s: f64, t: f64, u: f64) -> f64 {
        (self.upper_du)(s, t, u)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroKernel;

impl Kernel for ZeroKernel {
    fn lower(&self, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn upper(&self, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn lower_du(&self, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn upper_du(&self, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn is_zero(&self) -> bool {
        true
    }
}

/// Hammerstein kernel `G(s, t) ψ(t, u)` with the Dirichlet Green's function
/// of `-y'' + γ² y` on `[0, 1]`:
///
/// `G(s, t) = sinh(γ min(s,t)) sinh(γ (1 - max(s,t))) / (γ sinh γ)`,
/// `ψ(t, u) = γ² u - 2u³`.
#[derive(Debug, Clone, Copy)]
pub struct GreenCubicKernel {
    gamma: f64,
    denom: f64,
}

impl GreenCubicKernel {
    pub fn new(gamma: f64) -> Self {
        Self {
            gamma,
            denom: gamma * gamma.sinh(),
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `G` on `lo <= hi`.
    #[inline]
    fn green_ordered(&self, lo: f64, hi: f64) -> f64 {
        (self.gamma * lo).sinh() * (self.gamma * (1.0 - hi)).sinh() / self.denom
    }

    pub fn green(&self, s: f64, t: f64) -> f64 {
        self.green_ordered(s.min(t), s.max(t))
    }

    #[inline]
    pub fn psi(&self, u: f64) -> f64 {
        self.gamma * self.gamma * u - 2.0 * u * u * u
    }

    #[inline]
    pub fn psi_du(&self, u: f64) -> f64 {
        self.gamma * self.gamma - 6.0 * u * u
    }
}

impl Kernel for GreenCubicKernel {
    fn lower(&self, s: f64, t: f64, u: f64) -> f64 {
        self.green_ordered(t, s) * self.psi(u)
    }
    fn upper(&self, s: f64, t: f64, u: f64) -> f64 {
        self.green_ordered(s, t) * self.psi(u)
    }
    fn lower_du(&self, s: f64, t: f64, u: f64) -> f64 {
        self.green_ordered(t, s) * self.psi_du(u)
    }
    fn upper_du(&self, s: f64, t: f64, u: f64) -> f64 {
        self.green_ordered(s, t) * self.psi_du(u)
    }
}

pub const BUILTIN_NAME: &str = "rpk-aks";

/// The two-point boundary value problem `φ'' = 2φ³`, `φ(0) = 2`,
/// `φ(1) = 2/3`, cast as a Hammerstein equation with `γ = √12`.
/// Exact solution `φ(s) = 2/(2s + 1)`.
pub fn builtin() -> UrysohnProblem {
    let gamma = 12f64.sqrt();
    let sinh_g = gamma.sinh();
    UrysohnProblem::new(BUILTIN_NAME, GreenCubicKernel::new(gamma), move |s: f64| {
        (2.0 * (gamma * (1.0 - s)).sinh() + 2.0 / 3.0 * (gamma * s).sinh()) / sinh_g
    })
    .with_exact(|s| 2.0 / (2.0 * s + 1.0))
}

/// `κ ≡ 0`, so the solution is `f(s) = 1 + s + s²` itself.
pub fn zero_kernel() -> UrysohnProblem {
    UrysohnProblem::new("zero-kernel", ZeroKernel, |s| 1.0 + s + s * s).with_exact(|s| 1.0 + s + s * s)
}

/// Smooth linear kernel `κ(s, t, u) = s t u` with exact solution `φ(s) = s`.
pub fn linear_separable() -> UrysohnProblem {
    UrysohnProblem::new(
        "linear-separable",
        ClosureKernel::smooth(|s, t, u| s * t * u, |s, t, _| s * t),
        |s| 2.0 * s / 3.0,
    )
    .with_exact(|s| s)
}

pub struct RegistryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub build: fn() -> UrysohnProblem,
}

static REGISTRY: [RegistryEntry; 3] = [
    RegistryEntry {
        name: BUILTIN_NAME,
        description: "Green's-function Hammerstein kernel, psi(t,u) = 12u - 2u^3, exact 2/(2s+1)",
        build: builtin,
    },
    RegistryEntry {
        name: "zero-kernel",
        description: "kappa = 0, f(s) = 1 + s + s^2",
        build: zero_kernel,
    },
    RegistryEntry {
        name: "linear-separable",
        description: "smooth linear kernel s*t*u, exact solution s",
        build: linear_separable,
    },
];

pub fn registry() -> &'static [RegistryEntry] {
    &REGISTRY
}

pub fn problem_by_name(name: &str) -> Result<UrysohnProblem> {
    registry()
        .iter()
        .find(|e| e.name == name)
        .map(|e| (e.build)())
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}

/// Number of uniform sample points used by [`residual_check`].
pub const RESIDUAL_SAMPLES: usize = 101;

/// `max_s |x(s) - ∫ κ(s, t, x(t)) dt - f(s)|` over 101 uniform `s`.
///
/// The integral is split at `t = s` and each side integrated by composite
/// 10-point Gauss on `panels` panels, so the kink on the diagonal sits on a
/// panel boundary. Independent of every discretisation used by the solvers.
pub fn residual_check<F: Fn(f64) -> f64>(problem: &UrysohnProblem, candidate: F, panels: usize) -> Result<f64> {
    if panels < 16 {
        return Err(Error::parameter(
            "panels",
            format!("need at least 16 panels, got {panels}"),
        ));
    }
    let rule = QuadratureRule::gauss(10)?;
    let mut worst: f64 = 0.0;
    for i in 0..RESIDUAL_SAMPLES {
        let s = i as f64 / (RESIDUAL_SAMPLES - 1) as f64;
        let integrand = |t: f64| problem.kappa(s, t, candidate(t));
        let left = if s > 0.0 {
            rule.integrate_panels(0.0, s, panels, integrand)
        } else {
            0.0
        };
        let right = if s < 1.0 {
            rule.integrate_panels(s, 1.0, panels, integrand)
        } else {
            0.0
        };
        let r = candidate(s) - left - right - problem.rhs(s);
        let r = check_finite(r, "residual", || format!("s = {s}"))?;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}
