//! Periodic solutions of the Euler–Lagrange equation
//!
//! ```text
//! (Φ'(v'))' − f(v')/v + A v⁻ᵐ = λ
//! ```
//!
//! through their first integral `v f(v') + A/(m−2) v^(2−m) + (λ/2) v² = C₀`.
//! A branch is fixed by `(λ, C₀)`; its turning points are where `f = 1`, and
//! the period and profile follow from quadrature of `dξ/dv` after the
//! substitution `v = a + (b − a) sin²θ`, which removes the inverse-square-root
//! singularities at both turning points.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)] // shadowed by std's inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{FilmProfile, PeriodicGrid, PressureField};
use crate::model::{self, ModelParams};
use crate::quadrature::{self, GaussLegendre};
use crate::roots;

const ROOT_TOL: f64 = 1e-14;
const PERIOD_TOL: f64 = 1e-11;
const PANELS: usize = 64;

/// `λ* = −(2/r₀²)(r₀ − C₀ + A/(m−2) r₀^(2−m))`, the multiplier of the branch that touches `v = r₀`.
pub fn lambda_star_from_c0(c0: f64, params: &ModelParams) -> Result<f64> {
    let (lo, hi) = touchdown_c0_window(params)?;
    if !(c0 >= lo && c0 < hi) {
        return Err(Error::Branch(format!("C0 = {c0} outside touch-down window [{lo}, {hi})")));
    }
    // Written so that C₀ = r₀/2, A = 0 gives exactly −1/r₀.
    let r0 = params.r0;
    Ok(-(2.0 * (1.0 - (c0 - stab_r0(params)) / r0)) / r0)
}

/// Inverse of [`lambda_star_from_c0`]: `C₀ = r₀ + λ r₀²/2 + A/(m−2) r₀^(2−m)`.
pub fn c0_from_lambda_star(lambda: f64, params: &ModelParams) -> Result<f64> {
    touchdown_c0_window(params)?;
    let r0 = params.r0;
    let lo = params.a * r0.powf(-params.m) - 1.0 / r0;
    if !(lambda >= lo && lambda < 0.0) {
        return Err(Error::Branch(format!("lambda* = {lambda} outside [{lo}, 0)")));
    }
    Ok(r0 + 0.5 * lambda * r0 * r0 + stab_r0(params))
}

// A/(m−2) r₀^(2−m)
fn stab_r0(params: &ModelParams) -> f64 {
    let c = params.stabilization_energy_coeff();
    if c == 0.0 {
        0.0
    } else {
        c * params.r0.powf(2.0 - params.m)
    }
}

/// `[½(r₀ + A m/(m−2) r₀^(2−m)), r₀ + A/(m−2) r₀^(2−m))`, valid when `0 ≤ A < r₀^(m−1)`.
pub fn touchdown_c0_window(params: &ModelParams) -> Result<(f64, f64)> {
    params.validate_energy()?;
    let r0 = params.r0;
    if params.a >= r0.powf(params.m - 1.0) {
        return Err(Error::Branch(format!(
            "A = {} must be below r0^(m-1) = {}",
            params.a,
            r0.powf(params.m - 1.0)
        )));
    }
    let s = stab_r0(params);
    Ok((0.5 * (r0 + params.m * s), r0 + s))
}

/// Turning points `v₁ ≤ v₂` of the `A = 0` branch.
pub fn extrema_a0(lambda: f64, c0: f64) -> Result<(f64, f64)> {
    if !(lambda < 0.0) {
        return Err(Error::NoPeriodicSolution(format!("lambda = {lambda} must be negative")));
    }
    if !(c0 > 0.0) {
        return Err(Error::NoPeriodicSolution(format!("C0 = {c0} must be positive")));
    }
    let lc = lambda * c0;
    if lc < -0.5 {
        return Err(Error::NoPeriodicSolution(format!("lambda*C0 = {lc} below -1/2")));
    }
    let root = (1.0 + 2.0 * lc).max(0.0).sqrt();
    Ok((-(1.0 - root) / lambda, -(1.0 + root) / lambda))
}

/// `g(v) = v^(m−2)(v − v₁)(v − v₂)`.
fn g_poly(v: f64, v1: f64, v2: f64, m: f64) -> f64 {
    v.powf(m - 2.0) * (v - v1) * (v - v2)
}

/// Critical points of `g` ordered by value: `(location of the local maximum in
/// (0, v₁), location of the local minimum in (v₁, v₂))`.
pub fn g_critical_points(lambda: f64, c0: f64, m: f64) -> Result<(f64, f64)> {
    let disc = 1.0 + 2.0 * m * (m - 2.0) * lambda * c0 / ((m - 1.0) * (m - 1.0));
    if !(disc >= 0.0) {
        return Err(Error::NoPeriodicSolution(format!(
            "lambda*C0 = {} below -(m-1)^2/(2m(m-2))",
            lambda * c0
        )));
    }
    let k = -(m - 1.0) / (m * lambda);
    let r = disc.sqrt();
    Ok((k * (1.0 - r), k * (1.0 + r)))
}

/// Largest stabilization amplitude for which the `A > 0` branch is periodic,
/// `A* = −(λ(m−2)/2) g(ṽ)` at the local maximum `ṽ` of `g`.
pub fn a_star(lambda: f64, c0: f64, m: f64) -> Result<f64> {
    let (v1, v2) = extrema_a0(lambda, c0)?;
    let (vmax, _) = g_critical_points(lambda, c0, m)?;
    Ok(-0.5 * lambda * (m - 2.0) * g_poly(vmax, v1, v2, m))
}

/// Turning points `v₁* < v₁ < v₂ < v₂*` of the `A > 0` branch: the roots of
/// `g(v) = −2A/(λ(m−2))` that enclose `[v₁, v₂]`.
pub fn extrema_apos(lambda: f64, c0: f64, params: &ModelParams) -> Result<(f64, f64)> {
    let m = params.m;
    if !(m > 2.0) {
        return Err(Error::InvalidParameter(format!("A > 0 branch needs m > 2, got {m}")));
    }
    if !(params.a > 0.0) {
        return Err(Error::Branch(format!("A = {} must be positive on this branch", params.a)));
    }
    let (v1, v2) = extrema_a0(lambda, c0)?;
    let lc = lambda * c0;
    let lc_min = -(m - 1.0) * (m - 1.0) / (2.0 * m * (m - 2.0));
    if !(lc > lc_min) {
        return Err(Error::NoPeriodicSolution(format!("lambda*C0 = {lc} not above {lc_min}")));
    }
    let (vmax, _) = g_critical_points(lambda, c0, m)?;
    let t = -2.0 * params.a / (lambda * (m - 2.0));
    let gmax = g_poly(vmax, v1, v2, m);
    if t > gmax {
        return Err(Error::NoPeriodicSolution(format!(
            "A = {} exceeds A* = {}",
            params.a,
            -0.5 * lambda * (m - 2.0) * gmax
        )));
    }
    let eq = |v: f64| g_poly(v, v1, v2, m) - t;
    let lo = if t == gmax { vmax } else { roots::bracketed(vmax, v1, ROOT_TOL, eq)? };
    let mut top = 2.0 * v2;
    while eq(top) < 0.0 {
        top *= 2.0;
    }
    let hi = roots::bracketed(v2, top, ROOT_TOL, eq)?;
    Ok((lo, hi))
}

/// Small-amplitude period `2π v*` about `v* = −1/λ` (`A = 0`).
pub fn harmonic_period(lambda: f64) -> f64 {
    -2.0 * PI / lambda
}

/// A periodic Euler–Lagrange branch.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizerBranch {
    pub lambda: f64,
    pub c0: f64,
    pub a: f64,
    pub m: f64,
    pub r0: f64,
    /// Roots of `(λ/2)v² + v − C₀`.
    pub v1: f64,
    pub v2: f64,
    /// Turning points of the actual profile (equal to `v1`, `v2` when `A = 0`).
    pub v1_star: f64,
    pub v2_star: f64,
    /// `None` when the turning points coincide (constant solution).
    pub tau: Option<f64>,
    pub touchdown: bool,
}

impl MinimizerBranch {
    pub fn new(lambda: f64, c0: f64, params: &ModelParams) -> Result<Self> {
        params.validate_energy()?;
        let (v1, v2) = extrema_a0(lambda, c0)?;
        let (v1s, v2s) = if params.a > 0.0 { extrema_apos(lambda, c0, params)? } else { (v1, v2) };
        let mut b = Self {
            lambda,
            c0,
            a: params.a,
            m: params.m,
            r0: params.r0,
            v1,
            v2,
            v1_star: v1s,
            v2_star: v2s,
            tau: None,
            touchdown: (v1s - params.r0).abs() <= 1e-9 * params.r0,
        };
        if v2s > v1s {
            b.tau = Some(b.compute_period()?);
        }
        Ok(b)
    }

    /// The branch through `v = r₀` for the given `C₀`.
    pub fn touchdown(c0: f64, params: &ModelParams) -> Result<Self> {
        Self::new(lambda_star_from_c0(c0, params)?, c0, params)
    }

    fn coeff(&self) -> f64 {
        if self.a == 0.0 {
            0.0
        } else {
            self.a / (self.m - 2.0)
        }
    }

    /// `f(v')` along the branch, from the first integral.
    pub fn first_integral_f(&self, v: f64) -> f64 {
        let stab = if self.a == 0.0 { 0.0 } else { self.coeff() * v.powf(2.0 - self.m) };
        (self.c0 - 0.5 * self.lambda * v * v - stab) / v
    }

    /// `v(θ) = v₁* + (v₂* − v₁*) sin²θ`.
    fn v_of_theta(&self, theta: f64) -> f64 {
        let s = theta.sin();
        self.v1_star + (self.v2_star - self.v1_star) * s * s
    }

    /// `½ dξ/dθ`: smooth and positive on `[0, π/2]`.
    fn xi_rate(&self, theta: f64) -> f64 {
        let s = self.v_of_theta(theta);
        let k = 2.0 * self.c0 / self.lambda;
        if self.a == 0.0 {
            return (s * s - k) / ((s + self.v1) * (s + self.v2)).sqrt();
        }
        let m = self.m;
        let c = self.coeff();
        let sm = s.powf(m - 2.0);
        let d = sm * (s * s - k) + 2.0 * c / self.lambda;
        let n1 = g_poly(s, self.v1, self.v2, m) + 2.0 * c / self.lambda;
        let w = self.v2_star - self.v1_star;
        let sc = theta.sin() * theta.cos();
        let r = -n1 / (w * w * sc * sc);
        let n2 = sm * (s + self.v1) * (s + self.v2) + 2.0 * c / self.lambda;
        d.abs() / (r * n2).sqrt()
    }

    fn compute_period(&self) -> Result<f64> {
        let lo_bad = self.a > 0.0 && {
            // f must stay in [0, 1]; N2 > 0 is f > −1 on the whole arc.
            let probe = GaussLegendre::new(16);
            probe.nodes.iter().any(|x| !(self.xi_rate(FRAC_PI_2 * 0.5 * (x + 1.0)) > 0.0))
        };
        if lo_bad {
            return Err(Error::NoPeriodicSolution("first integral leaves f in [0, 1]".into()));
        }
        let half = quadrature::integrate_refined(0.0, FRAC_PI_2, PERIOD_TOL, |t| self.xi_rate(t))?;
        Ok(4.0 * half)
    }

    /// Half-period inversion table `ξ(θ)`.
    pub fn shape(&self) -> Result<BranchShape<'_>> {
        let tau = self.tau.ok_or(Error::Degenerate("branch has coincident turning points"))?;
        let rule = GaussLegendre::new(20);
        let dt = FRAC_PI_2 / PANELS as f64;
        let mut cum = Vec::with_capacity(PANELS + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for k in 0..PANELS {
            let lo = k as f64 * dt;
            acc += 2.0 * rule.integrate(lo, lo + dt, |t| self.xi_rate(t));
            cum.push(acc);
        }
        Ok(BranchShape { branch: self, tau, rule, dt, cum })
    }
}

/// Evaluator of one branch profile with its minimum at `ξ = 0`.
#[derive(Debug, Clone)]
pub struct BranchShape<'a> {
    branch: &'a MinimizerBranch,
    tau: f64,
    rule: GaussLegendre,
    dt: f64,
    cum: Vec<f64>,
}

impl BranchShape<'_> {
    pub fn period(&self) -> f64 {
        self.tau
    }

    // ξ(θ) on [0, π/2]
    fn xi(&self, theta: f64) -> f64 {
        let k = ((theta / self.dt) as usize).min(PANELS - 1);
        let lo = k as f64 * self.dt;
        self.cum[k] + 2.0 * self.rule.integrate(lo, theta, |t| self.branch.xi_rate(t))
    }

    /// `v(ξ)` for any real `ξ` (periodic extension).
    pub fn value(&self, xi: f64) -> f64 {
        let half = self.cum[PANELS];
        let period = 2.0 * half;
        let mut x = xi - (xi / period).floor() * period;
        if x > half {
            x = 2.0 * half - x;
        }
        let k = self.cum.partition_point(|c| *c <= x).clamp(1, PANELS) - 1;
        let (c_lo, c_hi) = (self.cum[k], self.cum[k + 1]);
        let lo = k as f64 * self.dt;
        let mut theta = lo + self.dt * ((x - c_lo) / (c_hi - c_lo)).clamp(0.0, 1.0);
        for _ in 0..50 {
            let err = self.xi(theta) - x;
            // the A > 0 rate is 0/0 at the turning points themselves
            if err == 0.0 {
                break;
            }
            let step = err / (2.0 * self.branch.xi_rate(theta));
            theta = (theta - step).clamp(lo, lo + self.dt);
            if step.abs() < 1e-15 {
                break;
            }
        }
        self.branch.v_of_theta(theta)
    }
}

/// One period of the branch profile on `n_points` nodes, minimum at node 0.
///
/// Constant (degenerate) branches give the constant turning value over the
/// harmonic period.
pub fn minimizer_profile(branch: &MinimizerBranch, n_points: usize) -> Result<FilmProfile> {
    if n_points < 16 {
        return Err(Error::InvalidParameter(format!("minimizer profile needs >= 16 points, got {n_points}")));
    }
    let length = branch.tau.unwrap_or_else(|| harmonic_period(branch.lambda));
    minimizer_profile_on(branch, PeriodicGrid::new(length, n_points)?)
}

/// Branch profile sampled on `grid`, stretched so that one period fills the grid.
pub fn minimizer_profile_on(branch: &MinimizerBranch, grid: PeriodicGrid) -> Result<FilmProfile> {
    if branch.tau.is_none() {
        return FilmProfile::constant(grid, branch.v1_star);
    }
    let shape = branch.shape()?;
    let scale = shape.period() / grid.length();
    FilmProfile::from_fn(grid, |x| shape.value(x * scale))
}

/// Nodal `λ(ξ) := J(v)`; piecewise constant on exact minimizers.
pub fn lagrange_multiplier_field(profile: &FilmProfile, params: &ModelParams) -> Result<PressureField> {
    model::pressure(profile, params)
}
