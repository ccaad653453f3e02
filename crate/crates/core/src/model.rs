//! Scalar building blocks of the model: mobility, curvature functions,
//! stabilization term and the nodal pressure `J`.

use alloc::format;

#[allow(unused_imports)] // shadowed by std's inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{FilmProfile, PressureField};

/// Physical and model constants.
///
/// `a` and `m` parametrise the film stabilization `A/vᵐ`, `mu` switches
/// gravity on (`1`) or off (`0`), `speed` is the frame speed `V` used by the
/// travelling-frame equation (zero for the lab frame) and `eps_reg` is the
/// additive mobility regularization used inside Newton solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub sigma: f64,
    pub r0: f64,
    pub a: f64,
    pub m: f64,
    pub mu: f64,
    pub speed: f64,
    pub eps_reg: f64,
}

impl ModelParams {
    /// Bond number `sigma` and fibre radius `r0`; no stabilization, no gravity, lab frame.
    pub fn new(sigma: f64, r0: f64) -> Self {
        Self { sigma, r0, a: 0.0, m: 3.0, mu: 0.0, speed: 0.0, eps_reg: 0.0 }
    }

    pub fn with_stabilization(mut self, a: f64, m: f64) -> Self {
        self.a = a;
        self.m = m;
        self
    }

    pub fn with_gravity(mut self, on: bool) -> Self {
        self.mu = if on { 1.0 } else { 0.0 };
        self
    }

    pub fn with_speed(mut self, speed: f64) -> Self {
        self.speed = speed;
        self
    }

    pub fn with_eps_reg(mut self, eps: f64) -> Self {
        self.eps_reg = eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.sigma, self.r0, self.a, self.m, self.mu, self.speed, self.eps_reg]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("all model parameters must be finite".into()));
        }
        if self.sigma <= 0.0 {
            return Err(Error::NonPositive { quantity: "sigma", value: self.sigma });
        }
        if self.r0 <= 0.0 {
            return Err(Error::NonPositive { quantity: "r0", value: self.r0 });
        }
        if self.m <= 0.0 {
            return Err(Error::NonPositive { quantity: "m", value: self.m });
        }
        if self.a < 0.0 {
            return Err(Error::InvalidParameter(format!("A must be >= 0, got {}", self.a)));
        }
        if self.mu != 0.0 && self.mu != 1.0 {
            return Err(Error::InvalidParameter(format!("mu must be 0 or 1, got {}", self.mu)));
        }
        if self.eps_reg < 0.0 {
            return Err(Error::InvalidParameter(format!("eps_reg must be >= 0, got {}", self.eps_reg)));
        }
        Ok(())
    }

    /// Extra requirement whenever the energy `∫ A/(m−2) v^(2−m)` is evaluated.
    pub fn validate_energy(&self) -> Result<()> {
        self.validate()?;
        if self.a > 0.0 && self.m <= 2.0 {
            return Err(Error::InvalidParameter(format!(
                "energy functional needs m > 2 when A > 0 (got m = {})",
                self.m
            )));
        }
        Ok(())
    }

    /// `A/(m−2)`, taken as zero when `A = 0` so that `m = 2` is harmless there.
    #[inline]
    pub fn stabilization_energy_coeff(&self) -> f64 {
        if self.a == 0.0 {
            0.0
        } else {
            self.a / (self.m - 2.0)
        }
    }

    #[inline]
    pub fn has_gravity(&self) -> bool {
        self.mu != 0.0
    }

    /// Default touch-down tolerance, `1e-9·r₀`.
    #[inline]
    pub fn touchdown_tol(&self) -> f64 {
        1e-9 * self.r0
    }
}

// Below |u/r0 - 1| < SERIES_BAND the closed form cancels badly; use the Taylor series.
const SERIES_BAND: f64 = 0.02;

#[inline]
pub(crate) fn q_raw(u: f64, r0: f64) -> f64 {
    let x = u / r0 - 1.0;
    if x.abs() < SERIES_BAND {
        let r4 = r0 * r0 * r0 * r0;
        return r4 * x * x * x * q_series(x);
    }
    let u2 = u * u;
    let r2 = r0 * r0;
    0.25 * u2 * u2 * (u / r0).ln() - 0.1875 * (u2 - r2) * (u2 - r2 / 3.0)
}

#[inline]
pub(crate) fn dq_raw(u: f64, r0: f64) -> f64 {
    let x = u / r0 - 1.0;
    if x.abs() < SERIES_BAND {
        let r3 = r0 * r0 * r0;
        return r3 * x * x * dq_series(x);
    }
    let u3 = u * u * u;
    u3 * (u / r0).ln() - 0.5 * u3 + 0.5 * r0 * r0 * u
}

// Q(r0(1+x)) / (r0^4 x^3)
#[inline]
fn q_series(x: f64) -> f64 {
    const C: [f64; 8] = [
        1.0 / 3.0,
        1.0 / 3.0,
        1.0 / 20.0,
        -1.0 / 120.0,
        1.0 / 420.0,
        -1.0 / 1120.0,
        1.0 / 2520.0,
        -1.0 / 5040.0,
    ];
    C.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

// Q'(r0(1+x)) / (r0^3 x^2)
#[inline]
fn dq_series(x: f64) -> f64 {
    const C: [f64; 8] = [
        1.0,
        4.0 / 3.0,
        1.0 / 4.0,
        -1.0 / 20.0,
        1.0 / 60.0,
        -1.0 / 140.0,
        1.0 / 280.0,
        -1.0 / 504.0,
    ];
    C.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[inline]
fn check_positive(u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { quantity: "film position", value: u })
    }
}

/// Mobility `Q(u) = ¼u⁴ log(u/r₀) − (3/16)(u² − r₀²)(u² − r₀²/3)`.
pub fn mobility(u: f64, params: &ModelParams) -> Result<f64> {
    check_positive(u)?;
    Ok(q_raw(u, params.r0))
}

/// Regularised mobility `|Q(u)| + eps_reg`.
pub fn mobility_reg(u: f64, params: &ModelParams) -> Result<f64> {
    check_positive(u)?;
    Ok(q_raw(u, params.r0).abs() + params.eps_reg)
}

/// `dQ/du`.
pub fn mobility_derivative(u: f64, params: &ModelParams) -> Result<f64> {
    check_positive(u)?;
    Ok(dq_raw(u, params.r0))
}

/// `(|Q| + ε, d(|Q| + ε)/du)`; the caller guarantees `u > 0`.
#[inline]
pub(crate) fn mobility_reg_pair(u: f64, params: &ModelParams) -> (f64, f64) {
    let q = q_raw(u, params.r0);
    let dq = dq_raw(u, params.r0);
    if q < 0.0 {
        (-q + params.eps_reg, -dq)
    } else {
        (q + params.eps_reg, dq)
    }
}

/// `f`, `Φ = 1/f`, `Φ'` and `Φ''` at a slope `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature {
    pub f: f64,
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
}

impl Curvature {
    #[inline]
    pub fn at(z: f64) -> Self {
        let phi = z.hypot(1.0);
        let f = 1.0 / phi;
        Self { f, phi, dphi: z * f, ddphi: f * f * f }
    }

    /// `df/dz = −z f³`.
    #[inline]
    pub fn df(&self, z: f64) -> f64 {
        -z * self.ddphi
    }
}

/// The stabilization term `A u⁻ᵐ` as it enters `J`.
pub fn stabilization(u: f64, params: &ModelParams) -> Result<f64> {
    check_positive(u)?;
    if params.a == 0.0 {
        return Ok(0.0);
    }
    Ok(params.a * u.powf(-params.m))
}

/// Nodal pressure `J = (Φ'(v_ξ))_ξ − f(v_ξ)/v + A v⁻ᵐ`.
///
/// Slopes live on half-points. The azimuthal term uses the mean of `f` over
/// the two adjacent half-point slopes, which makes `−h vᵢ Jᵢ` the exact
/// gradient of the discrete energy used in [`crate::functionals::energy`].
pub fn pressure(profile: &FilmProfile, params: &ModelParams) -> Result<PressureField> {
    let grid = *profile.grid();
    let mut out = alloc::vec![0.0; grid.len()];
    pressure_into(profile.values(), grid.spacing(), params, &mut out);
    PressureField::new(grid, out)
}

/// Fills `out` with `J` for nodal values `v` (periodic, spacing `h`); `v > 0` assumed.
pub(crate) fn pressure_into(v: &[f64], h: f64, params: &ModelParams, out: &mut [f64]) {
    let n = v.len();
    let slope = |i: usize| (v[(i + 1) % n] - v[i]) / h;
    let mut prev = Curvature::at(slope(n - 1));
    for i in 0..n {
        let next = Curvature::at(slope(i));
        let stab = if params.a == 0.0 { 0.0 } else { params.a * v[i].powf(-params.m) };
        out[i] = (next.dphi - prev.dphi) / h - 0.5 * (next.f + prev.f) / v[i] + stab;
        prev = next;
    }
}

/// `J` together with `∂Jᵢ/∂v_{i−1}`, `∂Jᵢ/∂vᵢ`, `∂Jᵢ/∂v_{i+1}`.
pub(crate) fn pressure_with_jacobian(
    v: &[f64],
    h: f64,
    params: &ModelParams,
    j: &mut [f64],
    dj: &mut [[f64; 3]],
) {
    let n = v.len();
    let h2 = h * h;
    let slope = |i: usize| (v[(i + 1) % n] - v[i]) / h;
    let mut s_prev = slope(n - 1);
    let mut prev = Curvature::at(s_prev);
    for i in 0..n {
        let s_next = slope(i);
        let next = Curvature::at(s_next);
        let vi = v[i];
        let (stab, dstab) = if params.a == 0.0 {
            (0.0, 0.0)
        } else {
            let p = params.a * vi.powf(-params.m);
            (p, -params.m * p / vi)
        };
        let fsum = next.f + prev.f;
        j[i] = (next.dphi - prev.dphi) / h - 0.5 * fsum / vi + stab;

        let df_next = next.df(s_next);
        let df_prev = prev.df(s_prev);
        let left = prev.ddphi / h2 + 0.5 * df_prev / (h * vi);
        let right = next.ddphi / h2 - 0.5 * df_next / (h * vi);
        let centre = -(next.ddphi + prev.ddphi) / h2 - 0.5 * (df_prev - df_next) / (h * vi)
            + 0.5 * fsum / (vi * vi)
            + dstab;
        dj[i] = [left, centre, right];

        s_prev = s_next;
        prev = next;
    }
}

/// Checks every nodal value is positive and returns the first offender otherwise.
pub(crate) fn check_profile_positive(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
        Some(i) => Err(Error::NonPositive { quantity: "film position", value: v[i] }),
        None => Ok(()),
    }
}
