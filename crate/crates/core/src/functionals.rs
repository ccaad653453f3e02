//! Integral diagnostics on periodic profiles.
//!
//! Every domain integral is the periodic trapezoid rule `h Σ g(ξᵢ)`. The
//! discrete energy
//!
//! ```text
//! E_h(v) = h Σ [ ½(vᵢ + vᵢ₊₁) Φ((vᵢ₊₁ − vᵢ)/h) + A/(m−2) vᵢ^(2−m) ]
//! ```
//!
//! is chosen so that `∂E_h/∂vᵢ = −h vᵢ Jᵢ` holds exactly with the pressure of
//! [`crate::model::pressure`]; the semi-discrete flow then dissipates `E_h` at
//! exactly the rate returned by [`dissipation_rate`].

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std's inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{FilmProfile, PressureField};
use crate::model::{self, Curvature, ModelParams};
use crate::quadrature;

/// Snapshot of the scalar diagnostics of one profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub mass: f64,
    pub energy: f64,
    /// Only for gravity runs, where `F(ξ, t)` is defined.
    pub modified_energy: Option<f64>,
    pub dissipation: f64,
    /// Mean pressure `J̄ = L⁻¹∫J`.
    pub lambda_bar: f64,
    pub min_v: f64,
    pub max_v: f64,
}

impl EnergyReport {
    pub fn new(profile: &FilmProfile, params: &ModelParams) -> Result<Self> {
        let j = model::pressure(profile, params)?;
        Ok(Self {
            mass: mass(profile),
            energy: energy(profile, params)?,
            modified_energy: None,
            dissipation: dissipation_from_pressure(profile, j.values(), params),
            lambda_bar: mean(j.values()),
            min_v: profile.min(),
            max_v: profile.max(),
        })
    }

    /// Adds `Ẽ` for a gravity run in a frame moving at `speed`.
    pub fn with_frame(mut self, profile: &FilmProfile, frame: &GravityFrame, params: &ModelParams) -> Result<Self> {
        self.modified_energy = Some(modified_energy(profile, frame, params)?);
        Ok(self)
    }
}

/// Wave speed, flux offset `ν` and nodal `F(ξ, t)` of a gravity frame.
#[derive(Debug, Clone, PartialEq)]
pub struct GravityFrame {
    pub speed: f64,
    pub nu: f64,
    /// `F` at nodes 0..N−1; `F[0] = 0`.
    pub f: Vec<f64>,
    /// `F(L)` from the same cumulative rule; zero when `ν` enforces periodicity.
    pub f_end: f64,
}

impl GravityFrame {
    /// Frame with `ν` chosen by [`nu_for_periodicity`].
    pub fn periodic(profile: &FilmProfile, speed: f64, params: &ModelParams) -> Result<Self> {
        let nu = nu_for_periodicity(profile, speed, params)?;
        Self::with_nu(profile, speed, nu, params)
    }

    pub fn with_nu(profile: &FilmProfile, speed: f64, nu: f64, params: &ModelParams) -> Result<Self> {
        let (f, f_end) = f_field_raw(profile, speed, nu, params)?;
        Ok(Self { speed, nu, f, f_end })
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// `∫v² dξ`.
pub fn mass(profile: &FilmProfile) -> f64 {
    mass_raw(profile.values(), profile.grid().spacing())
}

pub(crate) fn mass_raw(v: &[f64], h: f64) -> f64 {
    h * v.iter().map(|x| x * x).sum::<f64>()
}

/// Discrete energy `E_h` (see the module docs).
pub fn energy(profile: &FilmProfile, params: &ModelParams) -> Result<f64> {
    params.validate_energy()?;
    model::check_profile_positive(profile.values())?;
    Ok(energy_raw(profile.values(), profile.grid().spacing(), params))
}

pub(crate) fn energy_raw(v: &[f64], h: f64, params: &ModelParams) -> f64 {
    let n = v.len();
    let c = params.stabilization_energy_coeff();
    let mut e = 0.0;
    for i in 0..n {
        let vn = v[(i + 1) % n];
        e += 0.5 * (v[i] + vn) * Curvature::at((vn - v[i]) / h).phi;
        if c != 0.0 {
            e += c * v[i].powf(2.0 - params.m);
        }
    }
    h * e
}

/// `E(v) + (λ/2)∫v²`.
pub fn lagrangian(profile: &FilmProfile, params: &ModelParams, lambda: f64) -> Result<f64> {
    Ok(energy(profile, params)? + 0.5 * lambda * mass(profile))
}

/// Lower bound `(r₀ + A/(m−2) M̄^(−(m−2)/2)) L` on the energy of profiles with `v ≥ r₀` and mass `M`.
pub fn energy_lower_bound(mass: f64, length: f64, params: &ModelParams) -> f64 {
    let c = params.stabilization_energy_coeff();
    let stab = if c == 0.0 { 0.0 } else { c * (mass / length).powf(-(params.m - 2.0) / 2.0) };
    (params.r0 + stab) * length
}

/// `σ⁻¹ h Σ Q_{i+½} ((Jᵢ₊₁ − Jᵢ)/h)²` with the regularised mobility at half-point averages.
pub fn dissipation_rate(profile: &FilmProfile, params: &ModelParams) -> Result<f64> {
    let j = model::pressure(profile, params)?;
    Ok(dissipation_from_pressure(profile, j.values(), params))
}

fn dissipation_from_pressure(profile: &FilmProfile, j: &[f64], params: &ModelParams) -> f64 {
    let v = profile.values();
    let n = v.len();
    let h = profile.grid().spacing();
    let mut d = 0.0;
    for i in 0..n {
        let k = (i + 1) % n;
        let (q, _) = model::mobility_reg_pair(0.5 * (v[i] + v[k]), params);
        let dj = (j[k] - j[i]) / h;
        d += q * dj * dj;
    }
    h * d / params.sigma
}

/// Mean pressure `J̄`.
pub fn lambda_bar(profile: &FilmProfile, params: &ModelParams) -> Result<f64> {
    Ok(mean(model::pressure(profile, params)?.values()))
}

/// Entropy `G̃(z) = ∫_{s₀}^{z} |s| ∫_{s₀}^{s} |v|^α / |Q(v)| dv ds` by nested adaptive quadrature.
pub fn entropy_g(z: f64, alpha: f64, s0: f64, params: &ModelParams) -> Result<f64> {
    let r0 = params.r0;
    if !(z > r0 && z.is_finite()) {
        return Err(Error::NonPositive { quantity: "z - r0", value: z - r0 });
    }
    if !(s0 > r0 && s0.is_finite()) {
        return Err(Error::NonPositive { quantity: "s0 - r0", value: s0 - r0 });
    }
    let inner_fail = core::cell::Cell::new(false);
    let inner = |s: f64| {
        quadrature::integrate_adaptive(s0, s, 1e-14, 1e-12, |v| v.abs().powf(alpha) / model::q_raw(v, r0).abs())
            .unwrap_or_else(|_| {
                inner_fail.set(true);
                f64::NAN
            })
    };
    let g = quadrature::integrate_adaptive(s0, z, 1e-14, 1e-10, |s| s.abs() * inner(s))?;
    if inner_fail.get() {
        return Err(Error::Quadrature("inner entropy integral did not converge"));
    }
    Ok(g)
}

/// `(∫1/Q, ∫v²/Q, ∫v⁴/Q)`; every node must lie strictly above `r₀`.
pub(crate) fn inverse_mobility_moments(profile: &FilmProfile, params: &ModelParams) -> Result<[f64; 3]> {
    let h = profile.grid().spacing();
    let mut acc = [0.0; 3];
    for (i, &v) in profile.values().iter().enumerate() {
        let q = model::mobility(v, params)?;
        if !(q > 0.0) {
            return Err(Error::SingularMobility { index: i, value: v });
        }
        let v2 = v * v;
        acc[0] += h / q;
        acc[1] += h * v2 / q;
        acc[2] += h * v2 * v2 / q;
    }
    Ok(acc)
}

/// `ν = ((V/2)∫v²/Q − L) / ∫1/Q`, which makes `F(L) = F(0)`.
pub fn nu_for_periodicity(profile: &FilmProfile, speed: f64, params: &ModelParams) -> Result<f64> {
    let [i0, i2, _] = inverse_mobility_moments(profile, params)?;
    Ok((0.5 * speed * i2 - profile.grid().length()) / i0)
}

/// `F(ξ) = −σ ∫₀^ξ (1 − (V/2)v²/Q + ν/Q) dy` by the cumulative nodal trapezoid rule.
pub fn f_field(profile: &FilmProfile, frame_speed: f64, nu: f64, params: &ModelParams) -> Result<PressureField> {
    let (f, _) = f_field_raw(profile, frame_speed, nu, params)?;
    PressureField::new(*profile.grid(), f)
}

fn f_field_raw(profile: &FilmProfile, speed: f64, nu: f64, params: &ModelParams) -> Result<(Vec<f64>, f64)> {
    let v = profile.values();
    let n = v.len();
    let h = profile.grid().spacing();
    let mut g = Vec::with_capacity(n);
    for (i, &x) in v.iter().enumerate() {
        let q = model::mobility(x, params)?;
        if !(q > 0.0) {
            return Err(Error::SingularMobility { index: i, value: x });
        }
        g.push(1.0 - 0.5 * speed * x * x / q + nu / q);
    }
    let mut f = Vec::with_capacity(n);
    let mut acc = 0.0;
    f.push(0.0);
    for i in 0..n {
        acc += 0.5 * h * (g[i] + g[(i + 1) % n]);
        if i + 1 < n {
            f.push(-params.sigma * acc);
        }
    }
    Ok((f, -params.sigma * acc))
}

/// `Ẽ = E + ½∫v²F`.
pub fn modified_energy(profile: &FilmProfile, frame: &GravityFrame, params: &ModelParams) -> Result<f64> {
    if frame.f.len() != profile.values().len() {
        return Err(Error::GridMismatch("F field and profile differ in length"));
    }
    let h = profile.grid().spacing();
    let pot: f64 = profile.values().iter().zip(&frame.f).map(|(v, f)| 0.5 * v * v * f).sum();
    Ok(energy(profile, params)? + h * pot)
}

/// Closed-form wave speed and flux offset from the two integral conditions
/// `L − (V/2)∫v²/Q + ν∫1/Q = 0` and `M − (V/2)∫v⁴/Q + ν∫v²/Q = 0`.
pub fn tw_speed_formula(profile: &FilmProfile, params: &ModelParams) -> Result<(f64, f64)> {
    let [i0, i2, i4] = inverse_mobility_moments(profile, params)?;
    let l = profile.grid().length();
    let m = mass(profile);
    let den = i2 * i2 - i0 * i4;
    if den.abs() < 1e-12 * (i2 * i2).max(i0 * i4) {
        return Err(Error::Degenerate("speed formula denominator vanishes (near-constant profile)"));
    }
    Ok((2.0 * (l * i2 - m * i0) / den, (l * i4 - m * i2) / den))
}
