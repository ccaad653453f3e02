//! Fully implicit time integration of
//!
//! ```text
//! v v_t + σ⁻¹[Q(v) J_ξ]_ξ + (μQ(v) − (V/2)v²)_ξ = 0
//! ```
//!
//! Backward Euler on `½v²` in conservative form,
//!
//! ```text
//! (vᵢ² − pᵢ²)/(2Δt) + (F_{i+½} − F_{i−½})/h = sᵢ,
//! F_{i+½} = σ⁻¹ q (Jᵢ₊₁ − Jᵢ)/h + μ q − (V/2)(vᵢ² + vᵢ₊₁²)/2,   q = Q_ε((vᵢ + vᵢ₊₁)/2),
//! ```
//!
//! solved by Newton's method with the analytic cyclic pentadiagonal Jacobian.
//! Flux differences telescope, so mass is conserved up to the Newton residual.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by std's inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::functionals::{self, EnergyReport, GravityFrame};
use crate::grid::{FilmProfile, PeriodicGrid};
use crate::linalg::BorderedBand;
use crate::minimizers::{self, MinimizerBranch};
use crate::model::{self, ModelParams};

// Stencil half-width of the residual.
const HALF_WIDTH: usize = 2;

/// How the Newton Jacobian is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JacobianMode {
    #[default]
    Analytic,
    /// Central differences restricted to the stencil; for verification only.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Snapshot cadence in time units; `0` disables snapshots after the initial one.
    pub snapshot_every: f64,
    /// Diagnostics cadence in time units; `0` samples only the start and the end.
    pub diagnostics_every: f64,
    pub jacobian: JacobianMode,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 1.0,
            newton_tol: 1e-10,
            newton_max_iter: 50,
            dt_min: 1e-12,
            dt_max: 0.1,
            snapshot_every: 0.0,
            diagnostics_every: 0.0,
            jacobian: JacobianMode::Analytic,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidParameter(msg));
        if !(self.dt_min > 0.0 && self.dt_min <= self.dt && self.dt <= self.dt_max) {
            return bad(alloc::format!(
                "need 0 < dt_min <= dt <= dt_max, got {} / {} / {}",
                self.dt_min,
                self.dt,
                self.dt_max
            ));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(alloc::format!("t_end must be finite and >= 0, got {}", self.t_end));
        }
        if !(self.newton_tol > 0.0) || self.newton_max_iter == 0 {
            return bad("newton_tol and newton_max_iter must be positive".into());
        }
        if !(self.snapshot_every >= 0.0 && self.diagnostics_every >= 0.0) {
            return bad("output cadences must be >= 0".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub profile: FilmProfile,
    pub step_count: usize,
    pub last_newton_iters: usize,
}

impl SimState {
    pub fn new(profile: FilmProfile) -> Self {
        Self { t: 0.0, profile, step_count: 0, last_newton_iters: 0 }
    }
}

/// Nodal forcing `s(ξᵢ, t)` added to the right-hand side (manufactured solutions).
pub type Source<'a> = &'a dyn Fn(f64, &PeriodicGrid, &mut [f64]);

/// Residual of the implicit scheme in the form `(vᵢ² − pᵢ²)/(2Δt) + (F_{i+½} − F_{i−½})/h`.
pub fn semidiscrete_residual(prev: &FilmProfile, next: &FilmProfile, dt: f64, params: &ModelParams) -> Result<Vec<f64>> {
    if prev.grid() != next.grid() {
        return Err(Error::GridMismatch("previous and next profiles live on different grids"));
    }
    model::check_profile_positive(next.values())?;
    let mut sys = System::new(prev, dt, params);
    let mut res = vec![0.0; prev.values().len()];
    sys.residual(next.values(), None, &mut res);
    let scale = 1.0 / (2.0 * dt);
    res.iter_mut().for_each(|r| *r *= scale);
    Ok(res)
}

/// Largest entrywise gap between the analytic and the finite-difference Jacobian,
/// relative to the largest analytic entry.
pub fn jacobian_discrepancy(prev: &FilmProfile, next: &FilmProfile, dt: f64, params: &ModelParams) -> Result<f64> {
    model::check_profile_positive(next.values())?;
    let n = next.values().len();
    let mut sys = System::new(prev, dt, params);
    let mut res = vec![0.0; n];
    let mut a = vec![0.0; n * n];
    let mut b = vec![0.0; n * n];
    sys.jacobian_dense(next.values(), JacobianMode::Analytic, &mut res, &mut a);
    sys.jacobian_dense(next.values(), JacobianMode::FiniteDifference, &mut res, &mut b);
    let big = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let gap = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    Ok(gap / big)
}

/// Fluxes `F_{i+½}` (stored at index `i`) and, if asked, their derivatives
/// with respect to `v_{i−1}, vᵢ, v_{i+1}, v_{i+2}`. `j` and `dj` receive the
/// pressure and its stencil derivatives.
pub(crate) fn half_point_fluxes(
    v: &[f64],
    h: f64,
    p: &ModelParams,
    j: &mut [f64],
    dj: &mut [[f64; 3]],
    flux: &mut [f64],
    dflux: Option<&mut [[f64; 4]]>,
) {
    let n = v.len();
    let inv_sigma = 1.0 / p.sigma;
    model::pressure_with_jacobian(v, h, p, j, dj);
    for i in 0..n {
        let k = (i + 1) % n;
        let (q, _) = model::mobility_reg_pair(0.5 * (v[i] + v[k]), p);
        let grad = (j[k] - j[i]) / h;
        flux[i] = inv_sigma * q * grad + p.mu * q - 0.25 * p.speed * (v[i] * v[i] + v[k] * v[k]);
    }
    if let Some(dflux) = dflux {
        for i in 0..n {
            let k = (i + 1) % n;
            let (q, dq) = model::mobility_reg_pair(0.5 * (v[i] + v[k]), p);
            let grad = (j[k] - j[i]) / h;
            let (a, b) = (dj[i], dj[k]);
            let c = inv_sigma * q / h;
            let local = 0.5 * dq * (inv_sigma * grad + p.mu);
            dflux[i] = [
                -c * a[0],
                c * (b[0] - a[1]) + local - 0.5 * p.speed * v[i],
                c * (b[1] - a[2]) + local - 0.5 * p.speed * v[k],
                c * b[2],
            ];
        }
    }
}

/// Residual/Jacobian assembly for one implicit step (residual scaled by `2Δt`).
struct System<'a> {
    params: &'a ModelParams,
    prev_sq: Vec<f64>,
    h: f64,
    dt: f64,
    source: Vec<f64>,
    j: Vec<f64>,
    dj: Vec<[f64; 3]>,
    flux: Vec<f64>,
    dflux: Vec<[f64; 4]>,
}

impl<'a> System<'a> {
    fn new(prev: &FilmProfile, dt: f64, params: &'a ModelParams) -> Self {
        let n = prev.values().len();
        Self {
            params,
            prev_sq: prev.values().iter().map(|p| p * p).collect(),
            h: prev.grid().spacing(),
            dt,
            source: vec![0.0; n],
            j: vec![0.0; n],
            dj: vec![[0.0; 3]; n],
            flux: vec![0.0; n],
            dflux: vec![[0.0; 4]; n],
        }
    }

    fn fluxes(&mut self, v: &[f64], with_derivs: bool) {
        let dflux = if with_derivs { Some(&mut self.dflux[..]) } else { None };
        half_point_fluxes(v, self.h, self.params, &mut self.j, &mut self.dj, &mut self.flux, dflux);
    }

    fn residual(&mut self, v: &[f64], source: Option<&[f64]>, out: &mut [f64]) {
        let n = v.len();
        self.fluxes(v, false);
        let c = 2.0 * self.dt / self.h;
        for i in 0..n {
            let im = (i + n - 1) % n;
            out[i] = v[i] * v[i] - self.prev_sq[i] + c * (self.flux[i] - self.flux[im]);
            if let Some(s) = source {
                out[i] -= 2.0 * self.dt * s[i];
            }
        }
    }

    /// Calls `put(row, col, value)` for every stencil entry of the Jacobian.
    fn jacobian_entries(&mut self, v: &[f64], mode: JacobianMode, out_res: &mut [f64], mut put: impl FnMut(usize, usize, f64)) {
        let n = v.len();
        let source = core::mem::take(&mut self.source);
        let src = if source.iter().any(|s| *s != 0.0) { Some(&source[..]) } else { None };
        match mode {
            JacobianMode::Analytic => {
                self.fluxes(v, true);
                let c = 2.0 * self.dt / self.h;
                for i in 0..n {
                    let im = (i + n - 1) % n;
                    out_res[i] = v[i] * v[i] - self.prev_sq[i] + c * (self.flux[i] - self.flux[im]);
                    if let Some(s) = src {
                        out_res[i] -= 2.0 * self.dt * s[i];
                    }
                    put(i, i, 2.0 * v[i]);
                    for (t, d) in self.dflux[i].iter().enumerate() {
                        put(i, (i + n + t - 1) % n, c * d);
                    }
                    for (t, d) in self.dflux[im].iter().enumerate() {
                        put(i, (i + n + t - 2) % n, -c * d);
                    }
                }
            }
            JacobianMode::FiniteDifference => {
                self.residual(v, src, out_res);
                let mut w = v.to_vec();
                let mut rp = vec![0.0; n];
                let mut rm = vec![0.0; n];
                for col in 0..n {
                    let d = 1e-6 * v[col].abs().max(1e-3);
                    w[col] = v[col] + d;
                    self.residual(&w, src, &mut rp);
                    w[col] = v[col] - d;
                    self.residual(&w, src, &mut rm);
                    w[col] = v[col];
                    for off in 0..=2 * HALF_WIDTH {
                        let row = (col + n + off - HALF_WIDTH) % n;
                        put(row, col, (rp[row] - rm[row]) / (2.0 * d));
                    }
                }
            }
        }
        self.source = source;
    }

    fn jacobian_dense(&mut self, v: &[f64], mode: JacobianMode, res: &mut [f64], a: &mut [f64]) {
        let n = v.len();
        a.iter_mut().for_each(|x| *x = 0.0);
        self.jacobian_entries(v, mode, res, |i, j, x| a[i * n + j] += x);
    }

    fn jacobian_banded(&mut self, v: &[f64], mode: JacobianMode, res: &mut [f64]) -> BorderedBand {
        let n = v.len();
        let mut m = BorderedBand::zeros(n, HALF_WIDTH, HALF_WIDTH, HALF_WIDTH);
        self.jacobian_entries(v, mode, res, |i, j, x| m.add(i, j, x));
        m
    }
}

/// Newton solve of one implicit step; returns the new nodal values and the iteration count.
fn newton(
    prev: &FilmProfile,
    dt: f64,
    params: &ModelParams,
    config: &SimConfig,
    source: Option<&[f64]>,
) -> Result<(Vec<f64>, usize)> {
    let n = prev.values().len();
    let h = prev.grid().spacing();
    let mut sys = System::new(prev, dt, params);
    if let Some(s) = source {
        sys.source.copy_from_slice(s);
    }
    let scale = sys.prev_sq.iter().fold(1.0f64, |m, x| m.max(*x));
    let mass = functionals::mass(prev);
    let mut v = prev.values().to_vec();
    let mut res = vec![0.0; n];
    let mut best = f64::INFINITY;
    let mut small_update = false;
    for it in 0..=config.newton_max_iter {
        let jac = sys.jacobian_banded(&v, config.jacobian, &mut res);
        let norm = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        if !norm.is_finite() {
            break;
        }
        best = best.min(norm);
        let mass_defect = h * res.iter().sum::<f64>().abs();
        // The flux carries a roundoff floor of order ε·σ⁻¹·q/h³, so a negligible
        // full Newton update also counts as convergence.
        if (norm <= config.newton_tol * scale || small_update) && mass_defect <= 1e-13 * mass {
            return Ok((v, it));
        }
        if it == config.newton_max_iter {
            break;
        }
        let lu = match jac.factor() {
            Ok(lu) => lu,
            Err(_) => break,
        };
        let mut delta: Vec<f64> = res.iter().map(|r| -r).collect();
        lu.solve_in_place(&mut delta);
        // Damp only as far as needed to keep every node positive.
        let mut alpha = 1.0;
        while v.iter().zip(&delta).any(|(x, d)| x + alpha * d <= 0.1 * x) {
            alpha *= 0.5;
            if alpha < 1e-4 {
                break;
            }
        }
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(*x));
        let step = delta.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        small_update = alpha == 1.0 && step <= config.newton_tol * vmax;
        for (x, d) in v.iter_mut().zip(&delta) {
            *x += alpha * d;
        }
        if v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            break;
        }
    }
    Err(Error::NewtonFailed { iterations: config.newton_max_iter, residual: best, best: v })
}

/// One implicit step of size `dt` with no retries.
pub fn try_step(state: &SimState, dt: f64, params: &ModelParams, config: &SimConfig, source: Option<Source>) -> Result<SimState> {
    let forcing = source.map(|f| {
        let mut s = vec![0.0; state.profile.values().len()];
        f(state.t + dt, state.profile.grid(), &mut s);
        s
    });
    let (v, iters) = newton(&state.profile, dt, params, config, forcing.as_deref())?;
    Ok(SimState {
        t: state.t + dt,
        profile: FilmProfile::new(*state.profile.grid(), v)?,
        step_count: state.step_count + 1,
        last_newton_iters: iters,
    })
}

/// One accepted step: tries `dt`, halving on Newton failure down to `config.dt_min`.
/// Returns the new state and the step size actually taken.
pub fn step(state: &SimState, dt: f64, params: &ModelParams, config: &SimConfig) -> Result<(SimState, f64)> {
    step_with_source(state, dt, params, config, None).map(|(s, dt, _)| (s, dt))
}

fn step_with_source(
    state: &SimState,
    mut dt: f64,
    params: &ModelParams,
    config: &SimConfig,
    source: Option<Source>,
) -> Result<(SimState, f64, usize)> {
    let mut rejected = 0;
    loop {
        match try_step(state, dt, params, config, source) {
            Ok(s) => return Ok((s, dt, rejected)),
            Err(Error::NewtonFailed { .. }) | Err(Error::NonPositive { .. }) => {
                rejected += 1;
                dt *= 0.5;
                if dt < config.dt_min {
                    return Err(Error::StepUnderflow { t: state.t, dt, values: state.profile.values().to_vec() });
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// Location of the global maximum with quadratic sub-grid refinement, in `[0, L)`.
pub fn peak_position(profile: &FilmProfile) -> f64 {
    let v = profile.values();
    let n = v.len();
    let k = profile.argmax();
    let (a, b, c) = (v[(k + n - 1) % n], v[k], v[(k + 1) % n]);
    let curv = a - 2.0 * b + c;
    let shift = if curv < 0.0 { (0.5 * (a - c) / curv).clamp(-0.5, 0.5) } else { 0.0 };
    let l = profile.grid().length();
    let x = (k as f64 + shift) * profile.grid().spacing();
    x - (x / l).floor() * l
}

/// Unwrapped peak trajectory and its late-time speed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PeakTracker {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
}

impl PeakTracker {
    pub fn push(&mut self, t: f64, raw: f64, length: f64) {
        let x = match self.positions.last() {
            None => raw,
            Some(&last) => {
                let mut x = raw + (last / length).floor() * length;
                while x - last > 0.5 * length {
                    x -= length;
                }
                while last - x > 0.5 * length {
                    x += length;
                }
                x
            }
        };
        self.times.push(t);
        self.positions.push(x);
    }

    /// Least-squares slope of position against time over the last `fraction` of the time span.
    pub fn speed(&self, fraction: f64) -> Option<f64> {
        let (&t0, &t1) = (self.times.first()?, self.times.last()?);
        let cut = t1 - fraction * (t1 - t0);
        let pts: Vec<(f64, f64)> = self
            .times
            .iter()
            .zip(&self.positions)
            .filter(|(t, _)| **t >= cut)
            .map(|(t, x)| (*t, *x))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let k = pts.len() as f64;
        let tm = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let xm = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - xm)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - tm) * (p.0 - tm)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }
}

/// Diagnostics at one sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSample {
    pub t: f64,
    pub report: EnergyReport,
    pub newton_iters: usize,
    /// Step size of the most recent accepted step.
    pub dt: f64,
    /// `(ν, F(L))` when gravity is on and the profile stays above `r₀`.
    pub frame: Option<(f64, f64)>,
    /// `∫v²F_t dξ` over the most recent accepted step (gravity runs).
    pub v2_ft: Option<f64>,
    /// Unwrapped peak position.
    pub peak: f64,
}

/// Callbacks fired by [`simulate`] from the simulation's own thread.
pub trait SimObserver {
    fn sample(&mut self, _sample: &DiagnosticSample) {}
    fn snapshot(&mut self, _t: f64, _profile: &FilmProfile) {}
}

impl SimObserver for () {}

/// Per-run step statistics.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunStats {
    pub accepted: usize,
    pub rejected: usize,
    pub initial_mass: f64,
    /// `max |M(tₙ) − M(0)| / M(0)` over accepted steps.
    pub max_mass_drift: f64,
    /// `max (E(tₙ₊₁) − E(tₙ)) / |E(tₙ)|` over accepted steps (negative when E strictly decays).
    pub max_energy_increase: f64,
    /// Largest relative increase of `Ẽ` over accepted steps after `t = 0.5`.
    pub max_modified_energy_increase: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub state: SimState,
    pub series: Vec<DiagnosticSample>,
    pub peaks: PeakTracker,
    pub stats: RunStats,
}

struct Tracker<'a> {
    params: &'a ModelParams,
    frame_f: Option<Vec<f64>>,
    modified: Option<f64>,
    v2_ft: Option<f64>,
}

impl Tracker<'_> {
    fn frame(&self, profile: &FilmProfile) -> Option<GravityFrame> {
        if !self.params.has_gravity() {
            return None;
        }
        GravityFrame::periodic(profile, self.params.speed, self.params).ok()
    }
}

/// Integrates from `initial` to `config.t_end`, streaming diagnostics and snapshots to `observer`.
pub fn simulate(
    initial: FilmProfile,
    params: &ModelParams,
    config: &SimConfig,
    observer: &mut dyn SimObserver,
) -> Result<SimOutcome> {
    simulate_forced(initial, params, config, None, observer)
}

/// [`simulate`] with an optional nodal source term.
pub fn simulate_forced(
    initial: FilmProfile,
    params: &ModelParams,
    config: &SimConfig,
    source: Option<Source>,
    observer: &mut dyn SimObserver,
) -> Result<SimOutcome> {
    params.validate_energy()?;
    config.validate()?;
    let mut state = SimState::new(initial);
    let m0 = functionals::mass(&state.profile);
    let mut stats = RunStats { initial_mass: m0, max_energy_increase: f64::NEG_INFINITY, ..Default::default() };
    let mut series = Vec::new();
    let mut peaks = PeakTracker::default();
    let mut tracker = Tracker { params, frame_f: None, modified: None, v2_ft: None };

    let mut energy = functionals::energy(&state.profile, params)?;
    if let Some(fr) = tracker.frame(&state.profile) {
        tracker.modified = Some(energy + 0.5 * state.profile.grid().spacing() * dot_sq(state.profile.values(), &fr.f));
        tracker.frame_f = Some(fr.f);
    }

    let mut dt = config.dt;
    let mut last_dt = 0.0;
    let mut streak = 0;
    let eps_t = 1e-12 * config.t_end.max(1.0);
    let mut next_diag = config.diagnostics_every;
    let mut next_snap = config.snapshot_every;

    emit_sample(&state, params, &tracker, last_dt, &mut peaks, &mut series, observer)?;
    observer.snapshot(state.t, &state.profile);

    while state.t < config.t_end - eps_t {
        // Land exactly on the next output time.
        let mut target = config.t_end;
        if config.diagnostics_every > 0.0 {
            target = target.min(next_diag);
        }
        if config.snapshot_every > 0.0 {
            target = target.min(next_snap);
        }
        let this_dt = dt.min(target - state.t).min(config.dt_max);
        let clipped = this_dt < dt;
        let (new_state, taken, rejected) = step_with_source(&state, this_dt, params, config, source)?;
        stats.rejected += rejected;
        stats.accepted += 1;
        if rejected > 0 {
            dt = taken;
            streak = 0;
        } else if !clipped {
            streak += 1;
            if streak >= 5 {
                dt = (dt * 1.2).min(config.dt_max);
                streak = 0;
            }
        }
        last_dt = taken;

        let new_energy = functionals::energy(&new_state.profile, params)?;
        stats.max_energy_increase = stats.max_energy_increase.max((new_energy - energy) / energy.abs());
        energy = new_energy;
        let drift = (functionals::mass(&new_state.profile) - m0).abs() / m0;
        stats.max_mass_drift = stats.max_mass_drift.max(drift);

        match tracker.frame(&new_state.profile) {
            Some(fr) => {
                let h = new_state.profile.grid().spacing();
                let v = new_state.profile.values();
                let me = new_energy + 0.5 * h * dot_sq(v, &fr.f);
                if let (Some(prev_f), Some(prev_me)) = (&tracker.frame_f, tracker.modified) {
                    let ft: f64 = v.iter().zip(fr.f.iter().zip(prev_f)).map(|(x, (a, b))| x * x * (a - b)).sum();
                    tracker.v2_ft = Some(h * ft / taken);
                    if new_state.t >= 0.5 {
                        let inc = (me - prev_me) / prev_me.abs();
                        let cur = stats.max_modified_energy_increase.unwrap_or(f64::NEG_INFINITY);
                        stats.max_modified_energy_increase = Some(cur.max(inc));
                    }
                } else {
                    tracker.v2_ft = None;
                }
                tracker.modified = Some(me);
                tracker.frame_f = Some(fr.f);
            }
            None => {
                tracker.frame_f = None;
                tracker.modified = None;
                tracker.v2_ft = None;
            }
        }

        state = new_state;
        let at_end = state.t >= config.t_end - eps_t;
        if config.diagnostics_every > 0.0 && state.t >= next_diag - eps_t {
            next_diag += config.diagnostics_every;
            emit_sample(&state, params, &tracker, last_dt, &mut peaks, &mut series, observer)?;
        } else if at_end {
            emit_sample(&state, params, &tracker, last_dt, &mut peaks, &mut series, observer)?;
        }
        if config.snapshot_every > 0.0 && state.t >= next_snap - eps_t {
            next_snap += config.snapshot_every;
            observer.snapshot(state.t, &state.profile);
        } else if at_end && config.snapshot_every == 0.0 {
            observer.snapshot(state.t, &state.profile);
        }
    }
    if stats.accepted == 0 {
        stats.max_energy_increase = 0.0;
    }
    Ok(SimOutcome { state, series, peaks, stats })
}

fn dot_sq(v: &[f64], f: &[f64]) -> f64 {
    v.iter().zip(f).map(|(x, y)| x * x * y).sum()
}

fn emit_sample(
    state: &SimState,
    params: &ModelParams,
    tracker: &Tracker,
    dt: f64,
    peaks: &mut PeakTracker,
    series: &mut Vec<DiagnosticSample>,
    observer: &mut dyn SimObserver,
) -> Result<()> {
    let mut report = EnergyReport::new(&state.profile, params)?;
    let frame = tracker.frame(&state.profile);
    if let Some(fr) = &frame {
        report = report.with_frame(&state.profile, fr, params)?;
    }
    peaks.push(state.t, peak_position(&state.profile), state.profile.grid().length());
    let sample = DiagnosticSample {
        t: state.t,
        report,
        newton_iters: state.last_newton_iters,
        dt,
        frame: frame.map(|f| (f.nu, f.f_end)),
        v2_ft: tracker.v2_ft,
        peak: *peaks.positions.last().unwrap_or(&0.0),
    };
    observer.sample(&sample);
    series.push(sample);
    Ok(())
}

/// Initial-data recipes.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Constant(f64),
    /// Euler–Lagrange branch `(λ, C₀)` with `A`, `m`, `r₀` from the model, stretched onto the grid.
    Minimizer { lambda: f64, c0: f64 },
    /// `v_min + ε̄ sin(2πf̄ξ/L)` with `ε̄` chosen to conserve mass.
    PerturbedWave { base: FilmProfile, frequency: u32 },
    /// Nodal values given explicitly (e.g. read from a file); resampled if the node count differs.
    Values(Vec<f64>),
}

/// A perturbed travelling wave together with its amplitude and mass defect.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedWave {
    pub profile: FilmProfile,
    pub epsilon: f64,
    /// `mass(v₀) − mass(v_min)`.
    pub mass_defect: f64,
}

/// `v₀ = v_min + ε̄ sin(2πf̄ξ/L)` with `ε̄ = −(4/L)∫v_min sin(2πf̄ξ/L)dξ`, the
/// nonzero amplitude for which `∫v₀² = ∫v_min²`.
pub fn perturbed_wave(base: &FilmProfile, frequency: u32) -> Result<PerturbedWave> {
    let grid = *base.grid();
    if frequency == 0 || 2 * frequency as usize >= grid.len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "perturbation frequency {frequency} not resolved on {} nodes",
            grid.len()
        )));
    }
    let l = grid.length();
    let k = 2.0 * core::f64::consts::PI * frequency as f64 / l;
    let h = grid.spacing();
    let proj: f64 = h * base.values().iter().enumerate().map(|(i, v)| v * (k * i as f64 * h).sin()).sum::<f64>();
    let epsilon = -4.0 * proj / l;
    let values = base.values().iter().enumerate().map(|(i, v)| v + epsilon * (k * i as f64 * h).sin()).collect();
    let profile = FilmProfile::new(grid, values)?;
    let mass_defect = functionals::mass(&profile) - functionals::mass(base);
    Ok(PerturbedWave { profile, epsilon, mass_defect })
}

pub fn make_initial(kind: &InitialCondition, params: &ModelParams, grid: PeriodicGrid) -> Result<FilmProfile> {
    match kind {
        InitialCondition::Constant(c) => FilmProfile::constant(grid, *c),
        InitialCondition::Minimizer { lambda, c0 } => {
            let branch = MinimizerBranch::new(*lambda, *c0, params)?;
            minimizers::minimizer_profile_on(&branch, grid)
        }
        InitialCondition::PerturbedWave { base, frequency } => {
            let base = if base.grid().len() == grid.len() {
                base.stretched(grid.length())?
            } else {
                FilmProfile::new(grid, crate::grid::resample_periodic(base.values(), grid.len()))?
            };
            Ok(perturbed_wave(&base, *frequency)?.profile)
        }
        InitialCondition::Values(v) => {
            if v.len() == grid.len() {
                FilmProfile::new(grid, v.clone())
            } else {
                FilmProfile::new(grid, crate::grid::resample_periodic(v, grid.len()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn params() -> ModelParams {
        ModelParams::new(0.01, 0.2)
    }

    fn wavy() -> FilmProfile {
        let g = PeriodicGrid::new(6.0, 32).unwrap();
        FilmProfile::from_fn(g, |x| 1.5 + 0.4 * (2.0 * PI * x / 6.0).sin() + 0.1 * (4.0 * PI * x / 6.0).cos()).unwrap()
    }

    #[test]
    fn constant_profiles_are_steady() {
        let g = PeriodicGrid::new(5.0, 16).unwrap();
        let c = FilmProfile::constant(g, 1.3).unwrap();
        let p = params().with_gravity(true).with_speed(2.0);
        let r = semidiscrete_residual(&c, &c, 0.1, &p).unwrap();
        assert!(r.iter().all(|x| x.abs() < 1e-13));
        let (s, _) = step(&SimState::new(c.clone()), 0.1, &p, &SimConfig::default()).unwrap();
        assert!(s.profile.values().iter().all(|v| (v - 1.3).abs() < 1e-14));
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        let prev = wavy();
        let next = prev.scaled(1.01).unwrap();
        for p in [params(), params().with_gravity(true).with_speed(3.0).with_stabilization(0.05, 3.0)] {
            let gap = jacobian_discrepancy(&prev, &next, 1e-3, &p).unwrap();
            assert!(gap < 1e-6, "relative gap {gap}");
        }
    }

    #[test]
    fn step_conserves_mass() {
        let p = params().with_gravity(true);
        let s0 = SimState::new(wavy());
        let (s1, _) = step(&s0, 1e-3, &p, &SimConfig::default()).unwrap();
        let (m0, m1) = (functionals::mass(&s0.profile), functionals::mass(&s1.profile));
        assert!(((m1 - m0) / m0).abs() < 1e-12);
    }

    #[test]
    fn zero_length_run_returns_initial_state() {
        let cfg = SimConfig { t_end: 0.0, ..SimConfig::default() };
        let out = simulate(wavy(), &params(), &cfg, &mut ()).unwrap();
        assert_eq!(out.state.profile, wavy());
        assert_eq!(out.state.t, 0.0);
        assert_eq!(out.series.len(), 1);
    }

    #[test]
    fn peak_tracker_unwraps() {
        let mut t = PeakTracker::default();
        for k in 0..40 {
            let x = (0.3 * k as f64) % 5.0;
            t.push(0.1 * k as f64, x, 5.0);
        }
        assert!((t.speed(0.25).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_wave_keeps_mass() {
        let w = perturbed_wave(&wavy(), 1).unwrap();
        assert!(w.epsilon != 0.0);
        assert!(w.mass_defect.abs() < 1e-12);
    }
}
