//! Steady travelling waves `v(ξ)`, `ξ = x − Vt`, through the once-integrated
//! steady equation
//!
//! ```text
//! σ⁻¹ Q(v) J(v)_ξ + μ Q(v) − (V/2) v² = K
//! ```
//!
//! discretised with the same half-point fluxes as the time stepper, so a
//! converged wave is an exact steady state of the travelling-frame scheme.
//! Unknowns are the nodal values, `V` and `K`; the extra equations fix the
//! mass and the translation gauge `v_ξ(0) = 0`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std's inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::functionals;
use crate::grid::{FilmProfile, PeriodicGrid};
use crate::linalg::BorderedBand;
use crate::minimizers::{self, MinimizerBranch};
use crate::model::{self, ModelParams};
use crate::pde;

pub const MIN_TW_NODES: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct TwSolution {
    pub profile: FilmProfile,
    pub speed: f64,
    /// Flux constant; equals `−ν` of the gravity frame.
    pub flux_constant: f64,
    pub mass: f64,
    /// Max-norm of the first-integral residual relative to the size of its terms.
    pub residual_norm: f64,
    pub newton_iters: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for TwConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 50 }
    }
}

/// Nodal first-integral residuals (half-point `i + ½` stored at `i`), mass
/// residual and phase residual.
#[derive(Debug, Clone, PartialEq)]
pub struct TwResidual {
    pub nodal: Vec<f64>,
    pub mass: f64,
    pub phase: f64,
}

pub fn tw_residual(profile: &FilmProfile, speed: f64, k: f64, mass: f64, params: &ModelParams) -> Result<TwResidual> {
    let n = profile.values().len();
    if n < MIN_TW_NODES {
        return Err(Error::InvalidParameter(format!("travelling waves need >= {MIN_TW_NODES} nodes, got {n}")));
    }
    model::check_profile_positive(profile.values())?;
    let mut ws = Workspace::new(n);
    let h = profile.grid().spacing();
    let p = params.with_speed(speed);
    ws.eval(profile.values(), h, &p, false);
    let v = profile.values();
    Ok(TwResidual {
        nodal: ws.flux.iter().map(|f| f - k).collect(),
        mass: functionals::mass(profile) - mass,
        phase: (v[1] - v[n - 1]) / (2.0 * h),
    })
}

struct Workspace {
    j: Vec<f64>,
    dj: Vec<[f64; 3]>,
    flux: Vec<f64>,
    dflux: Vec<[f64; 4]>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Self { j: vec![0.0; n], dj: vec![[0.0; 3]; n], flux: vec![0.0; n], dflux: vec![[0.0; 4]; n] }
    }

    fn eval(&mut self, v: &[f64], h: f64, p: &ModelParams, derivs: bool) {
        let dflux = if derivs { Some(&mut self.dflux[..]) } else { None };
        pde::half_point_fluxes(v, h, p, &mut self.j, &mut self.dj, &mut self.flux, dflux);
    }

    // Size of the largest individual term entering any flux (curvature pieces
    // of J included); roundoff in the residual scales with it.
    fn flux_scale(&self, v: &[f64], h: f64, p: &ModelParams, k: f64) -> f64 {
        let n = v.len();
        let slope = |i: usize| ((v[(i + 1) % n] - v[i]) / h).abs();
        let j_terms = |i: usize| (slope(i) + slope((i + n - 1) % n)) / h + 1.0 / v[i] + self.j[i].abs();
        (0..n)
            .map(|i| {
                let kk = (i + 1) % n;
                let (q, _) = model::mobility_reg_pair(0.5 * (v[i] + v[kk]), p);
                q * (j_terms(i) + j_terms(kk)) / (p.sigma * h)
                    + p.mu * q
                    + 0.25 * p.speed.abs() * (v[i] * v[i] + v[kk] * v[kk])
                    + k.abs()
            })
            .fold(1.0, f64::max)
    }
}

/// Newton solve for `(v, V, K)` on `guess`'s grid with `mass(v) = mass`.
/// `speed_guess` seeds `V`; `params.speed` is ignored.
pub fn solve_tw(guess: &FilmProfile, mass: f64, speed_guess: f64, params: &ModelParams, config: &TwConfig) -> Result<TwSolution> {
    params.validate()?;
    let n = guess.values().len();
    if n < MIN_TW_NODES {
        return Err(Error::InvalidParameter(format!("travelling waves need >= {MIN_TW_NODES} nodes, got {n}")));
    }
    if !(mass > 0.0) {
        return Err(Error::NonPositive { quantity: "mass", value: mass });
    }
    model::check_profile_positive(guess.values())?;
    if guess.max() - guess.min() <= 1e-9 * guess.max() {
        return Err(Error::Degenerate("constant guess: wave speed and flux constant are not separable"));
    }
    let grid = *guess.grid();
    let h = grid.spacing();
    let mut v = guess.values().to_vec();
    let mut speed = speed_guess;
    let mut k = {
        let mut ws = Workspace::new(n);
        ws.eval(&v, h, &params.with_speed(speed), false);
        ws.flux.iter().sum::<f64>() / n as f64
    };
    let mut ws = Workspace::new(n);
    let mut res = vec![0.0; n + 2];
    let mut best = f64::INFINITY;
    let mut small_update = false;
    for it in 0..=config.max_iter {
        let p = params.with_speed(speed);
        ws.eval(&v, h, &p, true);
        let scale = ws.flux_scale(&v, h, &p, k);
        assemble_residual(&ws, &v, h, k, mass, &mut res);
        let rel = relative_norm(&res, n, scale, mass);
        best = best.min(rel);
        if rel <= config.tol || small_update {
            return finish(grid, v, speed, k, rel, it);
        }
        if it == config.max_iter {
            break;
        }
        let jac = assemble_jacobian(&ws, &v, h);
        let lu = jac.factor().map_err(|_| Error::Degenerate("travelling-wave Jacobian is singular"))?;
        let mut stored = vec![0.0; n + 2];
        for (i, r) in res.iter().enumerate() {
            stored[stored_index(i, n)] = -r;
        }
        lu.solve_in_place(&mut stored);
        let delta: Vec<f64> = (0..n + 2).map(|i| stored[stored_index(i, n)]).collect();

        let vmax = v.iter().fold(0.0f64, |m, x| m.max(*x));
        let step = delta[..n].iter().fold(0.0f64, |m, d| m.max(d.abs()));
        // Near the roundoff floor the merit is noise; a negligible update is taken whole.
        small_update = step <= config.tol * vmax && delta[n].abs() <= config.tol * speed.abs().max(1.0);

        // Backtrack on positivity and on the residual merit.
        let mut alpha = 1.0;
        let mut trial: Vec<f64> = v.iter().zip(&delta).map(|(x, d)| x + d).collect();
        while !small_update {
            let ok_sign = v.iter().zip(&delta).all(|(x, d)| x + alpha * d > 0.1 * x);
            if ok_sign {
                for ((t, x), d) in trial.iter_mut().zip(&v).zip(&delta) {
                    *t = x + alpha * d;
                }
                let tp = params.with_speed(speed + alpha * delta[n]);
                let tk = k + alpha * delta[n + 1];
                ws.eval(&trial, h, &tp, false);
                let mut tres = vec![0.0; n + 2];
                assemble_residual(&ws, &trial, h, tk, mass, &mut tres);
                let tmerit = merit(&tres);
                if tmerit.is_finite() && (tmerit < merit(&res) || alpha < 1.0 / 64.0) {
                    break;
                }
            }
            alpha *= 0.5;
            if alpha < 1e-4 {
                return Err(Error::NewtonFailed { iterations: it, residual: best, best: v });
            }
        }
        v.copy_from_slice(&trial);
        speed += alpha * delta[n];
        k += alpha * delta[n + 1];
    }
    Err(Error::NewtonFailed { iterations: config.max_iter, residual: best, best: v })
}

fn assemble_residual(ws: &Workspace, v: &[f64], h: f64, k: f64, mass: f64, out: &mut [f64]) {
    let n = v.len();
    for i in 0..n {
        out[i] = ws.flux[i] - k;
    }
    out[n] = h * v.iter().map(|x| x * x).sum::<f64>() - mass;
    out[n + 1] = (v[1] - v[n - 1]) / (2.0 * h);
}

fn merit(res: &[f64]) -> f64 {
    res.iter().map(|r| r * r).sum::<f64>().sqrt()
}

fn relative_norm(res: &[f64], n: usize, flux_scale: f64, mass: f64) -> f64 {
    let nodal = res[..n].iter().fold(0.0f64, |m, r| m.max(r.abs())) / flux_scale;
    // the phase residual is a slope, already dimensionless
    nodal.max(res[n].abs() / mass).max(res[n + 1].abs())
}

// Logical unknowns are (v₀ … v_{n−1}, V, K) and logical rows (first-integral
// residuals, mass, phase). In storage nodes n−2, n−1 move behind V and K into
// the dense border, which leaves a plain band with kl = 1, ku = 2.
fn stored_index(i: usize, n: usize) -> usize {
    if i < n - 2 {
        i
    } else if i < n {
        i + 2
    } else {
        i - 2
    }
}

fn assemble_jacobian(ws: &Workspace, v: &[f64], h: f64) -> BorderedBand {
    let n = v.len();
    let mut m = BorderedBand::zeros(n + 2, 4, 1, 2);
    let pos = |i: usize| stored_index(i, n);
    for i in 0..n {
        let row = pos(i);
        for (t, d) in ws.dflux[i].iter().enumerate() {
            m.add(row, pos((i + n + t - 1) % n), *d);
        }
        let kk = (i + 1) % n;
        m.add(row, pos(n), -0.25 * (v[i] * v[i] + v[kk] * v[kk]));
        m.add(row, pos(n + 1), -1.0);
    }
    for (j, x) in v.iter().enumerate() {
        m.add(pos(n), pos(j), 2.0 * h * x);
    }
    m.add(pos(n + 1), pos(1), 0.5 / h);
    m.add(pos(n + 1), pos(n - 1), -0.5 / h);
    m
}

fn finish(grid: PeriodicGrid, v: Vec<f64>, speed: f64, k: f64, rel: f64, iters: usize) -> Result<TwSolution> {
    let n = v.len();
    if v[1] + v[n - 1] - 2.0 * v[0] <= 0.0 {
        return Err(Error::Branch("phase condition pinned a maximum, not the minimum, at node 0".into()));
    }
    let profile = FilmProfile::new(grid, v)?;
    let mass = functionals::mass(&profile);
    Ok(TwSolution { profile, speed, flux_constant: k, mass, residual_norm: rel, newton_iters: iters })
}

/// Default initial guess: the `(λ, C₀)` minimizer stretched to length `length`
/// and scaled in amplitude to carry `mass`.
pub fn minimizer_guess(lambda: f64, c0: f64, length: f64, nodes: usize, mass: f64, params: &ModelParams) -> Result<FilmProfile> {
    let branch = MinimizerBranch::new(lambda, c0, params)?;
    let base = minimizers::minimizer_profile_on(&branch, PeriodicGrid::new(length, nodes)?)?;
    base.scaled((mass / functionals::mass(&base)).sqrt())
}

/// Initial speed estimate from the closed-form speed formula, falling back to `1`.
pub fn speed_estimate(profile: &FilmProfile, params: &ModelParams) -> f64 {
    functionals::tw_speed_formula(profile, params).map(|(v, _)| v).unwrap_or(1.0)
}

/// Continued parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    Length,
    Mass,
}

impl Parameter {
    pub fn name(&self) -> &'static str {
        match self {
            Parameter::Length => "L",
            Parameter::Mass => "M",
        }
    }

    pub fn value_of(&self, s: &TwSolution) -> f64 {
        match self {
            Parameter::Length => s.profile.grid().length(),
            Parameter::Mass => s.mass,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoint {
    pub value: f64,
    pub solution: TwSolution,
    /// Parameter step that reached this point (`0` for the start).
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub parameter: Parameter,
    pub points: Vec<BranchPoint>,
    /// Why continuation stopped short of the target, if it did.
    pub stopped: Option<String>,
}

impl Branch {
    pub fn last(&self) -> &TwSolution {
        &self.points[self.points.len() - 1].solution
    }

    pub fn reached(&self, target: f64) -> bool {
        self.stopped.is_none() && self.points.last().is_some_and(|p| p.value == target)
    }
}

/// Natural-parameter continuation from `start` to `target`, halving the step on
/// failure and growing it (up to `step0`) after successes. Length steps keep
/// the node count and stretch the previous profile.
pub fn continue_branch(
    start: &TwSolution,
    parameter: Parameter,
    target: f64,
    step0: f64,
    params: &ModelParams,
    config: &TwConfig,
) -> Result<Branch> {
    let first = parameter.value_of(start);
    let mut branch = Branch {
        parameter,
        points: vec![BranchPoint { value: first, solution: start.clone(), step: 0.0 }],
        stopped: None,
    };
    if target == first {
        return Ok(branch);
    }
    if !(step0 > 0.0) || !target.is_finite() || !(target > 0.0) {
        return Err(Error::InvalidParameter(format!("continuation needs step > 0 and target > 0, got {step0}, {target}")));
    }
    let dir = (target - first).signum();
    let min_step = 1e-8 * (target - first).abs().max(step0);
    let mut step = step0.min((target - first).abs());
    let mut value = first;
    while value != target {
        let next = if (target - value).abs() <= step { target } else { value + dir * step };
        let prev = &branch.points[branch.points.len() - 1].solution;
        let attempt = match parameter {
            Parameter::Length => prev.profile.stretched(next).and_then(|g| solve_tw(&g, prev.mass, prev.speed, params, config)),
            Parameter::Mass => solve_tw(&prev.profile, next, prev.speed, params, config),
        };
        match attempt {
            Ok(sol) => {
                branch.points.push(BranchPoint { value: next, solution: sol, step: (next - value).abs() });
                value = next;
                step = (step * 1.5).min(step0);
            }
            Err(e) => {
                step *= 0.5;
                if step < min_step {
                    branch.stopped = Some(format!("step underflow at {}={value}: {e}", parameter.name()));
                    break;
                }
            }
        }
    }
    Ok(branch)
}

/// Solver speed against the closed-form speed and flux-offset formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedReport {
    pub speed_solver: f64,
    pub speed_formula: Option<f64>,
    pub nu_formula: Option<f64>,
    /// `|V_solver − V_formula| / |V_formula|`.
    pub speed_rel_gap: Option<f64>,
    /// `|K + ν| / max(|ν|, 1)`.
    pub flux_gap: Option<f64>,
    pub degenerate: Option<String>,
}

pub fn verify_speed_formula(solution: &TwSolution, params: &ModelParams) -> SpeedReport {
    let v = solution.speed;
    match functionals::tw_speed_formula(&solution.profile, params) {
        Ok((vf, nu)) => SpeedReport {
            speed_solver: v,
            speed_formula: Some(vf),
            nu_formula: Some(nu),
            speed_rel_gap: Some((v - vf).abs() / vf.abs()),
            flux_gap: Some((solution.flux_constant + nu).abs() / nu.abs().max(1.0)),
            degenerate: None,
        },
        Err(e) => SpeedReport {
            speed_solver: v,
            speed_formula: None,
            nu_formula: None,
            speed_rel_gap: None,
            flux_gap: None,
            degenerate: Some(format!("{e}")),
        },
    }
}
