//! Manufactured solutions for the implicit scheme. Forcing terms come from the
//! jet oracle, so every derivative is exact.

#![allow(dead_code)]

use std::f64::consts::PI;

use fibrefilm_core::pde::{self, SimConfig};
use fibrefilm_core::{FilmProfile, ModelParams, PeriodicGrid};

use super::jet::{self, Coeffs, Jet};

pub const LENGTH: f64 = 2.0 * PI;

pub fn params() -> ModelParams {
    ModelParams::new(0.1, 0.2).with_stabilization(0.05, 3.0).with_gravity(true).with_speed(0.7)
}

fn coeffs(p: &ModelParams) -> Coeffs {
    Coeffs { sigma: p.sigma, r0: p.r0, a: p.a, m: p.m, mu: p.mu, speed: p.speed }
}

// d^k/dξ^k of sin(ξ) and cos(ξ), k = 0..4.
fn sin_derivs(x: f64) -> [f64; 5] {
    let (s, c) = x.sin_cos();
    [s, c, -s, -c, s]
}

fn cos_derivs(x: f64) -> [f64; 5] {
    let (s, c) = x.sin_cos();
    [c, -s, -c, s, c]
}

/// `v² = w(ξ) + t z(ξ)`: backward Euler on `½v²` is exact in time, so the
/// error is purely spatial.
pub mod quadratic_in_time {
    use super::*;

    fn w_jet(x: f64) -> Jet {
        let s = sin_derivs(x);
        let b = Jet::from_derivs(&s.map(|d| 0.3 * d)) + 1.5;
        b * b
    }

    fn z_jet(x: f64) -> Jet {
        Jet::from_derivs(&cos_derivs(x).map(|d| 0.2 * d)) + 0.5
    }

    pub fn exact(x: f64, t: f64) -> f64 {
        (w_jet(x) + z_jet(x) * t).sqrt().value()
    }

    pub fn source(t: f64, grid: &PeriodicGrid, out: &mut [f64], p: &ModelParams) {
        let c = coeffs(p);
        for (i, o) in out.iter_mut().enumerate() {
            let x = grid.node(i);
            let v = (w_jet(x) + z_jet(x) * t).sqrt();
            *o = 0.5 * z_jet(x).value() + jet::spatial_operator(v, &c);
        }
    }
}

/// `v = 1.5 + 0.3 sin(ξ) e^{−t}`.
pub mod decaying {
    use super::*;

    fn v_jet(x: f64, t: f64) -> Jet {
        Jet::from_derivs(&sin_derivs(x).map(|d| 0.3 * (-t).exp() * d)) + 1.5
    }

    pub fn exact(x: f64, t: f64) -> f64 {
        v_jet(x, t).value()
    }

    pub fn source(t: f64, grid: &PeriodicGrid, out: &mut [f64], p: &ModelParams) {
        let c = coeffs(p);
        for (i, o) in out.iter_mut().enumerate() {
            let x = grid.node(i);
            let v = v_jet(x, t);
            let vt = -0.3 * x.sin() * (-t).exp();
            *o = v.value() * vt + jet::spatial_operator(v, &c);
        }
    }
}

fn run_fixed(
    n: usize,
    dt: f64,
    t_end: f64,
    exact: fn(f64, f64) -> f64,
    source: fn(f64, &PeriodicGrid, &mut [f64], &ModelParams),
) -> f64 {
    let p = params();
    let grid = PeriodicGrid::new(LENGTH, n).unwrap();
    let init = FilmProfile::from_fn(grid, |x| exact(x, 0.0)).unwrap();
    let config = SimConfig { dt, t_end, dt_min: dt * 1e-3, dt_max: dt, newton_tol: 1e-12, ..Default::default() };
    let forcing = move |t: f64, g: &PeriodicGrid, out: &mut [f64]| source(t, g, out, &p);
    let out = pde::simulate_forced(init, &p, &config, Some(&forcing), &mut ()).unwrap();
    out.state
        .profile
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| (v - exact(grid.node(i), t_end)).abs())
        .fold(0.0, f64::max)
}

/// Observed orders `log2(e_k / e_{k+1})` between successive halvings.
pub fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Max-norm errors at `t = 0.2` for the given node counts (spatial study).
pub fn spatial_errors(nodes: &[usize]) -> Vec<f64> {
    nodes
        .iter()
        .map(|&n| run_fixed(n, 0.05, 0.2, quadratic_in_time::exact, quadratic_in_time::source))
        .collect()
}

/// Max-norm errors at `t = 0.4` on 512 nodes for the given step sizes (temporal study).
pub fn temporal_errors(dts: &[f64]) -> Vec<f64> {
    dts.iter().map(|&dt| run_fixed(512, dt, 0.4, decaying::exact, decaying::source)).collect()
}
