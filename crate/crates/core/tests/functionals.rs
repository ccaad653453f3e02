mod support;

use std::f64::consts::PI;

use fibrefilm_core::functionals::{self, GravityFrame};
use fibrefilm_core::minimizers::{self, MinimizerBranch};
use fibrefilm_core::{FilmProfile, ModelParams, PeriodicGrid};
use proptest::prelude::*;
use support::jet::{self, Jet};

fn params() -> ModelParams {
    ModelParams::new(0.01, 0.2)
}

fn wavy(length: f64, n: usize, amp: f64) -> FilmProfile {
    let g = PeriodicGrid::new(length, n).unwrap();
    FilmProfile::from_fn(g, |x| 1.5 + amp * (2.0 * PI * x / length).sin()).unwrap()
}

// 64-point Gauss–Legendre on [a, b]; nodes by Newton iteration on P₆₄.
fn gauss_legendre(a: f64, b: f64, g: impl Fn(f64) -> f64) -> f64 {
    let n = 64;
    let mut sum = 0.0;
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        sum += w * g(0.5 * (a + b) + 0.5 * (b - a) * x);
    }
    0.5 * (b - a) * sum
}

#[test]
fn constant_profile_energy_is_radius_times_length() {
    let g = PeriodicGrid::new(10.0, 40).unwrap();
    let r = FilmProfile::constant(g, 0.2).unwrap();
    assert!((functionals::energy(&r, &params()).unwrap() - 2.0).abs() < 1e-13);
    let pa = params().with_stabilization(0.1, 3.0);
    // r0 L + A/(m−2) r0^(−1) L = 2 + 5
    assert!((functionals::energy(&r, &pa).unwrap() - 7.0).abs() < 1e-12);
}

#[test]
fn sinusoid_energy_converges_to_continuous_value() {
    let p = params().with_stabilization(0.05, 3.0);
    let length = 7.0;
    let k = 2.0 * PI / length;
    // Continuous energy with the periodic trapezoid rule on the exact
    // integrand (spectrally accurate) as the oracle.
    let exact = {
        let n = 4096;
        let h = length / n as f64;
        (0..n)
            .map(|i| {
                let x = i as f64 * h;
                let v = 1.5 + 0.6 * (k * x).sin();
                let vx = 0.6 * k * (k * x).cos();
                v * (1.0 + vx * vx).sqrt() + 0.05 / v
            })
            .sum::<f64>()
            * h
    };
    let err = |n: usize| (functionals::energy(&wavy(length, n, 0.6), &p).unwrap() - exact).abs();
    let e: Vec<f64> = [64, 128, 256].iter().map(|&n| err(n)).collect();
    assert!(e[2] < 1e-4 * exact);
    for w in e.windows(2) {
        assert!((w[0] / w[1]).log2() > 1.9, "{e:?}");
    }
}

#[test]
fn lagrangian_is_affine_in_lambda() {
    let prof = wavy(9.0, 64, 0.5);
    let p = params();
    let e = functionals::energy(&prof, &p).unwrap();
    let m = functionals::mass(&prof);
    for lambda in [-2.0, -0.5, 0.0, 1.3] {
        let l = functionals::lagrangian(&prof, &p, lambda).unwrap();
        assert!((l - (e + 0.5 * lambda * m)).abs() < 1e-12 * l.abs().max(1.0));
    }
}

#[test]
fn dissipation_vanishes_on_a_minimizer() {
    let p = params();
    let b = MinimizerBranch::new(-0.5, 0.5, &p).unwrap();
    let prof = minimizers::minimizer_profile(&b, 256).unwrap();
    let d = functionals::dissipation_rate(&prof, &p).unwrap();
    let scale = functionals::dissipation_rate(&wavy(b.tau.unwrap(), 256, 1.0), &p).unwrap();
    assert!(d >= 0.0 && d < 1e-6 * scale, "{d} vs {scale}");
    assert!((functionals::lambda_bar(&prof, &p).unwrap() + 0.5).abs() < 1e-4);
}

#[test]
fn entropy_matches_swapped_order_oracle() {
    // G(z) = ∫_{s0}^{z} vᵅ/|Q(v)| · (z² − v²)/2 dv after exchanging the order of integration.
    let p = params();
    let (r0, alpha) = (p.r0, 1.0);
    let (s0, z) = (2.0 * r0, 3.0 * r0);
    let oracle = gauss_legendre(s0, z, |v| {
        let q = jet::mobility(Jet::cst(v), r0).value().abs();
        v.powf(alpha) / q * 0.5 * (z * z - v * v)
    });
    let g = functionals::entropy_g(z, alpha, s0, &p).unwrap();
    assert!((g - oracle).abs() < 1e-8 * oracle.abs(), "{g} vs {oracle}");
    assert!(functionals::entropy_g(s0, alpha, s0, &p).unwrap().abs() < 1e-14);
    assert!(functionals::entropy_g(r0, alpha, s0, &p).is_err());
}

#[test]
fn flux_offset_closes_the_potential() {
    let p = params();
    let prof = wavy(9.0, 128, 0.8);
    assert!(functionals::nu_for_periodicity(&prof, 0.0, &p).unwrap() < 0.0);
    for speed in [0.0, 2.0, 5.0] {
        let frame = GravityFrame::periodic(&prof, speed, &p).unwrap();
        assert!(frame.f_end.abs() <= 1e-10 * p.sigma * 9.0, "{}", frame.f_end);
    }
}

#[test]
fn modified_energy_adds_the_potential() {
    let p = params().with_gravity(true);
    let prof = wavy(9.0, 64, 0.8);
    let h = prof.grid().spacing();
    let (speed, nu) = (3.0, -0.7);
    let frame = GravityFrame::with_nu(&prof, speed, nu, &p).unwrap();
    // Independent cumulative trapezoid for F.
    let g: Vec<f64> = prof
        .values()
        .iter()
        .map(|&v| {
            let q = jet::mobility(Jet::cst(v), p.r0).value();
            1.0 - 0.5 * speed * v * v / q + nu / q
        })
        .collect();
    let mut f = vec![0.0];
    for i in 1..g.len() {
        let prev = f[i - 1];
        f.push(prev - p.sigma * 0.5 * h * (g[i - 1] + g[i]));
    }
    let pot: f64 = prof.values().iter().zip(&f).map(|(v, fi)| 0.5 * h * v * v * fi).sum();
    let e = functionals::energy(&prof, &p).unwrap();
    let em = functionals::modified_energy(&prof, &frame, &p).unwrap();
    assert!((em - e - pot).abs() < 1e-12 * em.abs());
}

#[test]
fn speed_formula_rejects_near_constant_profiles() {
    let g = PeriodicGrid::new(9.0, 32).unwrap();
    let c = FilmProfile::constant(g, 1.1).unwrap();
    assert!(functionals::tw_speed_formula(&c, &params()).is_err());
}

fn positive_profile() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.2f64..3.0, 16..48)
}

proptest! {
    #[test]
    fn mass_scales_quadratically(v in positive_profile(), c in 0.1f64..5.0) {
        let g = PeriodicGrid::new(6.0, v.len()).unwrap();
        let prof = FilmProfile::new(g, v.clone()).unwrap();
        let scaled = prof.scaled(c).unwrap();
        let (m, ms) = (functionals::mass(&prof), functionals::mass(&scaled));
        prop_assert!((ms - c * c * m).abs() < 1e-12 * ms);
    }

    #[test]
    fn dissipation_is_non_negative(v in positive_profile()) {
        let g = PeriodicGrid::new(6.0, v.len()).unwrap();
        let prof = FilmProfile::new(g, v).unwrap();
        prop_assert!(functionals::dissipation_rate(&prof, &params()).unwrap() >= 0.0);
    }

    #[test]
    fn energy_respects_lower_bound(v in positive_profile(), a in 0.0f64..0.5) {
        let p = params().with_stabilization(a, 3.0);
        let g = PeriodicGrid::new(6.0, v.len()).unwrap();
        let prof = FilmProfile::new(g, v).unwrap();
        let bound = functionals::energy_lower_bound(functionals::mass(&prof), 6.0, &p);
        prop_assert!(functionals::energy(&prof, &p).unwrap() >= bound * (1.0 - 1e-14));
    }
}
