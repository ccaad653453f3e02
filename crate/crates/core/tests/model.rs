mod support;

use std::f64::consts::PI;

use fibrefilm_core::model::{self, Curvature};
use fibrefilm_core::{Error, FilmProfile, ModelParams, PeriodicGrid};
use proptest::prelude::*;
use support::jet::{self, Coeffs, Jet};

fn coeffs(p: &ModelParams) -> Coeffs {
    Coeffs { sigma: p.sigma, r0: p.r0, a: p.a, m: p.m, mu: p.mu, speed: p.speed }
}

#[test]
fn mobility_at_twice_the_radius() {
    for r0 in [0.2, 1.0, 3.0] {
        let p = ModelParams::new(1.0, r0);
        let exact = r0.powi(4) * (4.0 * 2f64.ln() - 33.0 / 16.0);
        let q = model::mobility(2.0 * r0, &p).unwrap();
        assert!((q - exact).abs() < 1e-14 * r0.powi(4), "{q} vs {exact}");
    }
    let q = model::mobility(0.4, &ModelParams::new(1.0, 0.2)).unwrap();
    assert!((q - 1.13614e-3).abs() < 1e-8);
}

#[test]
fn mobility_vanishes_to_third_order_at_the_fibre() {
    let p = ModelParams::new(1.0, 0.2);
    assert!(model::mobility(0.2, &p).unwrap().abs() < 1e-14 * 0.2f64.powi(4));
    for x in [1e-2, 1e-3] {
        let q = model::mobility(0.2 * (1.0 + x), &p).unwrap();
        let lead = 0.2f64.powi(4) * x * x * x / 3.0;
        assert!(((q - lead) / lead).abs() < 1.5 * x);
    }
    assert!(model::mobility(0.0, &p).is_err());
    assert!(matches!(model::mobility(-1.0, &p), Err(Error::NonPositive { .. })));
}

#[test]
fn mobility_branches_agree_at_the_switch() {
    // Jet evaluation of the closed form is an independent code path.
    let r0 = 0.7;
    let p = ModelParams::new(1.0, r0);
    for x in [0.0199999, 0.0200001, -0.0199999, -0.0200001] {
        let u = r0 * (1.0 + x);
        let exact = jet::mobility(Jet::cst(u), r0).value();
        let q = model::mobility(u, &p).unwrap();
        assert!((q - exact).abs() < 1e-9 * exact.abs(), "{x}: {q} vs {exact}");
        let dq = model::mobility_derivative(u, &p).unwrap();
        let dexact = jet::mobility(Jet::var(u), r0).0[1];
        assert!((dq - dexact).abs() < 1e-9 * dexact.abs());
    }
}

#[test]
fn constant_pressure() {
    let g = PeriodicGrid::new(5.0, 16).unwrap();
    let p = ModelParams::new(0.01, 0.2);
    let j = model::pressure(&FilmProfile::constant(g, 0.2).unwrap(), &p).unwrap();
    assert!(j.values().iter().all(|x| (x + 5.0).abs() < 1e-13));
    let pa = p.with_stabilization(0.1, 3.0);
    let c: f64 = 1.7;
    let j = model::pressure(&FilmProfile::constant(g, c).unwrap(), &pa).unwrap();
    let exact = -1.0 / c + 0.1 * c.powf(-3.0);
    assert!(j.values().iter().all(|x| (x - exact).abs() < 1e-14));
}

#[test]
fn pressure_is_second_order() {
    let p = ModelParams::new(0.01, 0.2).with_stabilization(0.05, 3.0);
    let c = coeffs(&p);
    let length = 2.0 * PI;
    let vx = |x: f64| {
        let (s, co) = x.sin_cos();
        Jet::from_derivs(&[0.4 * s, 0.4 * co, -0.4 * s, -0.4 * co, 0.4 * s]) + 1.2
    };
    let err = |n: usize| {
        let g = PeriodicGrid::new(length, n).unwrap();
        let prof = FilmProfile::from_fn(g, |x| vx(x).value()).unwrap();
        let j = model::pressure(&prof, &p).unwrap();
        j.values()
            .iter()
            .enumerate()
            .map(|(i, ji)| (ji - jet::pressure(vx(g.node(i)), &c).value()).abs())
            .fold(0.0, f64::max)
    };
    let e: Vec<f64> = [32, 64, 128, 256].iter().map(|&n| err(n)).collect();
    for w in e.windows(2) {
        assert!((w[0] / w[1]).log2() >= 1.9, "{e:?}");
    }
}

#[test]
fn regularised_mobility() {
    let p = ModelParams::new(1.0, 0.2).with_eps_reg(1e-8);
    for u in [0.1, 0.2, 0.3, 2.0] {
        let q = model::mobility(u, &p).unwrap();
        assert_eq!(model::mobility_reg(u, &p).unwrap(), q.abs() + 1e-8);
    }
}

#[test]
fn stabilization_term() {
    let p = ModelParams::new(1.0, 0.2).with_stabilization(0.1, 3.0);
    assert!((model::stabilization(0.5, &p).unwrap() - 0.8).abs() < 1e-14);
    assert_eq!(model::stabilization(0.5, &ModelParams::new(1.0, 0.2)).unwrap(), 0.0);
}

#[test]
fn energy_validation_needs_m_above_two() {
    let p = ModelParams::new(1.0, 0.2).with_stabilization(0.1, 2.0);
    let err = p.validate_energy().unwrap_err();
    assert!(err.to_string().contains("m > 2"), "{err}");
    assert!(ModelParams::new(1.0, 0.2).with_stabilization(0.0, 2.0).validate_energy().is_ok());
    assert!(ModelParams::new(-1.0, 0.2).validate().is_err());
    assert!(ModelParams::new(1.0, 0.2).with_gravity(true).validate().is_ok());
}

proptest! {
    #[test]
    fn curvature_identities(z in -50.0f64..50.0) {
        let c = Curvature::at(z);
        let s = (1.0 + z * z).sqrt();
        prop_assert!((c.f * c.phi - 1.0).abs() < 1e-15);
        prop_assert!((c.phi - s).abs() < 1e-13 * s);
        prop_assert!((c.dphi - z / s).abs() < 1e-15);
        prop_assert!((c.ddphi - 1.0 / (s * s * s)).abs() < 1e-15);
        let d = 1e-6 * (1.0 + z.abs());
        let fd = (Curvature::at(z + d).f - Curvature::at(z - d).f) / (2.0 * d);
        prop_assert!((c.df(z) - fd).abs() < 1e-7);
        prop_assert!((0.0..=1.0).contains(&c.f));
    }

    #[test]
    fn mobility_sign(r0 in 0.05f64..5.0, ratio in 0.05f64..10.0) {
        let p = ModelParams::new(1.0, r0);
        let q = model::mobility(r0 * ratio, &p).unwrap();
        if ratio < 0.999 {
            prop_assert!(q < 0.0);
        } else if ratio > 1.001 {
            prop_assert!(q > 0.0);
        }
    }

    #[test]
    fn mobility_derivative_matches_difference(r0 in 0.1f64..2.0, ratio in 0.3f64..5.0) {
        let p = ModelParams::new(1.0, r0);
        let u = r0 * ratio;
        let d = 1e-5 * u;
        let fd = (model::mobility(u + d, &p).unwrap() - model::mobility(u - d, &p).unwrap()) / (2.0 * d);
        let an = model::mobility_derivative(u, &p).unwrap();
        prop_assert!((fd - an).abs() < 1e-7 * (1.0 + u.powi(3)));
    }
}
