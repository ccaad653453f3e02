use std::f64::consts::PI;

use fibrefilm_core::minimizers::{self, MinimizerBranch};
use fibrefilm_core::{model, ModelParams};

// Spectral first and second derivatives of periodic samples.
pub fn spectral_derivs(v: &[f64], length: f64) -> (Vec<f64>, Vec<f64>) {
    let n = v.len();
    let k0 = 2.0 * PI / length;
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    let coeffs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            v.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, x)| {
                let ph = -2.0 * PI * (k * j) as f64 / n as f64;
                (re + x * ph.cos(), im + x * ph.sin())
            })
        })
        .collect();
    for (j, (o1, o2)) in d1.iter_mut().zip(d2.iter_mut()).enumerate() {
        for (k, (re, im)) in coeffs.iter().enumerate() {
            let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            if 2 * k == n {
                continue;
            }
            let w = kk * k0;
            let ph = 2.0 * PI * (k * j) as f64 / n as f64;
            let (c, s) = (ph.cos(), ph.sin());
            // (re + i im) · i w · e^{iφ}
            *o1 += -w * (re * s + im * c);
            *o2 += -w * w * (re * c - im * s);
        }
        *o1 /= n as f64;
        *o2 /= n as f64;
    }
    (d1, d2)
}

/// Max-norm Euler–Lagrange residual of the reconstructed profile, with spectral derivatives.
pub fn el_residual(branch: &MinimizerBranch, n: usize, p: &ModelParams) -> f64 {
    let prof = minimizers::minimizer_profile(branch, n).unwrap();
    let v = prof.values();
    let (d1, d2) = spectral_derivs(v, prof.grid().length());
    (0..n)
        .map(|i| {
            let s = (1.0 + d1[i] * d1[i]).sqrt();
            let stab = model::stabilization(v[i], p).unwrap();
            (d2[i] / (s * s * s) - 1.0 / (v[i] * s) + stab - branch.lambda).abs()
        })
        .fold(0.0, f64::max)
}

/// Distance between two consecutive minima of the branch shape, each located
/// midway between the level crossings that bracket it.
pub fn minima_spacing(b: &MinimizerBranch) -> f64 {
    let tau = b.tau.unwrap();
    let shape = b.shape().unwrap();
    let level = 0.5 * (b.v1 + b.v2);
    // Each minimum sits midway between a falling and the next rising crossing of `level`.
    let crossing = |lo: f64, hi: f64| {
        let (mut a, mut c) = (lo, hi);
        let sa = shape.value(a) - level;
        for _ in 0..200 {
            let m = 0.5 * (a + c);
            if (shape.value(m) - level).signum() == sa.signum() {
                a = m;
            } else {
                c = m;
            }
        }
        0.5 * (a + c)
    };
    let minimum = |centre: f64| {
        let fall = crossing(centre - 0.5 * tau, centre);
        let rise = crossing(centre, centre + 0.5 * tau);
        0.5 * (fall + rise)
    };
    minimum(1.02 * tau) - minimum(0.03 * tau)
}
