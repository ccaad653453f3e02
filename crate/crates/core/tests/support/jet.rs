//! Truncated Taylor series in one variable, used as an exact-derivative oracle
//! for manufactured solutions. `Jet(c)` represents `Σ cₖ εᵏ`, `k ≤ 4`.

#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};

pub const DEG: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; DEG]);

impl Jet {
    pub fn var(x: f64) -> Self {
        let mut c = [0.0; DEG];
        c[0] = x;
        c[1] = 1.0;
        Jet(c)
    }

    pub fn cst(x: f64) -> Self {
        let mut c = [0.0; DEG];
        c[0] = x;
        Jet(c)
    }

    /// Build from derivatives `f, f', f'', …` at the expansion point.
    pub fn from_derivs(d: &[f64]) -> Self {
        let mut c = [0.0; DEG];
        let mut fact = 1.0;
        for (k, x) in d.iter().take(DEG).enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            c[k] = x / fact;
        }
        Jet(c)
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// d/dε; the top coefficient is lost.
    pub fn deriv(&self) -> Self {
        let mut c = [0.0; DEG];
        for k in 0..DEG - 1 {
            c[k] = (k + 1) as f64 * self.0[k + 1];
        }
        Jet(c)
    }

    pub fn sqrt(&self) -> Self {
        let a = &self.0;
        let mut c = [0.0; DEG];
        c[0] = a[0].sqrt();
        for k in 1..DEG {
            let s: f64 = (1..k).map(|i| c[i] * c[k - i]).sum();
            c[k] = (a[k] - s) / (2.0 * c[0]);
        }
        Jet(c)
    }

    pub fn ln(&self) -> Self {
        let a = &self.0;
        let mut c = [0.0; DEG];
        c[0] = a[0].ln();
        for k in 1..DEG {
            let s: f64 = (1..k).map(|i| i as f64 * c[i] * a[k - i]).sum();
            c[k] = (a[k] - s / k as f64) / a[0];
        }
        Jet(c)
    }

    pub fn powf(&self, p: f64) -> Self {
        let a = &self.0;
        let mut c = [0.0; DEG];
        c[0] = a[0].powf(p);
        for k in 1..DEG {
            let s: f64 = (1..=k).map(|i| ((p + 1.0) * i as f64 - k as f64) * a[i] * c[k - i]).sum();
            c[k] = s / (k as f64 * a[0]);
        }
        Jet(c)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.0;
        c.iter_mut().zip(o.0).for_each(|(x, y)| *x += y);
        Jet(c)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|x| -x))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; DEG];
        for k in 0..DEG {
            c[k] = (0..=k).map(|i| self.0[i] * o.0[k - i]).sum();
        }
        Jet(c)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let (a, b) = (&self.0, &o.0);
        let mut c = [0.0; DEG];
        for k in 0..DEG {
            let s: f64 = (1..=k).map(|i| b[i] * c[k - i]).sum();
            c[k] = (a[k] - s) / b[0];
        }
        Jet(c)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, o: f64) -> Jet {
        self + Jet::cst(o)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, o: f64) -> Jet {
        self + Jet::cst(-o)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        Jet(self.0.map(|x| x * o))
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, o: f64) -> Jet {
        Jet(self.0.map(|x| x / o))
    }
}

/// Model coefficients needed by the exact operators below.
#[derive(Debug, Clone, Copy)]
pub struct Coeffs {
    pub sigma: f64,
    pub r0: f64,
    pub a: f64,
    pub m: f64,
    pub mu: f64,
    pub speed: f64,
}

pub fn mobility(v: Jet, r0: f64) -> Jet {
    let v2 = v * v;
    let r2 = r0 * r0;
    v2 * v2 * (v / r0).ln() * 0.25 - (v2 - r2) * (v2 - r2 / 3.0) * 0.1875
}

/// `J = v''/(1+v'²)^{3/2} − 1/(v √(1+v'²)) + A v⁻ᵐ` from a jet of `v`.
pub fn pressure(v: Jet, c: &Coeffs) -> Jet {
    let vx = v.deriv();
    let root = (vx * vx + 1.0).sqrt();
    let curv = (vx / root).deriv();
    let mut j = curv - Jet::cst(1.0) / (v * root);
    if c.a != 0.0 {
        j = j + v.powf(-c.m) * c.a;
    }
    j
}

/// `σ⁻¹[Q J_ξ]_ξ + (μQ − (V/2)v²)_ξ`, exact, from a jet of `v` about a point.
pub fn spatial_operator(v: Jet, c: &Coeffs) -> f64 {
    let q = mobility(v, c.r0);
    let jx = pressure(v, c).deriv();
    let diffusive = (q * jx).deriv().value() / c.sigma;
    let advective = (q * c.mu - v * v * (0.5 * c.speed)).deriv().value();
    diffusive + advective
}
