//! Bracketed scalar root finding.


use crate::error::{Error, Result};

/// Root of `g` in `[a, b]` by a bisection/secant hybrid (Illinois-style
/// safeguarding). `g(a)` and `g(b)` must differ in sign or one must vanish.
pub fn bracketed(mut a: f64, mut b: f64, tol: f64, mut g: impl FnMut(f64) -> f64) -> Result<f64> {
    let mut fa = g(a);
    let mut fb = g(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Bracket { fa, fb });
    }
    for it in 0..400 {
        let width = (b - a).abs();
        if width <= tol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        // Secant proposal, bisection whenever it falls outside the middle of the bracket
        // or on every third iteration to guarantee shrinking.
        let s = b - fb * (b - a) / (fb - fa);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let margin = 0.05 * width;
        let x = if it % 3 == 2 || !(s > lo + margin && s < hi - margin) { 0.5 * (a + b) } else { s };
        let fx = g(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}
