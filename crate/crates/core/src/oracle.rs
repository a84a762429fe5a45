//! Independent numerical references used only by tests.
//!
//! Nothing here shares code with the production Bessel or Marcum Q routines:
//! `I_0` comes from its trigonometric integral (trapezoid rule, which is
//! spectrally accurate for periodic integrands) and `Q(a, b)` from adaptive
//! Simpson quadrature of its defining integral.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `e^{-z} I_0(z) = (1/2pi) int_0^{2pi} exp(z (cos t - 1)) dt`.
pub fn scaled_bessel_i0(z: f64) -> f64 {
    let n = 256 + (4.0 * z).ceil() as usize;
    let h = 2.0 * PI / n as f64;
    let sum: f64 = (0..n).map(|k| (z * ((k as f64 * h).cos() - 1.0)).exp()).sum();
    sum / n as f64
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature on `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    // Split into panels so the recursion never starts from a coarse miss.
    let panels = 16;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * h;
            let hi = lo + h;
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = simpson(lo, hi, fa, fm, fb);
            adaptive(f, lo, hi, fa, fm, fb, whole, tol / panels as f64, 40)
        })
        .sum()
}

/// Marcum Q by direct quadrature of
/// `int_b^inf x exp(-(x - a)^2 / 2) e^{-ax} I_0(ax) dx`.
pub fn marcum_q_quadrature(a: f64, b: f64) -> f64 {
    let upper = a.max(b) + 40.0;
    let integrand = |x: f64| x * (-0.5 * (x - a) * (x - a)).exp() * scaled_bessel_i0(a * x);
    if b <= a {
        // Integrate the smaller piece [0, b] and take the complement.
        1.0 - integrate(&integrand, 0.0, b, 1e-15)
    } else {
        integrate(&integrand, b, upper, 1e-15)
    }
}
