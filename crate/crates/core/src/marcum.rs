//! Marcum Q function and the exponentially scaled modified Bessel functions
//! it is built from.
//!
//! Both the general `Q(a, b)` and the Gilbert-Elliott "good to bad" probability
//! are evaluated from the Neumann series in `I_k(ab)`. The Bessel sequence is
//! produced by Miller's backward recurrence, normalized with
//! `I_0(x) + 2 * sum_{k>=1} I_k(x) = e^x`, which yields `e^{-x} I_k(x)` directly
//! and never overflows for the large arguments seen at correlation close to 1.

use crate::error::{Error, Result};

/// Terms smaller than this fraction of the running sum end the series.
const SERIES_RTOL: f64 = 1e-16;

const RESCALE_ABOVE: f64 = 1e250;

/// `e^{-x} I_k(x)` for `k = 0, 1, ..., n` where `n` is large enough that the
/// discarded tail is far below double precision.
pub(crate) fn scaled_bessel_i_sequence(x: f64) -> Vec<f64> {
    debug_assert!(x >= 0.0 && x.is_finite());
    if x == 0.0 {
        return vec![1.0];
    }
    // I_k / I_0 ~ exp(-k^2 / 2x) for k << x; 12 sqrt(x) puts the start index
    // past exp(-72) and the constant covers small x.
    let start = 40 + (12.0 * x.sqrt()).ceil() as usize;
    let mut f = vec![0.0; start + 2];
    f[start] = 1.0;
    for k in (1..=start).rev() {
        let prev = (2.0 * k as f64 / x) * f[k] + f[k + 1];
        f[k - 1] = prev;
        if prev > RESCALE_ABOVE {
            for v in &mut f[k - 1..=start] {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    f.truncate(start + 1);
    let norm = f[0] + 2.0 * f[1..].iter().sum::<f64>();
    for v in &mut f {
        *v /= norm;
    }
    f
}

fn check_argument(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::Domain(format!(
            "Marcum Q argument {name} must be finite and non-negative, got {v}"
        )));
    }
    Ok(())
}

/// First-order Marcum Q function
/// `Q(a, b) = int_b^inf x exp(-(x^2 + a^2)/2) I_0(a x) dx`.
pub fn marcum_q(a: f64, b: f64) -> Result<f64> {
    check_argument("a", a)?;
    check_argument("b", b)?;
    if b == 0.0 {
        return Ok(1.0);
    }
    if a == 0.0 {
        return Ok((-0.5 * b * b).exp());
    }

    let bessel = scaled_bessel_i_sequence(a * b);
    let damping = (-0.5 * (a - b) * (a - b)).exp();
    if a < b {
        // Q = e^{-(a-b)^2/2} sum_{k>=0} (a/b)^k e^{-ab} I_k(ab)
        let q = damping * weighted_tail(&bessel, a / b, 0);
        Ok(q.clamp(0.0, 1.0))
    } else {
        // 1 - Q = e^{-(a-b)^2/2} sum_{k>=1} (b/a)^k e^{-ab} I_k(ab)
        let q = 1.0 - damping * weighted_tail(&bessel, b / a, 1);
        Ok(q.clamp(0.0, 1.0))
    }
}

/// `sum_{k >= first} ratio^k * bessel[k]`, truncated adaptively.
fn weighted_tail(bessel: &[f64], ratio: f64, first: usize) -> f64 {
    let mut weight = ratio.powi(first as i32);
    let mut sum = 0.0;
    for &term in &bessel[first.min(bessel.len())..] {
        let t = weight * term;
        sum += t;
        // Both factors are non-increasing in k, so a small term bounds the rest.
        if t <= SERIES_RTOL * sum {
            break;
        }
        weight *= ratio;
    }
    sum
}

/// `Q(theta, rho*theta) - Q(rho*theta, theta)` evaluated without cancellation.
///
/// With `x = rho theta^2` the difference equals
/// `1 - exp(-(1-rho)^2 theta^2 / 2) * (1 - D)` where
/// `D = 2 sum_{k>=1} (1 - rho^k) e^{-x} I_k(x)` is a sum of positive terms, so
/// the result keeps full relative precision even when it is tiny (very small
/// outage probabilities or correlation near 1).
pub(crate) fn bivariate_rayleigh_crossing(theta: f64, rho: f64) -> f64 {
    debug_assert!(theta >= 0.0 && (0.0..1.0).contains(&rho));
    let x = rho * theta * theta;
    let bessel = scaled_bessel_i_sequence(x);
    let ln_rho = rho.ln();
    let mut d = 0.0;
    for (k, &term) in bessel.iter().enumerate().skip(1) {
        let one_minus_pow = -(k as f64 * ln_rho).exp_m1();
        d += 2.0 * one_minus_pow * term;
    }
    let exponent = -0.5 * (1.0 - rho) * (1.0 - rho) * theta * theta + (-d).ln_1p();
    -exponent.exp_m1()
}
