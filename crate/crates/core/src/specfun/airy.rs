//! The Airy-type function
//!
//! ```text
//! A(x) = (pi/3) sum_m [1/Gamma(m + 2/3) + x/(3 Gamma(m + 4/3))] (-x/3)^{3m} / m!
//! ```
//!
//! and its positive zeros `i_1 < i_2 < ...`.
//!
//! `A` solves `A'' = -(x/3) A`. On the oscillatory side (`x > 0`) the
//! Maclaurin series suffers cancellation well before `x = 30`, so the
//! function is continued by Taylor steps of that ODE starting from the
//! series values at the origin. On the decaying side the Maclaurin series
//! is used up to `|x| = 9`, and beyond that the standard exponential
//! asymptotic expansion of the same solution.

use std::f64::consts::PI;

use super::gamma_real;
use crate::{Error, Result};

/// Supported argument range `[-AIRY_DOMAIN, AIRY_DOMAIN]`.
pub const AIRY_DOMAIN: f64 = 30.0;

const MAX_ZERO_INDEX: usize = 20;
const STEP: f64 = 0.25;
const SERIES_SWITCH: f64 = 9.0;

fn initial_values() -> (f64, f64) {
    let a0 = PI / 3.0 / gamma_real(2.0 / 3.0).expect("no pole");
    let a1 = PI / 9.0 / gamma_real(4.0 / 3.0).expect("no pole");
    (a0, a1)
}

/// One Taylor step of `y'' = -(x/3) y` from `x0` by `h`.
fn taylor_step(x0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    // c_{k+2} (k+2)(k+1) = -(x0 c_k + c_{k-1}) / 3
    let mut c = [0.0, y, dy]; // c_{k-1}, c_k, c_{k+1}
    let mut value = y + dy * h;
    let mut deriv = dy;
    let mut hp = h; // h^{k+1}
    let mut small = 0;
    for k in 0..200usize {
        let next = -(x0 * c[1] + c[0]) / (3.0 * ((k + 2) * (k + 1)) as f64);
        let dterm = (k + 2) as f64 * next * hp;
        hp *= h;
        let term = next * hp;
        value += term;
        deriv += dterm;
        c = [c[1], c[2], next];
        let scale = value.abs().max(deriv.abs()).max(1e-300);
        if term.abs() < 1e-18 * scale && dterm.abs() < 1e-18 * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (value, deriv)
}

fn walk_to(x: f64) -> (f64, f64) {
    let (mut y, mut dy) = initial_values();
    let steps = (x / STEP).ceil() as usize;
    let h = if steps > 0 { x / steps as f64 } else { 0.0 };
    for i in 0..steps {
        let (ny, ndy) = taylor_step(i as f64 * h, y, dy, h);
        y = ny;
        dy = ndy;
    }
    (y, dy)
}

fn maclaurin(x: f64) -> (f64, f64) {
    let (c0, c1) = initial_values();
    // c_{3m} and c_{3m+1}; c_{3m+3} = -c_{3m} / (3 (3m+2)(3m+3)), same shift for c_{3m+1}
    let x3 = x * x * x;
    let mut a = c0;
    let mut b = c1 * x;
    let mut value = a + b;
    let mut deriv = c1;
    let mut xp = 1.0; // x^{3m}
    let mut m = 0usize;
    loop {
        let mf = m as f64;
        a *= -x3 / (3.0 * (3.0 * mf + 2.0) * (3.0 * mf + 3.0));
        b *= -x3 / (3.0 * (3.0 * mf + 3.0) * (3.0 * mf + 4.0));
        m += 1;
        // derivative terms: 3m c_{3m} x^{3m-1} + (3m+1) c_{3m+1} x^{3m}
        let mf = m as f64;
        let da = if x != 0.0 { 3.0 * mf * a / x } else { 0.0 };
        let db = (3.0 * mf + 1.0) * b / x.abs().max(f64::MIN_POSITIVE) * x.signum();
        xp *= x3;
        value += a + b;
        deriv += da + if x != 0.0 { db } else { 0.0 };
        if (a.abs() + b.abs()) < 1e-18 * value.abs().max(1e-300) && m > 2 {
            break;
        }
        if m > 400 {
            break;
        }
    }
    let _ = xp;
    (value, deriv)
}

/// Exponential asymptotic expansion for `x` far on the negative side,
/// where `A(x) = pi 3^{-1/3} Ai(-x 3^{-1/3})`.
fn decaying_asymptotic(x: f64) -> (f64, f64) {
    let c = 3f64.cbrt();
    let t = -x / c;
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    // u_k and v_k coefficients (DLMF 9.7.2)
    let mut u = 1.0;
    let mut sum_u = 1.0;
    let mut sum_v = 1.0;
    let mut zp = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zp /= -zeta;
        let term = u * zp;
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        sum_u += term;
        sum_v += v * zp;
    }
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    let ai = pref * t.powf(-0.25) * sum_u;
    let dai = -pref * t.powf(0.25) * sum_v;
    let scale = PI / c;
    // d/dx Ai(-x/c) = -Ai'(t)/c
    (scale * ai, -scale * dai / c)
}

/// `A(x)` and `A'(x)` for `|x| <= 30`.
pub fn airy_a_with_derivative(x: f64) -> Result<(f64, f64)> {
    if !(x.abs() <= AIRY_DOMAIN) {
        return Err(Error::Domain(format!(
            "Airy-type function is evaluated only on |x| <= {AIRY_DOMAIN}, got {x}"
        )));
    }
    Ok(if x >= 0.0 {
        walk_to(x)
    } else if x >= -SERIES_SWITCH {
        maclaurin(x)
    } else {
        decaying_asymptotic(x)
    })
}

pub fn airy_a(x: f64) -> Result<f64> {
    airy_a_with_derivative(x).map(|(y, _)| y)
}

/// The first `count` positive zeros `i_1 < ... < i_count` of `A`.
pub fn airy_zeros(count: usize) -> Result<Vec<f64>> {
    if count == 0 || count > MAX_ZERO_INDEX {
        return Err(Error::Domain(format!(
            "Airy zero index must lie in 1..={MAX_ZERO_INDEX}, got {count}"
        )));
    }
    let mut zeros = Vec::with_capacity(count);
    let (mut y, mut dy) = initial_values();
    let mut x = 0.0;
    while zeros.len() < count {
        if x + STEP > AIRY_DOMAIN + 1e-12 {
            return Err(Error::BracketFailure(format!(
                "only {} Airy zeros found below x = {AIRY_DOMAIN}",
                zeros.len()
            )));
        }
        let (ny, ndy) = taylor_step(x, y, dy, STEP);
        if ny == 0.0 || ny.signum() != y.signum() {
            zeros.push(refine_zero(x, y, dy, STEP));
        }
        x += STEP;
        y = ny;
        dy = ndy;
    }
    Ok(zeros)
}

/// Newton iteration on `h -> A(x0 + h)` with a bisection safeguard,
/// evaluating by single Taylor steps from the bracket's left end.
fn refine_zero(x0: f64, y0: f64, dy0: f64, width: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, width);
    let mut h = width / 2.0;
    for _ in 0..100 {
        let (f, df) = taylor_step(x0, y0, dy0, h);
        if f == 0.0 {
            return x0 + h;
        }
        if f.signum() == y0.signum() {
            lo = h;
        } else {
            hi = h;
        }
        let mut next = h - f / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - h).abs() <= 1e-16 * (x0 + next) || hi - lo <= 1e-15 * (x0 + hi) {
            return x0 + next;
        }
        h = next;
    }
    x0 + h
}

/// The `j`-th positive zero `i_j` of `A`, `1 <= j <= 20`.
pub fn airy_zero(j: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::Domain("Airy zero index starts at 1".into()));
    }
    airy_zeros(j).map(|z| z[j - 1])
}
