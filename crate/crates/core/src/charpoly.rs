//! `det(1 - z L_n(nu))` and related functions.
//!
//! Three independent evaluation routes:
//!
//! * the orthonormal-polynomial recurrence of the Jacobi matrix `B_n(nu)`,
//!   combined as `(n + nu) P_n - (n + nu - 1) P_{n-1}`;
//! * for `nu = 1`, the terminating sum `3F2(-n, 1/2 + i w, 1/2 - i w; 1, 1; 1)`
//!   with `w = sqrt(z - 1/4)`, evaluated exactly in integer arithmetic;
//! * for `nu = 1`, the three-term recurrence
//!   `(n+1)^2 p_{n+1} = (2n^2 + 2n + 1 - z) p_n - n^2 p_{n-1}`.
//!
//! Values are carried with a separate logarithmic scale so that none of the
//! routes overflow for large `n` or large `|z|`.

use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{float::FloatCore, One, ToPrimitive, Zero};

use crate::specfun::{gamma_complex, hyp3f2_unit, ln_gamma_complex, SeriesPolicy};
use crate::{Complex64, Error, Result};

const RESCALE_HI: f64 = 1e150;
const RESCALE_LO: f64 = 1e-150;

/// Real number stored as `sign * exp(log_mag)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub sign: i8,
    pub log_mag: f64,
}

impl ScaledValue {
    pub const ZERO: Self = Self {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };

    pub fn from_f64(x: f64) -> Self {
        Self::from_parts(x, 0.0)
    }

    /// `mantissa * exp(log_scale)`.
    pub fn from_parts(mantissa: f64, log_scale: f64) -> Self {
        if mantissa == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if mantissa > 0.0 { 1 } else { -1 },
                log_mag: mantissa.abs().ln() + log_scale,
            }
        }
    }

    /// Converts back; overflows to `+-inf` or underflows to `0`.
    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * self.log_mag.exp()
    }

    pub fn times(self, other: Self) -> Self {
        let sign = self.sign * other.sign;
        if sign == 0 {
            return Self::ZERO;
        }
        Self {
            sign,
            log_mag: self.log_mag + other.log_mag,
        }
    }

    /// `|a - b| / max(|a|, |b|)`, computed without leaving log space.
    pub fn rel_diff(self, other: Self) -> f64 {
        match (self.sign, other.sign) {
            (0, 0) => 0.0,
            (0, _) | (_, 0) => 1.0,
            (s, t) => {
                let r = (-(self.log_mag - other.log_mag).abs()).exp();
                if s == t {
                    1.0 - r
                } else {
                    1.0 + r
                }
            }
        }
    }
}

/// Complex number stored as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledComplex {
    pub fn new(mantissa: Complex64, log_scale: f64) -> Self {
        Self { mantissa, log_scale }
    }

    pub fn to_complex(self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    /// Real part as a [`ScaledValue`].
    pub fn re(self) -> ScaledValue {
        ScaledValue::from_parts(self.mantissa.re, self.log_scale)
    }

    /// `|a - b| / max(|a|, |b|)`.
    pub fn rel_diff(self, other: Self) -> f64 {
        let (a, b) = (self.mantissa, other.mantissa);
        if a.norm() == 0.0 && b.norm() == 0.0 {
            return 0.0;
        }
        let la = a.norm().ln() + self.log_scale;
        let lb = b.norm().ln() + other.log_scale;
        let top = la.max(lb);
        let a = a / a.norm() * (la - top).exp();
        let b = b / b.norm() * (lb - top).exp();
        let a = if a.is_nan() { Complex64::zero() } else { a };
        let b = if b.is_nan() { Complex64::zero() } else { b };
        (a - b).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharPolyMethod {
    PRecurrence,
    F32Terminating,
    CdhRecurrence,
}

/// A value of `det(1 - z L_n(nu))` together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharPolyEval {
    pub value: ScaledComplex,
    pub n: usize,
    pub nu: f64,
    pub z: Complex64,
    pub method: CharPolyMethod,
}

fn check_nu(nu: f64) -> Result<()> {
    if !nu.is_finite() {
        return Err(Error::InvalidArgument(format!("nu must be finite, got {nu}")));
    }
    if nu <= 0.0 && nu.fract() == 0.0 {
        return Err(Error::Pole(format!("nu = {nu} is a nonpositive integer")));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    Ok(())
}

/// Runs `b_k P_{k+1} = (d_k - z) P_k - b_{k-1} P_{k-1}` up to `P_n`, jointly
/// with the `z`-derivative. Returns `(P_{n-1}, P_n, P'_{n-1}, P'_n, log_scale)`.
fn p_recurrence(z: Complex64, n: usize, nu: f64) -> (Complex64, Complex64, Complex64, Complex64, f64) {
    let b = |k: usize| (k as f64 + nu) * (k as f64 + 1.0 + nu);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::zero();
    let (mut p0, mut p1) = (one, (b(0) - z) / b(0));
    let (mut dp0, mut dp1) = (zero, Complex64::new(-1.0 / b(0), 0.0));
    let mut log_scale = 0.0;
    for k in 1..n {
        let bk = b(k);
        let bkm = b(k - 1);
        let dk = bkm + bk;
        let p2 = ((dk - z) * p1 - bkm * p0) / bk;
        let dp2 = ((dk - z) * dp1 - p1 - bkm * dp0) / bk;
        p0 = p1;
        p1 = p2;
        dp0 = dp1;
        dp1 = dp2;
        let m = p1.norm().max(p0.norm());
        if m > RESCALE_HI || (m < RESCALE_LO && m > 0.0) {
            let inv = 1.0 / m;
            p0 *= inv;
            p1 *= inv;
            dp0 *= inv;
            dp1 *= inv;
            log_scale += m.ln();
        }
    }
    (p0, p1, dp0, dp1, log_scale)
}

/// `det(1 - z L_n(nu))` by the orthonormal-polynomial route, with scale.
pub fn charpoly_via_p_eval(z: Complex64, n: usize, nu: f64) -> Result<CharPolyEval> {
    check_n(n)?;
    check_nu(nu)?;
    let value = if n == 1 {
        ScaledComplex::new(1.0 - z / nu, 0.0)
    } else {
        let (pm, p, _, _, s) = p_recurrence(z, n, nu);
        let nf = n as f64;
        ScaledComplex::new((nf + nu) * p - (nf + nu - 1.0) * pm, s)
    };
    Ok(CharPolyEval {
        value,
        n,
        nu,
        z,
        method: CharPolyMethod::PRecurrence,
    })
}

/// `det(1 - z L_n(nu))` by the orthonormal-polynomial route.
pub fn charpoly_via_p(z: Complex64, n: usize, nu: f64) -> Result<Complex64> {
    charpoly_via_p_eval(z, n, nu).map(|e| e.value.to_complex())
}

/// `d/dz det(1 - z L_n) / det(1 - z L_n) / log n`, from the differentiated
/// recurrence.
pub fn log_derivative_ratio(xi: Complex64, n: usize, nu: f64) -> Result<Complex64> {
    check_n(n)?;
    check_nu(nu)?;
    if n < 2 {
        return Err(Error::InvalidArgument("log n vanishes for n = 1".into()));
    }
    if xi.im == 0.0 {
        return Err(Error::InvalidArgument("xi must lie off the real axis".into()));
    }
    let (pm, p, dpm, dp, _) = p_recurrence(xi, n, nu);
    let nf = n as f64;
    let d = (nf + nu) * p - (nf + nu - 1.0) * pm;
    let dd = (nf + nu) * dp - (nf + nu - 1.0) * dpm;
    if d.norm() == 0.0 {
        return Err(Error::Singular(format!("xi = {xi} is a root")));
    }
    Ok(dd / d / nf.ln())
}

fn big_top_bits(x: &BigInt) -> (f64, u64) {
    let bits = x.bits();
    let shift = bits.saturating_sub(62);
    ((x >> shift).to_f64().unwrap_or(0.0), shift)
}

/// Splits a finite `f64` as `m * 2^e` with integer `m`.
fn decode(x: f64) -> (BigInt, i64) {
    let (mant, exp, sign) = FloatCore::integer_decode(x);
    (BigInt::from(mant) * i64::from(sign), i64::from(exp))
}

/// `3F2(-n, 1/2 + i w, 1/2 - i w; 1, 1; 1)`, `w = sqrt(z - 1/4)`, with scale.
///
/// The alternating sum cancels heavily, so it is evaluated exactly. With
/// `z = Z / 2^E` for a Gaussian integer `Z`, and using
/// `(1/2 + i w)_k (1/2 - i w)_k = prod_{j<k} (j (j + 1) + z)`,
///
/// ```text
/// (n!)^2 2^{E n} F = sum_k (-1)^k C(n,k) (n!/k!)^2 2^{E (n-k)} prod_{j<k} (2^E j (j+1) + Z)
/// ```
///
/// is an exact Gaussian integer. The result is correctly rounded up to the
/// conversion of `z` to binary, which is exact.
pub fn charpoly_nu1_3f2_eval(z: Complex64, n: usize) -> Result<CharPolyEval> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("z must be finite, got {z}")));
    }
    let (mr, er) = decode(z.re);
    let (mi, ei) = decode(z.im);
    let mut e_min = 0i64;
    if !mr.is_zero() {
        e_min = e_min.min(er);
    }
    if !mi.is_zero() {
        e_min = e_min.min(ei);
    }
    let e = (-e_min) as u64;
    let shift_to = |m: BigInt, ex: i64| -> BigInt {
        if m.is_zero() {
            m
        } else {
            m << ((ex + e as i64) as u64)
        }
    };
    let zz = Complex::new(shift_to(mr, er), shift_to(mi, ei));
    let pow_e = BigInt::one() << e;

    // n!/k! for k = 0..=n
    let mut fall = vec![BigInt::one(); n + 1];
    for k in (0..n).rev() {
        fall[k] = &fall[k + 1] * BigInt::from(k + 1);
    }
    let mut binom = BigInt::one();
    let mut prod: Complex<BigInt> = Complex::new(BigInt::one(), BigInt::zero());
    let mut sum: Complex<BigInt> = Complex::new(BigInt::zero(), BigInt::zero());
    for k in 0..=n {
        let mut c = &binom * &fall[k] * &fall[k];
        c <<= e * (n - k) as u64;
        if k % 2 == 1 {
            c = -c;
        }
        sum.re += &c * &prod.re;
        sum.im += &c * &prod.im;
        if k < n {
            let jj = BigInt::from(k) * BigInt::from(k + 1) * &pow_e;
            let factor = Complex::new(jj + &zz.re, zz.im.clone());
            prod *= factor;
            binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
        }
    }

    let bits = sum.re.bits().max(sum.im.bits());
    let shift = bits.saturating_sub(62);
    let re = (&sum.re >> shift).to_f64().unwrap_or(0.0);
    let im = (&sum.im >> shift).to_f64().unwrap_or(0.0);
    let den = &fall[0] * &fall[0];
    let (dm, dshift) = big_top_bits(&den);
    let log2 = shift as f64 - dshift as f64 - (e * n as u64) as f64;
    let mut mantissa = Complex64::new(re, im) / dm;
    let mut log_scale = log2 * LN_2;
    if log2.abs() < 1000.0 {
        let folded = mantissa * 2f64.powi(log2 as i32);
        if folded.norm() > 1e-290 || mantissa.norm() == 0.0 {
            mantissa = folded;
            log_scale = 0.0;
        }
    }
    Ok(CharPolyEval {
        value: ScaledComplex::new(mantissa, log_scale),
        n,
        nu: 1.0,
        z,
        method: CharPolyMethod::F32Terminating,
    })
}

/// `det(1 - z L_n(1))` through the terminating `3F2` of Thm-2.2 form.
pub fn charpoly_nu1_3f2(z: Complex64, n: usize) -> Result<Complex64> {
    charpoly_nu1_3f2_eval(z, n).map(|e| e.value.to_complex())
}

/// `S_n(x; a, b, c)` (continuous dual Hahn) from its three-term recurrence,
/// with scale. `S_0 = 1`.
pub fn cdh_polynomial(x: Complex64, a: f64, b: f64, c: f64, n: usize) -> ScaledComplex {
    let mut s0 = Complex64::new(1.0, 0.0);
    let mut s1 = Complex64::new((a + b) * (a + c) - a * a, 0.0) - x;
    if n == 0 {
        return ScaledComplex::new(s0, 0.0);
    }
    let mut log_scale = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let alpha = (kf + a + b) * (kf + a + c) + kf * (kf + b + c - 1.0) - a * a;
        let beta = kf * (kf + a + b - 1.0) * (kf + a + c - 1.0) * (kf + b + c - 1.0);
        let s2 = (alpha - x) * s1 - beta * s0;
        s0 = s1;
        s1 = s2;
        let m = s1.norm().max(s0.norm());
        if m > RESCALE_HI || (m < RESCALE_LO && m > 0.0) {
            s0 /= m;
            s1 /= m;
            log_scale += m.ln();
        }
    }
    ScaledComplex::new(s1, log_scale)
}

/// `S_n(z - 1/4; 1/2, 1/2, 1/2) / (n!)^2`, a fourth route to `det(1 - z L_n(1))`.
pub fn charpoly_nu1_cdh(z: Complex64, n: usize) -> CharPolyEval {
    let s = cdh_polynomial(z - 0.25, 0.5, 0.5, 0.5, n);
    let ln_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    CharPolyEval {
        value: ScaledComplex::new(s.mantissa, s.log_scale - 2.0 * ln_fact),
        n,
        nu: 1.0,
        z,
        method: CharPolyMethod::CdhRecurrence,
    }
}

/// One pass of the `nu = 1` recurrence, visiting `(k, p_k)` as scaled values.
fn nu1_scan(z: f64, n_max: usize, mut visit: impl FnMut(usize, f64, f64)) {
    let (mut p0, mut p1) = (1.0, 1.0 - z);
    let mut log_scale = 0.0;
    visit(0, p0, log_scale);
    if n_max == 0 {
        return;
    }
    visit(1, p1, log_scale);
    for k in 1..n_max {
        let kf = k as f64;
        let p2 = ((2.0 * kf * kf + 2.0 * kf + 1.0 - z) * p1 - kf * kf * p0) / ((kf + 1.0) * (kf + 1.0));
        p0 = p1;
        p1 = p2;
        let m = p1.abs().max(p0.abs());
        if m > RESCALE_HI || (m < RESCALE_LO && m > 0.0) {
            p0 /= m;
            p1 /= m;
            log_scale += m.ln();
        }
        visit(k + 1, p1, log_scale);
    }
}

/// `det(1 - z L_k(1))` for `k = 0..=n_max`, with `p_0 = 1`, `p_1 = 1 - z`.
pub fn charpoly_nu1_recurrence(z: f64, n_max: usize) -> Vec<ScaledValue> {
    let mut out = Vec::with_capacity(n_max + 1);
    nu1_scan(z, n_max, |_, p, s| out.push(ScaledValue::from_parts(p, s)));
    out
}

/// `(det(1 - z L_n(1)), sign changes along p_0, ..., p_n)`.
///
/// The sign changes count eigenvalues `mu` of `L_n(1)` with `1 - z mu < 0`,
/// i.e. `#{mu > 1/z}` for `z > 0`. A vanishing `p_k` is counted as having
/// the sign opposite to its predecessor.
pub fn nu1_value_and_sign_changes(z: f64, n: usize) -> (ScaledValue, usize) {
    let mut changes = 0;
    let mut prev_sign = 1.0f64;
    let mut last = ScaledValue::from_f64(1.0);
    nu1_scan(z, n, |k, p, s| {
        if k > 0 {
            let sign = if p == 0.0 { -prev_sign } else { p.signum() };
            if sign != prev_sign {
                changes += 1;
            }
            prev_sign = sign;
        }
        if k == n {
            last = ScaledValue::from_parts(p, s);
        }
    });
    (last, changes)
}

/// `#{mu in sigma(L_n(1)) : mu > 1/z}` for `z > 0`.
pub fn nu1_sign_changes(z: f64, n: usize) -> usize {
    nu1_value_and_sign_changes(z, n).1
}

/// `q_n(xi) = det(1 - (1/4 + xi^2) L_n(1))`.
pub fn q_n(xi: f64, n: usize) -> f64 {
    q_n_scaled(xi, n).to_f64()
}

pub fn q_n_scaled(xi: f64, n: usize) -> ScaledValue {
    nu1_value_and_sign_changes(0.25 + xi * xi, n).0
}

/// `phi_n(z; nu)`: the gamma prefactor in log space times a unit-argument
/// `3F2` with convergence margin `n + nu`.
pub fn phi_n(z: Complex64, n: usize, nu: f64, policy: SeriesPolicy) -> Result<Complex64> {
    let np = n as f64 + nu;
    if !(np > 0.0) {
        return Err(Error::InvalidArgument(format!("phi_n needs n + nu > 0, got {np}")));
    }
    let two_z1 = 2.0 * z + 1.0;
    if two_z1.im == 0.0 && two_z1.re <= 0.0 && two_z1.re.fract() == 0.0 {
        return Err(Error::Pole(format!("2z + 1 = {} is a nonpositive integer", two_z1.re)));
    }
    let c = z + np + 1.5;
    let ln_pre = ln_gamma_complex(Complex64::new(np + 1.0, 0.0))? - ln_gamma_complex(two_z1)? - ln_gamma_complex(c)?;
    let h = z + 0.5;
    let series = hyp3f2_unit([h, h, z + 1.5], [two_z1, c], policy)?;
    Ok(ln_pre.exp() * series.value)
}

/// `chi(z; nu)`, unit-argument `3F2` with convergence margin `z + 1/2`.
pub fn chi(z: Complex64, nu: f64, policy: SeriesPolicy) -> Result<Complex64> {
    check_nu(nu)?;
    if !(z.re > -0.5) {
        return Err(Error::NonConvergence(format!("chi needs Re z > -1/2, got {z}")));
    }
    let h = z + 0.5;
    let c = z + nu + 0.5;
    let pre = h * gamma_complex(Complex64::new(nu, 0.0))? * gamma_complex(Complex64::new(nu + 1.0, 0.0))?
        / (gamma_complex(h)? * gamma_complex(c)?.powi(2));
    let series = hyp3f2_unit(
        [Complex64::new(nu - 1.0, 0.0), Complex64::new(nu + 1.0, 0.0), h],
        [c, c],
        policy,
    )?;
    Ok(pre * series.value)
}

/// `z = -i sqrt(xi - 1/4)`, principal branch.
pub fn z_of_xi(xi: Complex64) -> Complex64 {
    -Complex64::i() * (xi - 0.25).sqrt()
}

/// Leading term `(z + 1/2) Gamma(2z) chi(z; nu) n^{z - 1/2}` of
/// `det(1 - xi L_n(nu))` for `Im xi > 0`.
pub fn charpoly_asymptotic(xi: Complex64, n: usize, nu: f64) -> Result<Complex64> {
    check_n(n)?;
    if !(xi.im > 0.0) {
        return Err(Error::Domain(format!("leading term needs Im xi > 0, got {xi}")));
    }
    let z = z_of_xi(xi);
    let c = chi(z, nu, SeriesPolicy::default())?;
    let pow = ((z - 0.5) * (n as f64).ln()).exp();
    Ok((z + 0.5) * gamma_complex(2.0 * z)? * c * pow)
}

/// Limit of [`log_derivative_ratio`]: `sign(Im xi) / (2 i sqrt(xi - 1/4))`.
pub fn log_derivative_limit(xi: Complex64) -> Complex64 {
    xi.im.signum() / (2.0 * Complex64::i() * (xi - 0.25).sqrt())
}

/// `F(xi) = Gamma(1 + 2 i xi) / Gamma(1/2 + i xi)^3`.
pub fn f_ratio(xi: Complex64) -> Result<Complex64> {
    let i = Complex64::i();
    Ok(gamma_complex(1.0 + 2.0 * i * xi)? / gamma_complex(0.5 + i * xi)?.powi(3))
}

/// `F(0) = pi^{-3/2}`.
pub fn f_at_zero() -> f64 {
    PI.powf(-1.5)
}
