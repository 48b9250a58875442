//! Pochhammer symbols and `3F2` hypergeometric sums at unit argument.

use num_complex::Complex64;

use super::is_nonpositive_integer;
use crate::{Error, Result};

/// Rising factorial `(alpha)_n = alpha (alpha + 1) ... (alpha + n - 1)`.
pub fn pochhammer(alpha: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (alpha + k as f64))
}

/// Truncation policy for non-terminating series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            max_terms: 100_000,
        }
    }
}

impl SeriesPolicy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        let policy = Self { rel_tol, max_terms };
        policy.validate()?;
        Ok(policy)
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms == 0 {
            return Err(Error::InvalidArgument(format!(
                "series policy needs rel_tol > 0 and max_terms >= 1 (got {}, {})",
                self.rel_tol, self.max_terms
            )));
        }
        Ok(())
    }
}

/// Result of a unit-argument series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Complex64,
    /// Number of terms summed explicitly.
    pub terms: usize,
    /// Analytic tail that was added to the explicit partial sum.
    pub tail: Complex64,
}

fn as_nonpositive_integer(z: Complex64) -> Option<usize> {
    (z.im == 0.0 && is_nonpositive_integer(z.re)).then(|| (-z.re) as usize)
}

fn check_denominators(b: &[Complex64], upto: usize) -> Result<()> {
    for &bi in b {
        if let Some(m) = as_nonpositive_integer(bi) {
            if m < upto {
                return Err(Error::Pole(format!(
                    "denominator parameter {} meets a pole before the series terminates",
                    bi.re
                )));
            }
        }
    }
    Ok(())
}

/// The `n + 1` terms of `3F2(-n, a2, a3; b1, b2; 1)`, generated by the
/// term-ratio update (no factorials are formed).
pub fn hyp3f2_terminating_terms(
    n: usize,
    a2: Complex64,
    a3: Complex64,
    b1: Complex64,
    b2: Complex64,
) -> Result<Vec<Complex64>> {
    check_denominators(&[b1, b2], n)?;
    let mut terms = Vec::with_capacity(n + 1);
    let mut t = Complex64::new(1.0, 0.0);
    terms.push(t);
    for k in 0..n {
        let kf = k as f64;
        t *= (kf - n as f64) * (a2 + kf) * (a3 + kf) / ((b1 + kf) * (b2 + kf) * (kf + 1.0));
        terms.push(t);
    }
    Ok(terms)
}

/// Terminating `3F2(-n, a2, a3; b1, b2; 1)`.
pub fn hyp3f2_terminating(n: usize, a2: Complex64, a3: Complex64, b1: Complex64, b2: Complex64) -> Result<Complex64> {
    Ok(hyp3f2_terminating_terms(n, a2, a3, b1, b2)?.iter().sum())
}

/// `3F2(a1, a2, a3; b1, b2; 1)`.
///
/// Terminating series are summed exactly. Otherwise the series converges
/// only algebraically (terms decay like `k^{-1-s}` with
/// `s = b1 + b2 - a1 - a2 - a3`), so the explicit partial sum is cut at an
/// index `K` where the terms admit an asymptotic expansion in `1/k`, and
/// the tail is summed in closed form through Hurwitz zeta values. Rapidly
/// convergent series stop earlier on the term-ratio criterion.
pub fn hyp3f2_unit(a: [Complex64; 3], b: [Complex64; 2], policy: SeriesPolicy) -> Result<SeriesSum> {
    policy.validate()?;
    if let Some(m) = a.iter().filter_map(|&ai| as_nonpositive_integer(ai)).min() {
        check_denominators(&b, m)?;
        let mut t = Complex64::new(1.0, 0.0);
        let mut sum = t;
        for k in 0..m {
            t *= term_ratio(&a, &b, k);
            sum += t;
        }
        return Ok(SeriesSum {
            value: sum,
            terms: m + 1,
            tail: Complex64::new(0.0, 0.0),
        });
    }
    check_denominators(&b, usize::MAX)?;
    let s = b[0] + b[1] - a[0] - a[1] - a[2];
    if !(s.re > 0.0) {
        return Err(Error::NonConvergence(format!(
            "3F2 at unit argument needs Re(b1 + b2 - a1 - a2 - a3) > 0, got {}",
            s.re
        )));
    }

    let scale = a.iter().chain(b.iter()).map(|p| p.norm()).fold(1.0f64, f64::max);
    let mut k_asym = (4.0 * scale + 40.0).ceil() as usize;

    let mut t = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut k = 0usize;
    loop {
        if k >= policy.max_terms {
            return Err(Error::BudgetExceeded {
                max_terms: policy.max_terms,
            });
        }
        if k == k_asym {
            match asymptotic_tail(&a, &b, s, k, policy.rel_tol) {
                Some(ratio) => {
                    let tail = t * ratio;
                    return Ok(SeriesSum {
                        value: sum + tail,
                        terms: k,
                        tail,
                    });
                }
                None => k_asym *= 2,
            }
        }
        sum += t;
        let r = term_ratio(&a, &b, k);
        let next = t * r;
        k += 1;
        let rho = r.norm();
        if rho < 0.99 && next.norm() / (1.0 - rho) < 0.1 * policy.rel_tol * sum.norm() {
            sum += next;
            return Ok(SeriesSum {
                value: sum,
                terms: k + 1,
                tail: Complex64::new(0.0, 0.0),
            });
        }
        t = next;
    }
}

fn term_ratio(a: &[Complex64; 3], b: &[Complex64], k: usize) -> Complex64 {
    let kf = k as f64;
    (a[0] + kf) * (a[1] + kf) * (a[2] + kf) / ((b[0] + kf) * (b[1] + kf) * (kf + 1.0))
}

// Bernoulli numbers B_0..B_24 (B_1 = -1/2 convention).
const BERNOULLI: [f64; 25] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
];

/// Number of inverse powers kept in the expansion of the term sequence.
const EXPANSION_ORDER: usize = 20;
/// Euler–Maclaurin correction terms in the Hurwitz zeta evaluation.
const EM_TERMS: usize = 10;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn bernoulli_poly(m: usize, x: Complex64) -> Complex64 {
    // Horner in x over sum_k C(m, k) B_k x^{m-k}
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate().take(m + 1) {
        acc = acc * x + binomial(m, k) * b;
    }
    acc
}

/// Returns `sum_{k >= K} t_k / t_K` or `None` when the `1/K` expansion is
/// not yet accurate enough at this `K`.
fn asymptotic_tail(a: &[Complex64; 3], b: &[Complex64; 2], s: Complex64, k0: usize, rel_tol: f64) -> Option<Complex64> {
    // ln t_k = const - (1 + s) ln k + sum_m d_m k^{-m}
    let one = Complex64::new(1.0, 0.0);
    let mut d = [Complex64::new(0.0, 0.0); EXPANSION_ORDER + 1];
    for (m, dm) in d.iter_mut().enumerate().skip(1) {
        let mut acc = Complex64::new(0.0, 0.0);
        for &ai in a {
            acc += bernoulli_poly(m + 1, ai);
        }
        for &bi in b.iter().chain(std::iter::once(&one)) {
            acc -= bernoulli_poly(m + 1, bi);
        }
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        *dm = acc * sign / (m * (m + 1)) as f64;
    }
    // exp of the power series: e_m = (1/m) sum_j j d_j e_{m-j}
    let mut e = [Complex64::new(0.0, 0.0); EXPANSION_ORDER + 1];
    e[0] = one;
    for m in 1..=EXPANSION_ORDER {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=m {
            acc += d[j] * e[m - j] * j as f64;
        }
        e[m] = acc / m as f64;
    }

    let kf = k0 as f64;
    let p = s + 1.0;
    let mut numer = Complex64::new(0.0, 0.0);
    let mut denom = Complex64::new(0.0, 0.0);
    let mut last = 0.0;
    for (m, &em) in e.iter().enumerate() {
        let q = p + m as f64;
        let z = hurwitz_zeta(q, k0);
        numer += em * z;
        denom += em * (-q * kf.ln()).exp();
        last = (em * z).norm();
    }
    if !(last <= rel_tol * 1e-2 * numer.norm()) {
        return None;
    }
    Some(numer / denom)
}

/// `sum_{k >= k0} k^{-q}` for complex `q` with `Re q > 1`.
fn hurwitz_zeta(q: Complex64, k0: usize) -> Complex64 {
    let n_min = (q.norm() + 2.0 * EM_TERMS as f64 + 10.0).ceil() as usize;
    let n = k0.max(n_min);
    let pow = |x: f64, e: Complex64| (-e * x.ln()).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    for k in k0..n {
        sum += pow(k as f64, q);
    }
    let nf = n as f64;
    sum += pow(nf, q - 1.0) / (q - 1.0) + 0.5 * pow(nf, q);
    // B_{2j}/(2j)! (q)_{2j-1} N^{-q-2j+1}
    let mut rising = q;
    let mut fact = 2.0;
    let mut npow = pow(nf, q + 1.0);
    for j in 1..=EM_TERMS {
        sum += BERNOULLI[2 * j] / fact * rising * npow;
        rising *= (q + (2 * j - 1) as f64) * (q + (2 * j) as f64);
        fact *= ((2 * j + 1) * (2 * j + 2)) as f64;
        npow /= nf * nf;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::super::gamma_complex;
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn g(z: Complex64) -> Complex64 {
        gamma_complex(z).unwrap()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(c(3.7, -1.0), 0), c(1.0, 0.0));
        assert_eq!(pochhammer(c(1.0, 0.0), 5), c(120.0, 0.0));
        assert!((pochhammer(c(0.5, 0.0), 3) - c(15.0 / 8.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn terminating_small_cases() {
        let z = c(0.7, 0.2);
        let root = (z - 0.25).sqrt();
        let xp = 0.5 + Complex64::i() * root;
        let xm = 0.5 - Complex64::i() * root;
        let one = c(1.0, 0.0);
        assert_eq!(hyp3f2_terminating(0, xp, xm, one, one).unwrap(), one);
        let v1 = hyp3f2_terminating(1, xp, xm, one, one).unwrap();
        assert!((v1 - (1.0 - z)).norm() < 1e-15);
        let v2 = hyp3f2_terminating(2, xp, xm, one, one).unwrap();
        let expected = 1.0 - 1.5 * z + z * z / 4.0;
        assert!((v2 - expected).norm() < 1e-14);
    }

    #[test]
    fn terminating_pole() {
        let one = c(1.0, 0.0);
        let err = hyp3f2_terminating(3, one, one, c(-1.0, 0.0), one).unwrap_err();
        assert!(matches!(err, Error::Pole(_)));
        // (-1)_k is only reached for k >= 2, so n = 1 is fine
        assert!(hyp3f2_terminating(1, one, one, c(-1.0, 0.0), one).is_ok());
    }

    #[test]
    fn zero_numerator_parameter_gives_one() {
        let v = hyp3f2_unit(
            [c(0.0, 0.0), c(2.0, 1.0), c(0.3, 0.0)],
            [c(0.5, 0.0), c(0.1, 0.0)],
            SeriesPolicy::default(),
        )
        .unwrap();
        assert_eq!(v.value, c(1.0, 0.0));
        assert_eq!(v.terms, 1);
    }

    // When a3 = b2 the series collapses to Gauss' 2F1 at unit argument.
    #[test]
    fn matches_gauss_summation() {
        let cases = [
            (c(0.3, 0.0), c(0.4, 0.0), c(1.5, 0.0)),
            (c(0.5, 0.6), c(0.5, 0.6), c(1.9, 1.3)),
            (c(-0.5, 0.0), c(1.5, 0.0), c(1.1, 0.0)),
            (c(1.2, -0.7), c(0.1, 0.2), c(2.4, -0.4)),
        ];
        for (aa, bb, cc) in cases {
            let extra = c(0.77, 0.1);
            let v = hyp3f2_unit([aa, bb, extra], [cc, extra], SeriesPolicy::default()).unwrap();
            let exact = g(cc) * g(cc - aa - bb) / (g(cc - aa) * g(cc - bb));
            let err = (v.value - exact).norm() / exact.norm();
            assert!(err < 1e-12, "a={aa} b={bb} c={cc}: {} vs {exact} ({err:e})", v.value);
        }
    }

    // Dixon: 3F2(a, b, c; 1+a-b, 1+a-c; 1)
    #[test]
    fn matches_dixon_summation() {
        let cases = [
            (c(0.4, 0.0), c(0.3, 0.0), c(0.2, 0.0)),
            (c(1.1, 0.3), c(0.2, -0.1), c(0.35, 0.2)),
        ];
        for (aa, bb, cc) in cases {
            let v = hyp3f2_unit([aa, bb, cc], [1.0 + aa - bb, 1.0 + aa - cc], SeriesPolicy::default()).unwrap();
            let exact = g(1.0 + aa / 2.0) * g(1.0 + aa - bb) * g(1.0 + aa - cc) * g(1.0 + aa / 2.0 - bb - cc)
                / (g(1.0 + aa) * g(1.0 + aa / 2.0 - bb) * g(1.0 + aa / 2.0 - cc) * g(1.0 + aa - bb - cc));
            let err = (v.value - exact).norm() / exact.norm();
            assert!(err < 1e-12, "{} vs {exact} ({err:e})", v.value);
        }
    }

    #[test]
    fn divergent_and_budget_errors() {
        let one = c(1.0, 0.0);
        let e = hyp3f2_unit([one, one, one], [one, c(2.0, 0.0)], SeriesPolicy::default()).unwrap_err();
        assert!(matches!(e, Error::NonConvergence(_)));
        let tight = SeriesPolicy::new(1e-13, 5).unwrap();
        let e = hyp3f2_unit([c(0.5, 0.0), one, one], [c(2.0, 0.0), c(1.0, 0.0)], tight).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded { max_terms: 5 }));
        assert!(SeriesPolicy::new(0.0, 10).is_err());
        assert!(SeriesPolicy::new(1e-3, 0).is_err());
    }

    #[test]
    fn hurwitz_zeta_matches_riemann_zeta() {
        // zeta(2) = pi^2/6, zeta(3) = Apery
        let z2 = hurwitz_zeta(c(2.0, 0.0), 1);
        assert!((z2.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        let z3 = hurwitz_zeta(c(3.0, 0.0), 1);
        assert!((z3.re - super::super::ZETA3).abs() < 1e-14);
    }
}
