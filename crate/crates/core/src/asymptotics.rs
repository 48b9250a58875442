//! Closed-form asymptotic predictors and helpers that compare them with
//! exact spectra.
//!
//! Notation: `L = log n`, `kappa = gamma + 6 log 2`, `i_j` the zeros of the
//! Airy-type function of [`crate::specfun::airy_a`].

use std::f64::consts::PI;

use crate::charpoly::{f_ratio, q_n};
use crate::specfun::{airy_zero, KAPPA, ZETA3};
use crate::{Complex64, Error, Result};

/// Which asymptotic law a [`Prediction`] instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    CountingLimit,
    SmallEigenvalue,
    LargeEigenvalue,
    NormExpansion,
    RootExpansion,
    MateNevaiTotik,
    Hilbert,
}

impl Source {
    pub fn tag(self) -> &'static str {
        match self {
            Source::CountingLimit => "counting-limit",
            Source::SmallEigenvalue => "small-eigenvalue",
            Source::LargeEigenvalue => "large-eigenvalue",
            Source::NormExpansion => "norm-expansion",
            Source::RootExpansion => "root-expansion",
            Source::MateNevaiTotik => "mate-nevai-totik",
            Source::Hilbert => "hilbert",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub value: f64,
    /// Number of expansion terms kept.
    pub order: usize,
    pub source: Source,
}

/// Coefficients of `xi_{1,n} = pi/L + sum_k x_k / L^{k+1}` and of the Taylor
/// series `F(xi) = sum_l gamma_l xi^l`, `F(xi) = Gamma(1 + 2i xi)/Gamma(1/2 + i xi)^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoeffs {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub gamma0: Complex64,
    pub gamma1: Complex64,
    pub gamma2: Complex64,
    pub gamma3: Complex64,
}

impl ExpansionCoeffs {
    /// Closed forms in terms of `kappa` and `zeta(3)`.
    pub fn closed_form() -> Self {
        let k = KAPPA;
        let p32 = PI.powf(1.5);
        let i = Complex64::i();
        Self {
            x1: -PI * k,
            x2: PI * k * k,
            x3: -PI * k.powi(3) + 13.0 / 3.0 * PI.powi(3) * ZETA3,
            gamma0: Complex64::new(1.0 / p32, 0.0),
            gamma1: i * k / p32,
            gamma2: Complex64::new((5.0 * PI * PI - 6.0 * k * k) / (12.0 * p32), 0.0),
            gamma3: i * (k * (5.0 * PI * PI - 2.0 * k * k) - 52.0 * ZETA3) / (12.0 * p32),
        }
    }

    /// Solves the first three coefficient equations for `x_1, x_2, x_3`
    /// given `gamma_0..gamma_3`:
    ///
    /// ```text
    /// x1 g0 - i pi g1 = 0
    /// x2 g0 - i x1 g1 = 0
    /// (6 x3 - x1^3) g0 + 6 pi^2 x1 g2 + 3i (pi x1^2 g1 - 2 x2 g1 - 2 pi^3 g3) = 0
    /// ```
    ///
    /// Returns the complex solutions; for the true `gamma_l` they are real.
    pub fn eliminate(gammas: [Complex64; 4]) -> [Complex64; 3] {
        let [g0, g1, g2, g3] = gammas;
        let i = Complex64::i();
        let x1 = i * PI * g1 / g0;
        let x2 = i * x1 * g1 / g0;
        let rest = 6.0 * PI * PI * x1 * g2 + 3.0 * i * (PI * x1 * x1 * g1 - 2.0 * x2 * g1 - 2.0 * PI.powi(3) * g3);
        let x3 = (x1.powi(3) * g0 - rest) / (6.0 * g0);
        [x1, x2, x3]
    }
}

fn log_n(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("expansion needs n >= 3, got {n}")));
    }
    Ok((n as f64).ln())
}

fn check_order(order: usize, max: usize) -> Result<()> {
    if order == 0 || order > max {
        return Err(Error::InvalidArgument(format!(
            "order must lie in 1..={max}, got {order}"
        )));
    }
    Ok(())
}

/// Limiting density `(1/2pi) sqrt((1-x)/x)` of `#{mu > 4x} / log n`.
pub fn counting_density(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("counting density needs 0 < x < 1, got {x}")));
    }
    Ok(((1.0 - x) / x).sqrt() / (2.0 * PI))
}

/// `(log n / pi) sqrt(1/x_abs - 1/4)`, the predicted `#{mu > x_abs}`.
pub fn expected_count(x_abs: f64, n: usize) -> Result<f64> {
    if !(x_abs > 0.0 && x_abs < 4.0) {
        return Err(Error::Domain(format!("threshold must lie in (0, 4), got {x_abs}")));
    }
    Ok((n as f64).ln() / PI * (1.0 / x_abs - 0.25).sqrt())
}

/// `(1/4n^2)(1 + i_j 3^{-1/3} n^{-2/3})`.
pub fn small_eig_prediction(j: usize, n: usize) -> Result<Prediction> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let nf = n as f64;
    let c = airy_zero(j)? / 3f64.cbrt();
    Ok(Prediction {
        value: (1.0 + c * nf.powf(-2.0 / 3.0)) / (4.0 * nf * nf),
        order: 2,
        source: Source::SmallEigenvalue,
    })
}

/// `(mu_{j,n} 4 n^2 - 1) n^{2/3}`, which tends to `i_j 3^{-1/3}`.
pub fn small_eig_residual(mu: f64, n: usize) -> f64 {
    let nf = n as f64;
    (mu * 4.0 * nf * nf - 1.0) * nf.powf(2.0 / 3.0)
}

/// Coefficients `c_2..c_5` of `||L_n|| = 4 + sum_k c_k / L^k`.
pub fn norm_coefficients() -> [f64; 4] {
    let k = KAPPA;
    let p2 = PI * PI;
    [
        -16.0 * p2,
        32.0 * p2 * k,
        -16.0 * p2 * (3.0 * k * k - 4.0 * p2),
        32.0 * p2 * (6.0 * k * (k * k - 4.0 * p2) - 13.0 * p2 * ZETA3) / 3.0,
    ]
}

/// `mu_{n-j+1,n}(1) ~ 4 - 16 pi^2 j^2 / L^2 + 32 pi^2 j^2 kappa / L^3 [+ ...]`.
///
/// Order 3 adds the `L^{-4}` term of the norm expansion and exists only for `j = 1`.
pub fn large_eig_prediction(j: usize, n: usize, order: usize) -> Result<Prediction> {
    check_order(order, 3)?;
    if j == 0 {
        return Err(Error::InvalidArgument("j starts at 1".into()));
    }
    if order == 3 && j != 1 {
        return Err(Error::InvalidArgument(
            "the third-order term is known only for j = 1".into(),
        ));
    }
    let l = log_n(n)?;
    let c = norm_coefficients();
    let j2 = (j * j) as f64;
    let mut value = 4.0 + c[0] * j2 / l.powi(2);
    if order >= 2 {
        value += c[1] * j2 / l.powi(3);
    }
    if order >= 3 {
        value += c[2] / l.powi(4);
    }
    Ok(Prediction {
        value,
        order,
        source: Source::LargeEigenvalue,
    })
}

/// `||L_n(1)||` truncated after `order` correction terms (1..=4).
pub fn norm_expansion(n: usize, order: usize) -> Result<Prediction> {
    check_order(order, 4)?;
    let l = log_n(n)?;
    let value = 4.0
        + norm_coefficients()
            .iter()
            .take(order)
            .enumerate()
            .map(|(k, c)| c / l.powi(k as i32 + 2))
            .sum::<f64>();
    Ok(Prediction {
        value,
        order,
        source: Source::NormExpansion,
    })
}

/// `xi_{1,n} ~ pi/L + x_1/L^2 + x_2/L^3 + x_3/L^4`, truncated after `order` terms.
pub fn xi_expansion(n: usize, order: usize) -> Result<f64> {
    check_order(order, 4)?;
    let l = log_n(n)?;
    Ok(xi_series(l, order))
}

fn xi_series(l: f64, order: usize) -> f64 {
    let c = ExpansionCoeffs::closed_form();
    [PI, c.x1, c.x2, c.x3]
        .iter()
        .take(order)
        .enumerate()
        .map(|(k, x)| x / l.powi(k as i32 + 1))
        .sum()
}

/// `(1/(xi sqrt n)) [Im F(xi) cos(xi L) + Re F(xi) sin(xi L)]`.
pub fn qn_leading(xi: f64, n: usize) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::Domain(format!("leading term needs xi > 0, got {xi}")));
    }
    let nf = n as f64;
    let f = f_ratio(Complex64::new(xi, 0.0))?;
    let arg = xi * nf.ln();
    Ok((f.im * arg.cos() + f.re * arg.sin()) / (xi * nf.sqrt()))
}

/// `sup_xi |q_n(xi) - qn_leading(xi, n)| n xi` over `xis`.
pub fn qn_remainder_sup(n: usize, xis: &[f64]) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for &xi in xis {
        let r = (q_n(xi, n) - qn_leading(xi, n)?).abs() * n as f64 * xi;
        sup = sup.max(r);
    }
    Ok(sup)
}

/// `q_n(0) pi^{3/2} sqrt(n) / log n`, which tends to 1.
pub fn qn_zero_value_check(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    Ok(q_n(0.0, n) * PI.powf(1.5) * nf.sqrt() / nf.ln())
}

/// `beta_{n-j+1,n} ~ 4 n^2 (1 - i_j 3^{-1/3} n^{-2/3})`, independent of `nu`.
pub fn mnt_prediction(j: usize, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let nf = n as f64;
    let c = airy_zero(j)? / 3f64.cbrt();
    Ok(4.0 * nf * nf * (1.0 - c * nf.powf(-2.0 / 3.0)))
}

/// Reference formulas for the Hankel matrix `H_n(nu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HilbertReference {
    /// `(2/pi) log((1 + sqrt(1 - x^2))/x)`, the limit of `#{lambda > pi x}/log n`.
    CountingDensity { x: f64 },
    /// `2^{15/4} pi^{3/2} (1+sqrt 2)^{2-2nu} sqrt(n) (1+sqrt 2)^{-4n}`.
    SmallestEig { n: usize, nu: f64 },
    /// `pi - pi^5/(2 log^2 n)` (for `nu = 2`).
    LargestEig { n: usize },
}

pub fn hilbert_reference(kind: HilbertReference) -> Result<f64> {
    match kind {
        HilbertReference::CountingDensity { x } => {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::Domain(format!("needs 0 < x < 1, got {x}")));
            }
            Ok(2.0 / PI * ((1.0 + (1.0 - x * x).sqrt()) / x).ln())
        }
        HilbertReference::SmallestEig { n, nu } => {
            if !(nu > 0.0) || n == 0 {
                return Err(Error::Domain(format!(
                    "needs nu > 0 and n >= 1, got nu = {nu}, n = {n}"
                )));
            }
            let s = 1.0 + 2f64.sqrt();
            let ln = 3.75 * 2f64.ln() + 1.5 * PI.ln() + (2.0 - 2.0 * nu) * s.ln() + 0.5 * (n as f64).ln()
                - 4.0 * n as f64 * s.ln();
            Ok(ln.exp())
        }
        HilbertReference::LargestEig { n } => {
            let l = log_n(n)?;
            Ok(PI - PI.powi(5) / (2.0 * l * l))
        }
    }
}

/// `true` when the magnitudes strictly decrease along the slice.
pub fn strictly_decreasing_magnitudes(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1].abs() < w[0].abs())
}

/// `max / min` of the magnitudes.
pub fn spread_factor(values: &[f64]) -> f64 {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    max / min
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_values() {
        assert!((counting_density(0.5).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((counting_density(0.2).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!(counting_density(1.0 - 1e-12).unwrap() < 1e-6);
        assert!(counting_density(0.0).is_err());
    }

    #[test]
    fn expected_count_values() {
        let n = (2.0 * PI).exp().round() as usize;
        let l = (n as f64).ln();
        let v = expected_count(2.0, n).unwrap();
        assert!((v - l / PI * 0.5).abs() < 1e-14);
        assert!(expected_count(4.0 - 1e-12, 100).unwrap() < 1e-5);
        for x in [0.05, 0.3, 0.77] {
            let a = expected_count(4.0 * x, 1000).unwrap() / 1000f64.ln();
            assert!((a - counting_density(x).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn small_eig_prediction_values() {
        let p = small_eig_prediction(1, 1000).unwrap();
        assert!((p.value - 2.5e-7 * (1.0 + 2.338_107_410_459_767e-2)).abs() < 1e-18);
        assert!(small_eig_prediction(2, 1000).unwrap().value > p.value);
        let big = small_eig_prediction(1, 1_000_000_000).unwrap().value * 4e18;
        assert!((big - 1.0).abs() < 1e-5);
        assert!(small_eig_prediction(21, 10).is_err());
    }

    #[test]
    fn large_eig_prediction_values() {
        let p1 = large_eig_prediction(1, 1_000_000, 1).unwrap().value;
        assert!((p1 - 3.172_72).abs() < 1e-4);
        let p2 = large_eig_prediction(1, 1_000_000, 2).unwrap().value;
        let l = 1e6f64.ln();
        assert!((p2 - p1 - 32.0 * PI * PI * KAPPA / l.powi(3)).abs() < 1e-14);
        assert!((p2 - p1 - 0.5672).abs() < 1e-3);
        assert!(large_eig_prediction(2, 1_000_000, 1).unwrap().value < p1);
        assert!(large_eig_prediction(2, 1000, 3).is_err());
        assert!(large_eig_prediction(1, 2, 1).is_err());
    }

    #[test]
    fn norm_coefficient_values() {
        let c = norm_coefficients();
        assert!((c[1] - 1495.80).abs() < 0.02);
        assert!((c[2] / (-16.0 * PI * PI) - 27.80).abs() < 0.02);
        let n = (2.0 * PI).exp();
        let l = n.ln();
        // order 1 at n = e^{2 pi} is 4 - 16 pi^2 / (4 pi^2) = 0; use the exact log
        assert!((4.0 + c[0] / (l * l)).abs() < 1e-12);
    }

    #[test]
    fn xi_expansion_values() {
        let n = PI.exp().round() as usize; // 23
        let l = (n as f64).ln();
        assert!((xi_expansion(n, 1).unwrap() - PI / l).abs() < 1e-15);
        let c = ExpansionCoeffs::closed_form();
        assert!((c.x1 + 14.878_9).abs() < 1e-3);
        assert!((c.x2 - 70.467_9).abs() < 1e-3);
        assert!((c.x3 + 172.234).abs() < 1e-2);
    }

    #[test]
    fn elimination_reproduces_closed_form() {
        let c = ExpansionCoeffs::closed_form();
        let x = ExpansionCoeffs::eliminate([c.gamma0, c.gamma1, c.gamma2, c.gamma3]);
        for (xi, want) in x.iter().zip([c.x1, c.x2, c.x3]) {
            assert!(xi.im.abs() < 1e-12 * want.abs());
            assert!((xi.re - want).abs() < 1e-12 * want.abs(), "{xi} vs {want}");
        }
    }

    #[test]
    fn taylor_coefficients_of_f() {
        // independent oracle: Cauchy integral on |xi| = r with the trapezoid rule
        let c = ExpansionCoeffs::closed_form();
        let m = 64;
        let r = 0.2;
        let mut g = [Complex64::new(0.0, 0.0); 4];
        for k in 0..m {
            let t = 2.0 * PI * k as f64 / m as f64;
            let w = Complex64::from_polar(r, t);
            let f = f_ratio(w).unwrap();
            for (l, gl) in g.iter_mut().enumerate() {
                *gl += f / w.powi(l as i32) / m as f64;
            }
        }
        for (a, b) in g.iter().zip([c.gamma0, c.gamma1, c.gamma2, c.gamma3]) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
        assert!((c.gamma0.re - 0.179_587_1).abs() < 1e-7);
        assert!((c.gamma1.im - 0.850_542_3).abs() < 1e-7);
        assert!((c.gamma2.re + 1.275_603_8).abs() < 1e-7);
        assert!((c.gamma3.im + 0.617_438_8).abs() < 1e-7);
    }

    #[test]
    fn root_expansion_reproduces_norm_expansion() {
        // 1/(1/4 + xi^2) with xi truncated at order 4 is analytic in u = 1/L near 0;
        // interpolate at 30 points of |u| = 0.02 and read off the u^k coefficients
        let m = 30;
        let r = 0.02;
        let mut coef = [Complex64::new(0.0, 0.0); 6];
        for k in 0..m {
            let u = Complex64::from_polar(r, 2.0 * PI * k as f64 / m as f64);
            let c = ExpansionCoeffs::closed_form();
            let xi = PI * u + c.x1 * u * u + c.x2 * u.powi(3) + c.x3 * u.powi(4);
            let y = 1.0 / (0.25 + xi * xi);
            for (d, cd) in coef.iter_mut().enumerate() {
                *cd += y / u.powi(d as i32) / m as f64;
            }
        }
        let want = norm_coefficients();
        assert!((coef[0].re - 4.0).abs() < 1e-12);
        assert!(coef[1].norm() < 1e-9);
        for k in 0..4 {
            assert!(
                (coef[k + 2] - want[k]).norm() <= 1e-6 * want[0].abs(),
                "k {k}: {} vs {}",
                coef[k + 2],
                want[k]
            );
        }
    }

    #[test]
    fn qn_leading_zero_structure() {
        // for small xi the sine term dominates: zeros near xi log n = pi j
        let n = 1_000_000;
        let l = (n as f64).ln();
        let a = qn_leading(0.9 * PI / l, n).unwrap();
        let b = qn_leading(1.1 * PI / l, n).unwrap();
        assert!(a * b < 0.0 || qn_leading(0.7 * PI / l, n).unwrap() * b < 0.0);
        assert!(qn_leading(0.0, n).is_err());
    }

    #[test]
    fn qn_zero_trend() {
        let vals: Vec<f64> = [1_000usize, 10_000, 100_000, 1_000_000]
            .iter()
            .map(|&n| qn_zero_value_check(n).unwrap())
            .collect();
        let devs: Vec<f64> = vals.iter().map(|v| v - 1.0).collect();
        assert!(strictly_decreasing_magnitudes(&devs), "{vals:?}");
        assert!(q_n(0.0, 2) > 0.0);
    }

    #[test]
    fn mnt_values() {
        let a = mnt_prediction(1, 1000).unwrap();
        assert!((a - 4e6 * (1.0 - 2.338_107_410_459_767e-2)).abs() < 1e-6);
        assert!(mnt_prediction(2, 1000).unwrap() < a);
    }

    #[test]
    fn hilbert_formulas() {
        assert!(hilbert_reference(HilbertReference::CountingDensity { x: 1.0 - 1e-12 }).unwrap() < 1e-5);
        let n = (PI * PI).exp().round() as usize;
        let v = hilbert_reference(HilbertReference::LargestEig { n }).unwrap();
        let l = (n as f64).ln();
        assert!((v - (PI - PI.powi(5) / (2.0 * l * l))).abs() < 1e-14);
        assert!((PI - PI.powi(5) / (2.0 * PI.powi(4)) - PI / 2.0).abs() < 1e-15);
        let s = hilbert_reference(HilbertReference::SmallestEig { n: 10, nu: 1.0 }).unwrap();
        let want = 2f64.powf(3.75) * PI.powf(1.5) * 10f64.sqrt() / (1.0 + 2f64.sqrt()).powi(40);
        assert!((s - want).abs() < 1e-12 * want);
        assert!(hilbert_reference(HilbertReference::CountingDensity { x: 0.0 }).is_err());
    }

    #[test]
    fn trend_helpers() {
        assert!(strictly_decreasing_magnitudes(&[3.0, -2.0, 1.0]));
        assert!(!strictly_decreasing_magnitudes(&[1.0, 1.0]));
        assert_eq!(spread_factor(&[2.0, -4.0, 1.0]), 4.0);
    }
}
