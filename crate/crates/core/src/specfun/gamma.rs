use std::f64::consts::PI;

use num_complex::Complex64;

use super::is_nonpositive_integer;
use crate::{Error, Result};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn check_pole(z: Complex64) -> Result<()> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(format!("gamma has a pole at z = {}", z.re)));
    }
    Ok(())
}

/// `ln Gamma(z)` for `Re z >= 1/2` via the Lanczos sum (principal branch
/// is not guaranteed; only `exp` of the result is meaningful).
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `ln Gamma(z)` for complex `z`, using reflection for `Re z < 1/2`.
///
/// The imaginary part is defined only modulo `2 pi`.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI.ln() - s.ln() - ln_gamma_lanczos(1.0 - z))
    } else {
        Ok(ln_gamma_lanczos(z))
    }
}

/// Complex gamma function.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * ln_gamma_lanczos(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_lanczos(z).exp())
    }
}

pub fn gamma_real(x: f64) -> Result<f64> {
    gamma_complex(Complex64::new(x, 0.0)).map(|g| g.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn special_values() {
        assert!(rel(gamma_complex(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-15);
        assert!(rel(gamma_complex(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        let mut fact = 1.0;
        for k in 1..=20 {
            fact *= k as f64;
            let g = gamma_real(k as f64 + 1.0).unwrap();
            assert!((g - fact).abs() / fact < 1e-13, "Gamma({}) = {g}", k + 1);
        }
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Gamma(i)|^2 = pi / sinh(pi)
        let g = gamma_complex(c(0.0, 1.0)).unwrap();
        let expected = PI / PI.sinh();
        assert!((g.norm_sqr() - expected).abs() / expected < 1e-13);
        assert!((expected - 0.272_029_055_0).abs() < 1e-10);
    }

    #[test]
    fn reflection_identity_on_critical_line() {
        let mut xi = 0.01;
        while xi <= 10.0 {
            let g = gamma_complex(c(0.5, xi)).unwrap();
            let lhs = g.norm_sqr() * (PI * xi).cosh();
            assert!((lhs - PI).abs() < 1e-11 * PI, "xi = {xi}: {lhs}");
            xi += 0.01;
        }
    }

    #[test]
    fn recurrence_holds_off_axis() {
        for &(re, im) in &[(0.3, 2.0), (-3.7, 0.4), (12.5, -9.0), (-20.2, 15.0), (30.0, 30.0)] {
            let z = c(re, im);
            let lhs = gamma_complex(z + 1.0).unwrap();
            let rhs = z * gamma_complex(z).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn duplication_formula() {
        // Gamma(z) Gamma(z + 1/2) = 2^{1 - 2z} sqrt(pi) Gamma(2z)
        for &(re, im) in &[(0.7, 0.3), (2.2, -4.0), (-1.3, 2.5), (8.0, 11.0)] {
            let z = c(re, im);
            let lhs = gamma_complex(z).unwrap() * gamma_complex(z + 0.5).unwrap();
            let rhs = (c(2.0, 0.0)).powc(1.0 - 2.0 * z) * PI.sqrt() * gamma_complex(2.0 * z).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn ln_gamma_agrees_with_gamma() {
        for &(re, im) in &[(0.2, 0.1), (-2.5, 1.0), (40.0, 10.0), (3.0, -25.0)] {
            let z = c(re, im);
            let a = ln_gamma_complex(z).unwrap().exp();
            let b = gamma_complex(z).unwrap();
            assert!(rel(a, b) < 1e-12);
        }
    }

    #[test]
    fn poles_are_rejected() {
        for k in 0..5 {
            assert!(matches!(gamma_complex(c(-(k as f64), 0.0)), Err(Error::Pole(_))));
        }
        assert!(gamma_complex(c(-1.0, 1e-3)).is_ok());
    }
}
