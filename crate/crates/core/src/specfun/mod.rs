//! Special-function kernel.
//!
//! Everything here is a pure function of its arguments; there is no global
//! state and no caching, so all routines are safe to call from any thread.

mod airy;
mod gamma;
mod hyper;

pub use airy::{airy_a, airy_a_with_derivative, airy_zero, airy_zeros, AIRY_DOMAIN};
pub use gamma::{gamma_complex, gamma_real, ln_gamma_complex};
pub use hyper::{hyp3f2_terminating, hyp3f2_terminating_terms, hyp3f2_unit, pochhammer, SeriesPolicy, SeriesSum};

use std::f64::consts::LN_2;

/// Mathematical constants shared by the asymptotic formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Euler–Mascheroni constant.
    pub euler_gamma: f64,
    /// Apéry's constant `zeta(3)`.
    pub zeta3: f64,
    /// `euler_gamma + 6 ln 2`, the constant in every higher-order
    /// coefficient of the large-eigenvalue expansions.
    pub kappa: f64,
}

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;
pub const ZETA3: f64 = 1.202_056_903_159_594_3;
pub const KAPPA: f64 = EULER_GAMMA + 6.0 * LN_2;

pub const CONSTANTS: Constants = Constants {
    euler_gamma: EULER_GAMMA,
    zeta3: ZETA3,
    kappa: KAPPA,
};

impl Default for Constants {
    fn default() -> Self {
        CONSTANTS
    }
}

/// True when `x` is one of `0, -1, -2, ...`.
pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}
