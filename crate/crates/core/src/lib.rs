//! Spectral computations for generalized Hilbert L-matrices
//! `L_n(nu) = (1 / (max(i, j) + nu))_{i,j=0}^{n-1}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] – gamma, Pochhammer symbols, hypergeometric sums and the
//!   Airy-type function whose zeros govern the smallest eigenvalues.
//! * [`lmatrix`] – exact algebra of L-matrices: determinant, the
//!   tridiagonal inverse, the Jacobi matrix `B_n` and its factored form.
//! * [`charpoly`] – `det(1 - z L_n)` by three independent routes, plus the
//!   oscillatory polynomial `q_n` and the large-`n` leading term.
//! * [`eigensolve`] – Sturm counting, bisection, `q_n` root finding and a
//!   dense Jacobi oracle.
//! * [`asymptotics`] – closed-form predictors and the residual analysers
//!   that compare them against exact spectra.

pub mod asymptotics;
pub mod charpoly;
pub mod eigensolve;
mod error;
pub mod lmatrix;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
