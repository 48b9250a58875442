//! Eigenvalues of `L_n(nu)`, its tridiagonal inverse and `B_n(nu)`.
//!
//! Counting is done on the factored inverse `L D L^T` with the stationary
//! qd transform, which resolves eigenvalues of the inverse to high relative
//! accuracy across its whole range (`~1/4` up to `~4 n^2`). The largest
//! eigenvalues of `L_n(1)` are additionally located as roots of
//! `q_n(xi) = det(1 - (1/4 + xi^2) L_n(1))`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::charpoly::{nu1_sign_changes, q_n};
use crate::lmatrix::{
    factored_inverse, factored_jacobi_b, hilbert_l_sequence, DenseSym, LSequence, LdlTridiagonal, SymTridiagonal,
};
use crate::specfun::KAPPA;
use crate::{Error, Result};

/// Largest `n` accepted by the O(n)-memory counting routines.
pub const MAX_STURM_N: usize = 20_000_000;
/// Largest matrix accepted by [`dense_jacobi_eigs`].
pub const MAX_DENSE_N: usize = 2048;
/// Number of top eigenvalues of `L_n(1)` polished by `q_n` root finding.
pub const POLISHED_TOP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    /// Bisection on the factored tridiagonal inverse.
    Bisection,
    /// Bisection, with the top eigenvalues replaced by `q_n` roots.
    BisectionQnPolished,
    DenseJacobi,
}

impl SpectrumMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumMethod::Bisection => "bisection",
            SpectrumMethod::BisectionQnPolished => "bisection+qn",
            SpectrumMethod::DenseJacobi => "dense-jacobi",
        }
    }
}

/// Sorted eigenvalues with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub n: usize,
    pub nu: f64,
    pub method: SpectrumMethod,
    pub abs_tol: f64,
}

/// `count = #{mu in sigma(L_n(nu)) : mu > threshold}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountQuery {
    pub n: usize,
    pub nu: f64,
    pub threshold: f64,
    pub count: usize,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > MAX_STURM_N {
        return Err(Error::Domain(format!("n = {n} exceeds the limit {MAX_STURM_N}")));
    }
    Ok(())
}

fn check_tol(abs_tol: f64) -> Result<()> {
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "abs_tol must be positive, got {abs_tol}"
        )));
    }
    Ok(())
}

/// Number of eigenvalues of `T` strictly below `sigma` (pivot recurrence).
pub fn sturm_count(t: &SymTridiagonal, sigma: f64) -> usize {
    let d = t.diag();
    let e = t.offdiag();
    let mut count = 0;
    let mut q = d[0] - sigma;
    for i in 0..d.len() {
        if i > 0 {
            q = (d[i] - sigma) - e[i - 1] * e[i - 1] / q;
        }
        if q == 0.0 {
            let scale = d[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 };
            q = -f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Number of eigenvalues of `L D L^T` strictly below `sigma`, by the
/// stationary qd transform `L D L^T - sigma = L+ D+ L+^T`.
pub fn ldl_count(f: &LdlTridiagonal, sigma: f64) -> usize {
    dstqds_count(f.pivots().iter().copied(), sigma)
}

fn dstqds_count(pivots: impl Iterator<Item = f64>, sigma: f64) -> usize {
    let mut count = 0;
    let mut s = -sigma;
    for d in pivots {
        let mut dp = d + s;
        if dp == 0.0 {
            dp = -f64::EPSILON * (d.abs() + s.abs()).max(f64::MIN_POSITIVE);
        }
        if dp < 0.0 {
            count += 1;
        }
        s = d * (s / dp) - sigma;
    }
    count
}

/// Streaming count on the inverse of `L_n(nu)` without storing pivots.
fn hilbert_inverse_count(n: usize, nu: f64, sigma: f64) -> usize {
    let pivots = (0..n).map(|j| {
        if j + 1 < n {
            (j as f64 + nu) * (j as f64 + 1.0 + nu)
        } else {
            n as f64 - 1.0 + nu
        }
    });
    dstqds_count(pivots, sigma)
}

/// Bisection for the `k`-th smallest eigenvalue (1-based) given a counting
/// function and an enclosing interval.
fn bisect_index(
    count: impl Fn(f64) -> usize,
    k: usize,
    mut lo: f64,
    mut hi: f64,
    done: impl Fn(f64, f64) -> bool,
) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || done(lo, hi) {
            break;
        }
        if count(mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn widen(lo: f64, hi: f64) -> (f64, f64) {
    let pad = 1e-12 * (hi - lo).abs().max(lo.abs()).max(hi.abs()).max(f64::MIN_POSITIVE);
    (lo - pad, hi + pad)
}

/// Eigenvalues `lambda_lo ..= lambda_hi` (1-based, ascending) of `T`,
/// bisected until the bracket is narrower than `abs_tol`.
pub fn eigs_bisection(t: &SymTridiagonal, index_range: (usize, usize), abs_tol: f64) -> Result<Vec<f64>> {
    check_tol(abs_tol)?;
    let (lo_i, hi_i) = index_range;
    if lo_i == 0 || lo_i > hi_i || hi_i > t.n() {
        return Err(Error::InvalidArgument(format!(
            "index range ({lo_i}, {hi_i}) outside 1..={}",
            t.n()
        )));
    }
    let (g_lo, g_hi) = widen(t.gershgorin().0, t.gershgorin().1);
    let mut out: Vec<f64> = (lo_i..=hi_i)
        .into_par_iter()
        .map(|k| bisect_index(|s| sturm_count(t, s), k, g_lo, g_hi, |a, b| b - a < abs_tol))
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Termination rule for bisection on an eigenvalue `lambda` of the inverse:
/// machine-relative width in `lambda`, or `mu = 1/lambda` known to `abs_tol`
/// (absolute for `|mu| >= 1`, relative below).
fn inverse_done(abs_tol: f64) -> impl Fn(f64, f64) -> bool {
    move |lo: f64, hi: f64| {
        let w = hi - lo;
        if w <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            return true;
        }
        if lo > 0.0 || hi < 0.0 {
            let mu_w = w / (lo * hi).abs();
            let mu = 1.0 / lo.abs().min(hi.abs());
            return mu_w <= abs_tol * mu.min(1.0);
        }
        false
    }
}

fn ldl_bounds(f: &LdlTridiagonal) -> (f64, f64) {
    let (lo, hi) = f.to_tridiagonal().gershgorin();
    widen(lo, hi)
}

/// Ascending eigenvalues `lambda_k`, `k in ks` (1-based), of `L D L^T`.
fn ldl_eigs(f: &LdlTridiagonal, ks: &[usize], done: impl Fn(f64, f64) -> bool + Sync) -> Vec<f64> {
    let (lo, hi) = ldl_bounds(f);
    ks.par_iter()
        .map(|&k| bisect_index(|s| ldl_count(f, s), k, lo, hi, &done))
        .collect()
}

/// Full spectrum of `L_n(nu)` as sorted reciprocals of the inverse's
/// eigenvalues. For `nu = 1` the top eigenvalues are polished by `q_n`
/// root finding.
#[allow(non_snake_case)]
pub fn spectrum_L(n: usize, nu: f64, abs_tol: f64) -> Result<Spectrum> {
    check_size(n)?;
    check_tol(abs_tol)?;
    let seq = hilbert_l_sequence(n, nu)?;
    spectrum_of_sequence(&seq, abs_tol)
}

/// Full spectrum of an arbitrary regular L-matrix.
pub fn spectrum_of_sequence(seq: &LSequence, abs_tol: f64) -> Result<Spectrum> {
    let n = seq.len();
    check_size(n)?;
    check_tol(abs_tol)?;
    let f = factored_inverse(seq)?;
    let ks: Vec<usize> = (1..=n).collect();
    let lambdas = ldl_eigs(&f, &ks, inverse_done(abs_tol));
    let mut values: Vec<f64> = lambdas.iter().map(|l| 1.0 / l).collect();
    values.sort_by(f64::total_cmp);
    let mut method = SpectrumMethod::Bisection;
    if seq.nu() == Some(1.0) {
        let top = find_large_eigs(n, n.min(POLISHED_TOP))?;
        for (j, mu) in top.into_iter().enumerate() {
            values[n - 1 - j] = mu;
        }
        method = SpectrumMethod::BisectionQnPolished;
    }
    Ok(Spectrum {
        values,
        n,
        nu: seq.nu().unwrap_or(f64::NAN),
        method,
        abs_tol,
    })
}

/// Selected eigenvalues `mu_j` (1-based, ascending) of `L_n(nu)`, `nu > 0`.
///
/// Small `mu_j` come out with near machine relative accuracy.
pub fn eigs_l_indices(n: usize, nu: f64, js: &[usize], abs_tol: f64) -> Result<Vec<f64>> {
    check_size(n)?;
    check_tol(abs_tol)?;
    if !(nu > 0.0) {
        return Err(Error::Domain(format!("indexed eigenvalues need nu > 0, got {nu}")));
    }
    if let Some(&j) = js.iter().find(|&&j| j == 0 || j > n) {
        return Err(Error::InvalidArgument(format!("index {j} outside 1..={n}")));
    }
    let f = factored_inverse(&hilbert_l_sequence(n, nu)?)?;
    let ks: Vec<usize> = js.iter().map(|&j| n + 1 - j).collect();
    Ok(ldl_eigs(&f, &ks, inverse_done(abs_tol))
        .iter()
        .map(|l| 1.0 / l)
        .collect())
}

/// `#{mu > x}` as the number of eigenvalues of the inverse in `(0, 1/x)`.
pub fn count_above(n: usize, nu: f64, x: f64) -> Result<CountQuery> {
    check_size(n)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("threshold must be positive, got {x}")));
    }
    hilbert_l_sequence(1, nu)?;
    if nu <= 0.0 && nu.fract() == 0.0 {
        return Err(Error::Pole(format!("nu = {nu}")));
    }
    let count = hilbert_inverse_count(n, nu, 1.0 / x) - hilbert_inverse_count(n, nu, 0.0);
    Ok(CountQuery {
        n,
        nu,
        threshold: x,
        count,
    })
}

/// `#{j : xi_{j,n} < xi}` for the positive roots of `q_n`.
pub fn xi_count_below(xi: f64, n: usize) -> usize {
    nu1_sign_changes(0.25 + xi * xi, n)
}

/// First guess for `xi_{j,n}`: `(pi j / log n)(1 - kappa / log n)`.
fn xi_guess(j: usize, n: usize) -> (f64, f64) {
    let l = (n as f64).ln().max(1.0);
    let gap = PI / l;
    let g = j as f64 * gap * (1.0 - KAPPA / l);
    (g.max(0.5 * j as f64 * gap), gap)
}

fn bracket_ok(lo: f64, hi: f64, j: usize, n: usize) -> bool {
    xi_count_below(lo, n) < j && xi_count_below(hi, n) >= j
}

/// The `j`-th positive root of `q_n`, isolated by exact counts and then
/// refined by the Illinois method on `q_n`.
fn xi_root(j: usize, n: usize) -> Result<f64> {
    let (g, gap) = xi_guess(j, n);
    let (mut lo, mut hi) = ((g - 0.5 * gap).max(0.0), g + 0.5 * gap);
    if !bracket_ok(lo, hi, j, n) {
        // every root satisfies 1/4 + xi^2 <= lambda_max(inverse) <= 4 n^2 + 2n
        let xi_max = (4.0 * (n as f64).powi(2) + 4.0 * n as f64 + 2.0).sqrt();
        lo = 0.0;
        hi = xi_max;
        if !bracket_ok(lo, hi, j, n) {
            return Err(Error::BracketFailure(format!("no bracket for xi_{j} at n = {n}")));
        }
    }
    // isolate
    for _ in 0..200 {
        if xi_count_below(lo, n) == j - 1 && xi_count_below(hi, n) == j {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if xi_count_below(mid, n) >= j {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(illinois(|x| q_n(x, n), lo, hi))
}

fn illinois(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 || fa.signum() == fb.signum() {
        return b;
    }
    let mut side = 0i8;
    for _ in 0..300 {
        if b - a <= 2.0 * f64::EPSILON * a.abs().max(b.abs()) {
            break;
        }
        let width = b - a;
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        // fall back to a bisection step when the bracket stalls
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return m;
            }
            if fm.signum() == fb.signum() {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
            side = 0;
        }
    }
    0.5 * (a + b)
}

/// `xi_{1,n} < ... < xi_{j_max,n}`, the positive roots of `q_n`.
pub fn find_xi_roots(n: usize, j_max: usize) -> Result<Vec<f64>> {
    check_size(n)?;
    if j_max == 0 || j_max > POLISHED_TOP || j_max > n {
        return Err(Error::InvalidArgument(format!(
            "j_max must lie in 1..={}, got {j_max}",
            n.min(POLISHED_TOP)
        )));
    }
    (1..=j_max).into_par_iter().map(|j| xi_root(j, n)).collect()
}

/// `mu_{n-j+1,n}(1) = 1/(1/4 + xi_{j,n}^2)` for `j = 1..=j_max`.
pub fn find_large_eigs(n: usize, j_max: usize) -> Result<Vec<f64>> {
    Ok(find_xi_roots(n, j_max)?
        .into_iter()
        .map(|xi| 1.0 / (0.25 + xi * xi))
        .collect())
}

/// Eigenvalues of `B_n(nu)`, ascending.
#[allow(non_snake_case)]
pub fn spectrum_B(n: usize, nu: f64, abs_tol: f64) -> Result<Spectrum> {
    check_size(n)?;
    check_tol(abs_tol)?;
    if !(nu > 0.0) {
        return Err(Error::Domain(format!("B_n spectrum needs nu > 0, got {nu}")));
    }
    let f = factored_jacobi_b(nu, n)?;
    let ks: Vec<usize> = (1..=n).collect();
    let mut values = ldl_eigs(&f, &ks, relative_done(abs_tol));
    values.sort_by(f64::total_cmp);
    Ok(Spectrum {
        values,
        n,
        nu,
        method: SpectrumMethod::Bisection,
        abs_tol,
    })
}

fn relative_done(abs_tol: f64) -> impl Fn(f64, f64) -> bool {
    move |lo: f64, hi: f64| hi - lo <= (4.0 * f64::EPSILON * lo.abs().max(hi.abs())).max(abs_tol)
}

/// Selected eigenvalues `beta_k` (1-based, ascending) of `B_n(nu)`.
pub fn eigs_b_indices(n: usize, nu: f64, ks: &[usize], abs_tol: f64) -> Result<Vec<f64>> {
    check_size(n)?;
    check_tol(abs_tol)?;
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::InvalidArgument(format!("index {k} outside 1..={n}")));
    }
    let f = factored_jacobi_b(nu, n)?;
    Ok(ldl_eigs(&f, ks, relative_done(abs_tol)))
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass is below
/// `1e-13 ||M||_F`. Returns sorted eigenvalues.
pub fn dense_jacobi_eigs(m: &DenseSym) -> Result<Vec<f64>> {
    let n = m.n();
    if n > MAX_DENSE_N {
        return Err(Error::Domain(format!(
            "dense oracle limited to n <= {MAX_DENSE_N}, got {n}"
        )));
    }
    let mut a = m.entries().to_vec();
    let target = 1e-13 * m.frobenius_norm();
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) > target {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::IterationBudget("Jacobi sweeps exceeded 100".into()));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}
