//! L-matrices `(A)_{ij} = a_{max(i,j)}` and their tridiagonal inverses.
//!
//! For a regular sequence (`a_{j-1} != a_j`, `a_{n-1} != 0`) the inverse is
//! tridiagonal with off-diagonal `-b_j`, `b_j = 1/(a_j - a_{j+1})`. It also
//! factors as `L D L^T` with `L` unit lower bidiagonal (subdiagonal `-1`) and
//! `D = (b_0, ..., b_{n-2}, 1/a_{n-1})`. The factored form is what the
//! eigensolvers use: it determines the eigenvalues to high relative accuracy.

use crate::{Error, Result};

/// Threshold below which consecutive sequence entries are treated as equal.
pub const REGULARITY_FLOOR: f64 = 1e-300;

/// Defining sequence `a_0, ..., a_{n-1}` of an L-matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LSequence {
    a: Vec<f64>,
    nu: Option<f64>,
}

impl LSequence {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("L-sequence must be nonempty".into()));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("L-sequence entries must be finite".into()));
        }
        Ok(Self { a, nu: None })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// `Some(nu)` when the sequence is `a_j = 1/(j + nu)`.
    pub fn nu(&self) -> Option<f64> {
        self.nu
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `a_0 > a_1 > ... > a_{n-1} > 0`, the positive definite case.
    pub fn is_strictly_decreasing_positive(&self) -> bool {
        self.a.windows(2).all(|w| w[0] > w[1]) && *self.a.last().unwrap() > 0.0
    }

    /// `b_j = 1/(a_j - a_{j+1})`, exact for the Hilbert sequence.
    fn b(&self, j: usize) -> f64 {
        match self.nu {
            Some(nu) => hilbert_b(nu, j),
            None => 1.0 / (self.a[j] - self.a[j + 1]),
        }
    }

    fn check_regular(&self) -> Result<()> {
        for (j, w) in self.a.windows(2).enumerate() {
            if (w[0] - w[1]).abs() < REGULARITY_FLOOR {
                return Err(Error::Singular(format!("a_{} = a_{} = {}", j, j + 1, w[0])));
            }
        }
        let last = *self.a.last().unwrap();
        if last.abs() < REGULARITY_FLOOR {
            return Err(Error::Singular(format!("a_{} = {last}", self.a.len() - 1)));
        }
        Ok(())
    }
}

fn hilbert_b(nu: f64, j: usize) -> f64 {
    (j as f64 + nu) * (j as f64 + 1.0 + nu)
}

fn check_nu(n: usize, nu: f64) -> Result<()> {
    if !nu.is_finite() {
        return Err(Error::InvalidArgument(format!("nu must be finite, got {nu}")));
    }
    if nu <= 0.0 && nu.fract() == 0.0 && -nu < n as f64 {
        return Err(Error::Pole(format!("j + nu = 0 at j = {}", (-nu) as usize)));
    }
    Ok(())
}

/// `a_j = 1/(j + nu)` for `j < n`.
pub fn hilbert_l_sequence(n: usize, nu: f64) -> Result<LSequence> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    check_nu(n, nu)?;
    let a = (0..n).map(|j| 1.0 / (j as f64 + nu)).collect();
    Ok(LSequence { a, nu: Some(nu) })
}

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSym {
    n: usize,
    entries: Vec<f64>,
}

impl DenseSym {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {n}x{n} entries, got {}",
                entries.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::InvalidArgument(format!("entry ({i}, {j}) is not symmetric")));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Self { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub fn dense_from_sequence(seq: &LSequence) -> DenseSym {
    let a = seq.a();
    DenseSym::from_fn(a.len(), |i, j| a[i.max(j)])
}

/// `det A_n = a_{n-1} prod_{j=1}^{n-1} (a_{j-1} - a_j)`.
pub fn det_lmatrix(seq: &LSequence) -> f64 {
    let a = seq.a();
    let mut det = a[a.len() - 1];
    for w in a.windows(2) {
        det *= w[0] - w[1];
    }
    det
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("tridiagonal entries must be finite".into()));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Interval `[lo, hi]` containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.diag.iter().chain(&self.offdiag).fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn to_dense(&self) -> DenseSym {
        let n = self.n();
        DenseSym::from_fn(n, |i, j| {
            if i == j {
                self.diag[i]
            } else if i == j + 1 {
                self.offdiag[j]
            } else {
                0.0
            }
        })
    }
}

/// `L D L^T` with `L` unit lower bidiagonal, subdiagonal `-1`.
///
/// Entries: `T_00 = d_0`, `T_ii = d_{i-1} + d_i`, `T_{i,i+1} = -d_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LdlTridiagonal {
    d: Vec<f64>,
}

impl LdlTridiagonal {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() || d.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("pivots must be nonempty and finite".into()));
        }
        Ok(Self { d })
    }

    pub fn pivots(&self) -> &[f64] {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn to_tridiagonal(&self) -> SymTridiagonal {
        let n = self.d.len();
        let mut diag = Vec::with_capacity(n);
        diag.push(self.d[0]);
        for i in 1..n {
            diag.push(self.d[i - 1] + self.d[i]);
        }
        let offdiag = self.d[..n - 1].iter().map(|x| -x).collect();
        SymTridiagonal { diag, offdiag }
    }
}

/// Tridiagonal inverse of the L-matrix of `seq`.
///
/// Entries follow `b_j = 1/(a_j - a_{j+1})` literally; the last diagonal entry
/// is `(a_{n-2}/a_{n-1}) b_{n-2}`.
pub fn inverse_tridiagonal(seq: &LSequence) -> Result<SymTridiagonal> {
    seq.check_regular()?;
    let a = seq.a();
    let n = a.len();
    if n == 1 {
        return SymTridiagonal::new(vec![1.0 / a[0]], vec![]);
    }
    let b: Vec<f64> = a.windows(2).map(|w| 1.0 / (w[0] - w[1])).collect();
    let mut diag = Vec::with_capacity(n);
    diag.push(b[0]);
    for j in 1..n - 1 {
        diag.push(b[j - 1] + b[j]);
    }
    diag.push(a[n - 2] / a[n - 1] * b[n - 2]);
    let offdiag = b.iter().map(|x| -x).collect();
    SymTridiagonal::new(diag, offdiag)
}

/// Factored inverse `L D L^T`, pivots `(b_0, ..., b_{n-2}, 1/a_{n-1})`.
///
/// With a `nu` tag the pivots are the exact products `(j+nu)(j+1+nu)` and
/// `n - 1 + nu`.
pub fn factored_inverse(seq: &LSequence) -> Result<LdlTridiagonal> {
    seq.check_regular()?;
    let n = seq.len();
    let mut d: Vec<f64> = (0..n - 1).map(|j| seq.b(j)).collect();
    d.push(match seq.nu() {
        Some(nu) => n as f64 - 1.0 + nu,
        None => 1.0 / seq.a()[n - 1],
    });
    LdlTridiagonal::new(d)
}

/// Jacobi matrix `B_n(nu)`: diagonal `b_{j-1} + b_j` (with `b_{-1} = 0`),
/// off-diagonal `-b_j`, `b_j = (j+nu)(j+1+nu)`.
pub fn jacobi_b(nu: f64, n: usize) -> Result<SymTridiagonal> {
    factored_jacobi_b(nu, n).map(|f| f.to_tridiagonal())
}

/// `B_n(nu) = L D L^T` with `D = (b_0, ..., b_{n-1})`.
pub fn factored_jacobi_b(nu: f64, n: usize) -> Result<LdlTridiagonal> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if !nu.is_finite() {
        return Err(Error::InvalidArgument(format!("nu must be finite, got {nu}")));
    }
    LdlTridiagonal::new((0..n).map(|j| hilbert_b(nu, j)).collect())
}

/// `max |B_n - L_n^{-1} - (n+nu-1)^2 e_n e_n^T| / max |B_n|`.
pub fn rank_one_residual(nu: f64, n: usize) -> Result<f64> {
    let seq = hilbert_l_sequence(n, nu)?;
    let inv = inverse_tridiagonal(&seq)?;
    let b = jacobi_b(nu, n)?;
    let corr = (n as f64 + nu - 1.0).powi(2);
    let mut res: f64 = 0.0;
    for i in 0..n {
        let extra = if i == n - 1 { corr } else { 0.0 };
        res = res.max((b.diag()[i] - inv.diag()[i] - extra).abs());
    }
    for (x, y) in b.offdiag().iter().zip(inv.offdiag()) {
        res = res.max((x - y).abs());
    }
    Ok(res / b.max_norm())
}

/// Hankel matrix `H_n(nu)_{ij} = 1/(i + j + nu)`.
pub fn hilbert_hankel_dense(n: usize, nu: f64) -> Result<DenseSym> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    check_nu(2 * n - 1, nu)?;
    Ok(DenseSym::from_fn(n, |i, j| 1.0 / ((i + j) as f64 + nu)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul_dense_tri(a: &DenseSym, t: &SymTridiagonal) -> Vec<f64> {
        let n = a.n();
        let td = t.to_dense();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let lo = j.saturating_sub(1);
                let hi = (j + 1).min(n - 1);
                out[i * n + j] = (lo..=hi).map(|k| a.get(i, k) * td.get(k, j)).sum();
            }
        }
        out
    }

    #[test]
    fn hilbert_sequences() {
        assert_eq!(hilbert_l_sequence(2, 1.0).unwrap().a(), &[1.0, 0.5]);
        let s = hilbert_l_sequence(3, 0.5).unwrap();
        for (x, y) in s.a().iter().zip([2.0, 2.0 / 3.0, 0.4]) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(hilbert_l_sequence(2, -0.5).unwrap().a(), &[-2.0, 2.0]);
        assert!(matches!(hilbert_l_sequence(3, -2.0), Err(Error::Pole(_))));
        assert!(hilbert_l_sequence(2, -2.0).is_ok());
    }

    #[test]
    fn dense_shape() {
        let d = dense_from_sequence(&LSequence::new(vec![1.0, 0.5]).unwrap());
        assert_eq!(d.entries(), &[1.0, 0.5, 0.5, 0.5]);
        let d = dense_from_sequence(&LSequence::new(vec![1.0, 0.5, 1.0 / 3.0]).unwrap());
        for j in 0..3 {
            assert_eq!(d.get(2, j), 1.0 / 3.0);
        }
        assert_eq!(
            dense_from_sequence(&LSequence::new(vec![7.0]).unwrap()).entries(),
            &[7.0]
        );
    }

    #[test]
    fn determinant_small() {
        assert_eq!(det_lmatrix(&LSequence::new(vec![1.0, 0.5]).unwrap()), 0.25);
        assert_eq!(det_lmatrix(&LSequence::new(vec![3.5]).unwrap()), 3.5);
        assert_eq!(det_lmatrix(&LSequence::new(vec![1.0, 1.0, 0.5]).unwrap()), 0.0);
    }

    #[test]
    fn inverse_small() {
        let t = inverse_tridiagonal(&LSequence::new(vec![1.0, 0.5]).unwrap()).unwrap();
        assert_eq!(t.diag(), &[2.0, 4.0]);
        assert_eq!(t.offdiag(), &[-2.0]);
        let t = inverse_tridiagonal(&LSequence::new(vec![4.0]).unwrap()).unwrap();
        assert_eq!(t.diag(), &[0.25]);
    }

    #[test]
    fn inverse_of_l6() {
        let seq = hilbert_l_sequence(6, 1.0).unwrap();
        let prod = matmul_dense_tri(&dense_from_sequence(&seq), &inverse_tridiagonal(&seq).unwrap());
        for i in 0..6 {
            for j in 0..6 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((prod[i * 6 + j] - e).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn singular_sequences_rejected() {
        let s = LSequence::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(inverse_tridiagonal(&s), Err(Error::Singular(_))));
        let s = LSequence::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(inverse_tridiagonal(&s), Err(Error::Singular(_))));
        assert!(matches!(factored_inverse(&s), Err(Error::Singular(_))));
    }

    #[test]
    fn factored_matches_explicit_inverse() {
        for nu in [0.3, 1.0, 2.5] {
            let seq = hilbert_l_sequence(40, nu).unwrap();
            let a = inverse_tridiagonal(&seq).unwrap();
            let b = factored_inverse(&seq).unwrap().to_tridiagonal();
            for (x, y) in a.diag().iter().zip(b.diag()) {
                assert!((x - y).abs() <= 1e-12 * y.abs());
            }
            for (x, y) in a.offdiag().iter().zip(b.offdiag()) {
                assert!((x - y).abs() <= 1e-12 * y.abs());
            }
        }
        let seq = LSequence::new(vec![3.0, -1.0, 2.0, 0.5]).unwrap();
        let a = inverse_tridiagonal(&seq).unwrap();
        let b = factored_inverse(&seq).unwrap().to_tridiagonal();
        for (x, y) in a.diag().iter().zip(b.diag()) {
            assert!((x - y).abs() <= 1e-14 * y.abs().max(1.0));
        }
    }

    #[test]
    fn jacobi_small() {
        let b = jacobi_b(1.0, 2).unwrap();
        assert_eq!(b.diag(), &[2.0, 8.0]);
        assert_eq!(b.offdiag(), &[-2.0]);
        let b = jacobi_b(0.7, 1).unwrap();
        assert!((b.diag()[0] - 0.7 * 1.7).abs() < 1e-15);
    }

    #[test]
    fn rank_one_relation() {
        assert_eq!(rank_one_residual(1.0, 2).unwrap(), 0.0);
        assert!(rank_one_residual(0.5, 5).unwrap() <= 1e-12);
        assert!(rank_one_residual(3.0, 50).unwrap() <= 1e-10);
        for nu in [0.2, 0.5, 1.0, 2.7] {
            for n in [2, 5, 50, 500] {
                assert!(rank_one_residual(nu, n).unwrap() <= 1e-10, "nu {nu}, n {n}");
            }
        }
    }

    #[test]
    fn hankel() {
        assert_eq!(hilbert_hankel_dense(1, 1.0).unwrap().entries(), &[1.0]);
        let h = hilbert_hankel_dense(2, 1.0).unwrap();
        assert_eq!(h.get(0, 1), 0.5);
        assert_eq!(h.get(1, 1), 1.0 / 3.0);
        let h = hilbert_hankel_dense(2, 2.0).unwrap();
        assert_eq!(h.entries(), &[0.5, 1.0 / 3.0, 1.0 / 3.0, 0.25]);
        assert!(matches!(hilbert_hankel_dense(2, -2.0), Err(Error::Pole(_))));
    }

    #[test]
    fn gershgorin_encloses_diagonal_case() {
        let t = SymTridiagonal::new(vec![1.0, 2.0, 3.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(t.gershgorin(), (1.0, 3.0));
    }
}
