//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line
//! with the measured quantities and then asserts.
//!
//! Run with `cargo test -p lspec-core --test acceptance -- --nocapture --test-threads 1`.

use std::f64::consts::PI;
use std::time::Instant;

use lspec_core::asymptotics::{
    expected_count, norm_expansion, qn_leading, small_eig_residual, spread_factor, strictly_decreasing_magnitudes,
};
use lspec_core::charpoly::{
    charpoly_asymptotic, charpoly_nu1_3f2_eval, charpoly_nu1_cdh, charpoly_via_p, charpoly_via_p_eval,
    nu1_sign_changes, q_n, z_of_xi,
};
use lspec_core::eigensolve::{count_above, dense_jacobi_eigs, eigs_l_indices, find_large_eigs, spectrum_B, spectrum_L};
use lspec_core::lmatrix::{dense_from_sequence, det_lmatrix, hilbert_hankel_dense, inverse_tridiagonal, LSequence};
use lspec_core::specfun::airy_zero;
use lspec_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, ok: bool, detail: String, start: Instant) {
    println!(
        "{} criterion {id:>2} [{name}] {detail} ({:.2} s)",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn lu_det(n: usize, mut m: Vec<f64>) -> f64 {
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i * n + c].abs().total_cmp(&m[j * n + c].abs()))
            .unwrap();
        if p != c {
            for k in 0..n {
                m.swap(p * n + k, c * n + k);
            }
            det = -det;
        }
        let piv = m[c * n + c];
        det *= piv;
        for r in c + 1..n {
            let f = m[r * n + c] / piv;
            for k in c..n {
                m[r * n + k] -= f * m[c * n + k];
            }
        }
    }
    det
}

fn random_regular(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut a: Vec<f64> = Vec::with_capacity(n);
    while a.len() < n {
        let x: f64 = rng.gen_range(-2.0..2.0);
        let ok = x.abs() > 1e-3 && a.last().is_none_or(|&p: &f64| (p - x).abs() > 1e-3);
        if ok {
            a.push(x);
        }
    }
    a
}

#[test]
fn criterion_01_exact_small_case() {
    let start = Instant::now();
    let mu = spectrum_L(2, 1.0, 1e-15).unwrap().values;
    let s5 = 5f64.sqrt();
    let e0 = (mu[0] - (3.0 - s5) / 4.0).abs();
    let e1 = (mu[1] - (3.0 + s5) / 4.0).abs();
    let tr = (mu[0] + mu[1] - 1.5).abs();
    let det = (mu[0] * mu[1] - 0.25).abs();
    let ok = e0 <= 1e-13 && e1 <= 1e-13 && tr <= 1e-14 && det <= 1e-14;
    report(
        1,
        "n = 2 spectrum",
        ok,
        format!("eig errors {e0:.1e}, {e1:.1e}; trace error {tr:.1e}; det error {det:.1e}"),
        start,
    );
}

#[test]
fn criterion_02_structural_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_det: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let seq = LSequence::new(random_regular(&mut rng, n)).unwrap();
        let lu = lu_det(n, dense_from_sequence(&seq).entries().to_vec());
        worst_det = worst_det.max((det_lmatrix(&seq) - lu).abs() / lu.abs());

        let n = rng.gen_range(1..=64);
        let seq = LSequence::new(random_regular(&mut rng, n)).unwrap();
        let dense = dense_from_sequence(&seq);
        let t = inverse_tridiagonal(&seq).unwrap().to_dense();
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| dense.get(i, k) * t.get(k, j)).sum();
                let e = (s - if i == j { 1.0 } else { 0.0 }).abs() / (1e-11 * n as f64);
                worst_inv = worst_inv.max(e);
            }
        }
    }
    let ok = worst_det <= 1e-11 && worst_inv <= 1.0;
    report(
        2,
        "determinant and inverse",
        ok,
        format!("max rel det error {worst_det:.1e}; max |L T - I| / (1e-11 n) {worst_inv:.2e}"),
        start,
    );
}

#[test]
fn criterion_03_three_way_charpoly() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for n in [2, 10, 50, 200] {
        for _ in 0..20 {
            let z = Complex64::new(rng.gen_range(-1.0..5.0), 0.0);
            let p = charpoly_via_p_eval(z, n, 1.0).unwrap().value.re();
            let f = charpoly_nu1_3f2_eval(z, n).unwrap().value.re();
            let c = charpoly_nu1_cdh(z, n).value.re();
            worst = worst.max(p.rel_diff(f)).max(p.rel_diff(c)).max(f.rel_diff(c));
        }
    }
    report(
        3,
        "charpoly routes",
        worst <= 1e-9,
        format!("max pairwise rel diff {worst:.1e}"),
        start,
    );
}

#[test]
fn criterion_04_counting() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for nu in [0.5, 1.0, 2.0] {
        for n in [10_000, 100_000, 1_000_000] {
            for x in [1.0, 2.0, 3.0] {
                let count = count_above(n, nu, x).unwrap().count as f64;
                worst = worst.max((count - expected_count(x, n).unwrap()).abs());
            }
        }
    }
    let mut mismatches = 0;
    for k in 1..=400 {
        let x = 4.0 * k as f64 / 401.0;
        if count_above(100, 1.0, x).unwrap().count != nu1_sign_changes(1.0 / x, 100) {
            mismatches += 1;
        }
    }
    let ok = worst <= 3.0 && mismatches == 0;
    report(
        4,
        "eigenvalue counting",
        ok,
        format!("max |count - expected| {worst:.3}; Sturm vs sign-change mismatches at n = 100: {mismatches}"),
        start,
    );
}

#[test]
fn criterion_05_small_eigenvalues() {
    let start = Instant::now();
    let third = 3f64.cbrt();
    let mut failures = Vec::new();
    let mut table = Vec::new();
    for nu in [0.5, 1.0, 3.0] {
        for j in [1usize, 2] {
            let target = airy_zero(j).unwrap() / third;
            let mut dev = Vec::new();
            for n in [1_000, 10_000, 100_000] {
                let mu = eigs_l_indices(n, nu, &[j], 1e-15).unwrap()[0];
                dev.push((small_eig_residual(mu, n) - target).abs());
            }
            let terminal = dev[2] <= 0.1 * target;
            let monotone = dev[0] > dev[1] && dev[1] > dev[2];
            table.push(format!("nu={nu} j={j} |r-t|={:.3}/{:.3}/{:.3}", dev[0], dev[1], dev[2]));
            if !(terminal && monotone) {
                failures.push(format!("nu={nu} j={j}"));
            }
        }
    }
    report(
        5,
        "smallest eigenvalues",
        failures.is_empty(),
        format!("{}; failing: {:?}", table.join(", "), failures),
        start,
    );
}

#[test]
fn criterion_06_norm_expansion() {
    let start = Instant::now();
    let ns = [10_000, 100_000, 1_000_000];
    let norms: Vec<f64> = ns.iter().map(|&n| find_large_eigs(n, 1).unwrap()[0]).collect();
    let errors = |n: usize, norm: f64| -> Vec<f64> {
        (1..=3)
            .map(|k| (norm - norm_expansion(n, k).unwrap().value).abs())
            .collect()
    };
    let at_top = errors(ns[2], norms[2]);
    let decreasing = strictly_decreasing_magnitudes(&at_top);
    let mut spreads = Vec::new();
    for k in 1..=3 {
        let scaled: Vec<f64> = ns
            .iter()
            .zip(&norms)
            .map(|(&n, &norm)| errors(n, norm)[k - 1] * (n as f64).ln().powi(k as i32 + 2))
            .collect();
        spreads.push(spread_factor(&scaled));
    }
    let ok = decreasing && spreads.iter().all(|&s| s <= 10.0);
    report(
        6,
        "norm expansion",
        ok,
        format!(
            "norms {:?}; errors at 1e6 {:.3e}/{:.3e}/{:.3e}; scaled-error spreads {:.2}/{:.2}/{:.2}",
            norms, at_top[0], at_top[1], at_top[2], spreads[0], spreads[1], spreads[2]
        ),
        start,
    );
}

#[test]
fn criterion_07_charpoly_asymptotics() {
    let start = Instant::now();
    let xi = Complex64::new(0.5, 0.5);
    let z = z_of_xi(xi);
    let target = 4f64.powf((2.0 * z.re).min(1.0));
    let mut table = Vec::new();
    let mut ok = true;
    for nu in [1.0, 0.5] {
        let errs: Vec<f64> = [100, 400, 1_600, 6_400]
            .iter()
            .map(|&n| {
                let exact = charpoly_via_p(xi, n, nu).unwrap();
                let asym = charpoly_asymptotic(xi, n, nu).unwrap();
                (exact / asym - 1.0).norm()
            })
            .collect();
        let factors: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
        ok &= factors.iter().all(|f| (f / target - 1.0).abs() <= 0.3);
        table.push(format!(
            "nu={nu} factors {:.3}/{:.3}/{:.3}",
            factors[0], factors[1], factors[2]
        ));
    }
    report(
        7,
        "charpoly leading term",
        ok,
        format!("target factor {target:.3}; {}", table.join(", ")),
        start,
    );
}

#[test]
fn criterion_08_qn_remainder() {
    let start = Instant::now();
    let grid: Vec<f64> = (0..=38).map(|k| 0.1 + 0.05 * k as f64).collect();
    let sup = |n: usize| -> f64 {
        grid.iter()
            .map(|&xi| (q_n(xi, n) - qn_leading(xi, n).unwrap()).abs() * n as f64 * xi)
            .fold(0.0, f64::max)
    };
    let fitted = sup(100);
    let later = [sup(1_000), sup(10_000)];
    let ok = later.iter().all(|&s| s <= 2.0 * fitted);
    report(
        8,
        "q_n remainder",
        ok,
        format!(
            "C fitted at n = 100: {fitted:.4}; sup at 1e3, 1e4: {:.4}, {:.4}",
            later[0], later[1]
        ),
        start,
    );
}

#[test]
fn criterion_09_interlacing() {
    let start = Instant::now();
    let mut violations = 0;
    let mut checks = 0;
    let slack = 1e-10;
    for nu in [0.5, 1.0, 2.0] {
        for n in 2..=50 {
            let mu = spectrum_L(n, nu, 1e-15).unwrap().values;
            let b = spectrum_B(n, nu, 1e-15).unwrap().values;
            let bm = spectrum_B(n - 1, nu, 1e-15).unwrap().values;
            let mut check = |holds: bool| {
                checks += 1;
                if !holds {
                    violations += 1;
                }
            };
            for j in 1..=n {
                check(b[j - 1] >= (1.0 - slack) / mu[n - j]);
            }
            for k in 1..n {
                check(1.0 / mu[n - k] <= bm[k - 1] * (1.0 + slack));
                check(bm[k - 1] <= (1.0 + slack) / mu[n - k - 1]);
            }
            for j in 1..n {
                check(1.0 / b[n - j] <= mu[j - 1] * (1.0 + slack));
                check(mu[j - 1] <= (1.0 + slack) / bm[n - j - 1]);
            }
        }
    }
    report(
        9,
        "interlacing chains",
        violations == 0,
        format!("{checks} inequalities, {violations} violations"),
        start,
    );
}

#[test]
fn criterion_10_hilbert_counts() {
    let start = Instant::now();
    let n = 500;
    let eigs = dense_jacobi_eigs(&hilbert_hankel_dense(n, 1.0).unwrap()).unwrap();
    let mut table = Vec::new();
    let mut ok = true;
    for x in [0.3f64, 0.5, 0.7] {
        let count = eigs.iter().filter(|&&e| e > PI * x).count();
        let predicted = 2.0 / PI * ((1.0 + (1.0 - x * x).sqrt()) / x).ln() * (n as f64).ln();
        ok &= (count as f64 - predicted).abs() <= 2.0;
        table.push(format!("x={x}: {count} vs {predicted:.3}"));
    }
    report(10, "Hilbert matrix counts", ok, table.join(", "), start);
}
