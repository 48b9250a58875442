//! The table-producing commands. Grid points are evaluated in parallel and
//! emitted in ascending grid order.

use lspec_core::asymptotics::{
    counting_density, expected_count, large_eig_prediction, norm_expansion, small_eig_prediction, small_eig_residual,
};
use lspec_core::eigensolve::{count_above, eigs_l_indices, find_large_eigs, spectrum_L};
use lspec_core::specfun::airy_zero;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::table::{Cell, Table};
use crate::CliError;

/// Largest `j` with a tabulated Airy-type zero.
pub const MAX_J: usize = 20;

fn sorted_unique<T: Copy + PartialOrd>(v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| a == b);
    out
}

fn collect_rows(parts: Vec<Result<Vec<Vec<Cell>>, CliError>>, table: &mut Table) -> Result<(), CliError> {
    for part in parts {
        for row in part? {
            table.push(row);
        }
    }
    Ok(())
}

pub fn cmd_spectrum(config: &ExperimentConfig) -> Result<Table, CliError> {
    let mut table = Table::new(&["n", "j", "mu", "method", "abs_tol"]);
    for n in sorted_unique(&config.n_grid) {
        let s = spectrum_L(n, config.nu, config.tol)?;
        for (j, mu) in s.values.iter().enumerate() {
            table.push(vec![
                n.into(),
                (j + 1).into(),
                (*mu).into(),
                s.method.as_str().into(),
                s.abs_tol.into(),
            ]);
        }
    }
    Ok(table)
}

pub fn cmd_counting(config: &ExperimentConfig) -> Result<Table, CliError> {
    let xs = sorted_unique(&config.thresholds);
    if let Some(x) = xs.iter().find(|&&x| !(x > 0.0 && x < 4.0)) {
        return Err(CliError::Usage(format!("thresholds must lie in (0, 4), got {x}")));
    }
    let ns = sorted_unique(&config.n_grid);
    let nu = config.nu;
    let parts: Vec<Result<Vec<Vec<Cell>>, CliError>> = ns
        .par_iter()
        .map(|&n| {
            let log_n = (n as f64).ln();
            let mut rows = Vec::new();
            let mut prev = usize::MAX;
            for &x in &xs {
                let count = count_above(n, nu, x)?.count;
                if count > prev {
                    return Err(CliError::Numerical(format!(
                        "count above {x} exceeds the count at a lower threshold (n = {n})"
                    )));
                }
                prev = count;
                let per_log = if n > 1 { Some(count as f64 / log_n) } else { None };
                rows.push(vec![
                    n.into(),
                    nu.into(),
                    x.into(),
                    count.into(),
                    per_log.into(),
                    counting_density(x / 4.0)?.into(),
                    expected_count(x, n)?.into(),
                ]);
            }
            Ok(rows)
        })
        .collect();
    let mut table = Table::new(&[
        "n",
        "nu",
        "x_abs",
        "count",
        "count_over_log_n",
        "density_limit",
        "expected",
    ]);
    collect_rows(parts, &mut table)?;
    Ok(table)
}

const EXTREME_COLUMNS: [&str; 11] = [
    "n",
    "nu",
    "j",
    "side",
    "order",
    "exact",
    "prediction",
    "abs_error",
    "scaled_error",
    "residual",
    "limit",
];

fn extremes_at(n: usize, config: &ExperimentConfig, js: &[usize], order: usize) -> Result<Vec<Vec<Cell>>, CliError> {
    let nu = config.nu;
    let in_range: Vec<usize> = js.iter().copied().filter(|&j| j <= n).collect();
    let mut rows = Vec::new();
    if in_range.is_empty() {
        return Ok(rows);
    }
    let small = eigs_l_indices(n, nu, &in_range, config.tol)?;
    let nf = n as f64;
    for (&j, &mu) in in_range.iter().zip(&small) {
        let pred = small_eig_prediction(j, n)?.value;
        let residual = small_eig_residual(mu, n);
        let limit = airy_zero(j)? / 3f64.cbrt();
        rows.push(vec![
            n.into(),
            nu.into(),
            j.into(),
            "small".into(),
            1usize.into(),
            mu.into(),
            pred.into(),
            (mu - pred).abs().into(),
            ((mu - pred).abs() * 4.0 * nf * nf * nf.powf(2.0 / 3.0)).into(),
            residual.into(),
            limit.into(),
        ]);
    }
    if nu == 1.0 && n >= 3 {
        let top = find_large_eigs(n, *in_range.last().unwrap())?;
        let l = nf.ln();
        for &j in &in_range {
            let mu = top[j - 1];
            let max_order = if j == 1 { order } else { order.min(2) };
            for k in 1..=max_order {
                let pred = large_eig_prediction(j, n, k)?.value;
                let err = (mu - pred).abs();
                rows.push(vec![
                    n.into(),
                    nu.into(),
                    j.into(),
                    "large".into(),
                    k.into(),
                    mu.into(),
                    pred.into(),
                    err.into(),
                    (err * l.powi(k as i32 + 2)).into(),
                    Cell::Missing,
                    Cell::Missing,
                ]);
            }
        }
    }
    Ok(rows)
}

/// Small side for every `nu > 0`; the large side (from `q_n` roots) only
/// for `nu = 1`.
pub fn cmd_extremes(config: &ExperimentConfig) -> Result<Table, CliError> {
    let js = sorted_unique(&config.j_list);
    if let Some(j) = js.iter().find(|&&j| j > MAX_J) {
        return Err(CliError::Usage(format!("j = {j} exceeds {MAX_J}")));
    }
    let order = config.order.unwrap_or(2);
    if !(1..=3).contains(&order) {
        return Err(CliError::Usage(format!("--order must lie in 1..=3, got {order}")));
    }
    let ns = sorted_unique(&config.n_grid);
    let parts: Vec<_> = ns.par_iter().map(|&n| extremes_at(n, config, &js, order)).collect();
    let mut table = Table::new(&EXTREME_COLUMNS);
    collect_rows(parts, &mut table)?;
    Ok(table)
}

/// `||L_n(1)||`, the best constant in the truncated discrete Hardy inequality.
pub fn cmd_norm(config: &ExperimentConfig) -> Result<Table, CliError> {
    if config.nu != 1.0 {
        return Err(CliError::Usage(format!(
            "norm is available for nu = 1 only, got {}",
            config.nu
        )));
    }
    let order = config.order.unwrap_or(4);
    if !(1..=4).contains(&order) {
        return Err(CliError::Usage(format!("--order must lie in 1..=4, got {order}")));
    }
    let ns = sorted_unique(&config.n_grid);
    let parts: Vec<Result<Vec<Vec<Cell>>, CliError>> = ns
        .par_iter()
        .map(|&n| {
            let norm = find_large_eigs(n, 1)?[0];
            if n < 3 {
                let blank = || Cell::Missing;
                return Ok(vec![vec![n.into(), norm.into(), blank(), blank(), blank(), blank()]]);
            }
            let l = (n as f64).ln();
            (1..=order)
                .map(|k| {
                    let e = norm_expansion(n, k)?.value;
                    let err = (norm - e).abs();
                    Ok(vec![
                        n.into(),
                        norm.into(),
                        k.into(),
                        e.into(),
                        err.into(),
                        (err * l.powi(k as i32 + 2)).into(),
                    ])
                })
                .collect()
        })
        .collect();
    let mut table = Table::new(&["n", "hardy_constant", "order", "expansion", "abs_error", "scaled_error"]);
    collect_rows(parts, &mut table)?;
    Ok(table)
}
