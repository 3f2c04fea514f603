#![allow(dead_code)]

use arspec_core::{solve_hermitian_dense, AutocorrSeq, BlockAutocorr, ComplexMatrix, C64};

/// `max|a - b| / max|b|`, falling back to the absolute gap when `b` is zero.
pub fn rel_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let gap = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        gap
    } else {
        gap / scale
    }
}

pub fn rel_diff_mats(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    assert_eq!(a.len(), b.len());
    let gap = a.iter().zip(b).map(|(x, y)| x.max_abs_diff(y)).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.max_abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        gap
    } else {
        gap / scale
    }
}

pub fn rel_diff_mat(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    rel_diff_mats(core::slice::from_ref(a), core::slice::from_ref(b))
}

/// Solves `R_n·a = -r` by dense LU on the assembled Toeplitz matrix.
pub fn dense_yule_walker(r: &AutocorrSeq, order: usize) -> Vec<C64> {
    let rm = r.toeplitz(order);
    let rhs = ComplexMatrix::from_fn(order, 1, |i, _| -r.lag(i as isize + 1));
    let a = solve_hermitian_dense(&rm, &rhs).unwrap();
    (0..order).map(|i| a[(i, 0)]).collect()
}

/// Solves `[A_1 … A_n]·M = -[R_1 … R_n]` with `M` the assembled block
/// Toeplitz matrix (block `(l, d) = R_{d-l}`), via `M·Xᴴ = -Bᴴ`.
pub fn dense_block_yule_walker(blocks: &BlockAutocorr, n: usize) -> Vec<ComplexMatrix> {
    let c = blocks.channels();
    let m = blocks.assemble(n);
    let b = ComplexMatrix::from_fn(c, n * c, |i, j| blocks.block((j / c) as isize + 1)[(i, j % c)]);
    let xh = solve_hermitian_dense(&m, &b.conj_transpose().scale(C64::new(-1.0, 0.0))).unwrap();
    let x = xh.conj_transpose();
    (0..n)
        .map(|l| ComplexMatrix::from_fn(c, c, |i, j| x[(i, l * c + j)]))
        .collect()
}

/// `R_n·a + r`, relative to `‖R_n·a‖ + ‖r‖`.
pub fn yule_walker_residual(r: &AutocorrSeq, a: &[C64]) -> f64 {
    let n = a.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let mut acc = r.lag(i as isize + 1);
        let mut scale = acc.norm();
        for (j, aj) in a.iter().enumerate() {
            let term = r.lag(i as isize - j as isize) * aj;
            scale += term.norm();
            acc += term;
        }
        worst = worst.max(acc.norm() / scale);
    }
    worst
}
