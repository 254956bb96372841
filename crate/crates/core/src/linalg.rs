//! Small dense complex linear algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real matrix literal, row-major.
pub fn real_matrix(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Maximum absolute row sum.
pub fn inf_norm(m: &CMat) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

fn padded_square(m: &CMat) -> CMat {
    let n = m.nrows().max(m.ncols());
    let mut p = CMat::zeros(n, n);
    p.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    p
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with threshold `tol * max(1, sigma_max)`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    let cut = tol * s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&x| x > cut).count()
}

/// Orthonormal basis of the kernel, as columns.
pub fn nullspace(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return identity(n);
    }
    let p = padded_square(m);
    let svd = p.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = tol * smax.max(1.0);
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= cut)
        .collect();
    CMat::from_fn(n, cols.len(), |r, k| vt[(cols[k], r)].conj())
}

/// Orthonormal basis of the column space, as columns.
pub fn column_space(m: &CMat, tol: f64) -> CMat {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return CMat::zeros(n, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = tol * smax.max(1.0);
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cut)
        .collect();
    CMat::from_fn(n, cols.len(), |r, k| u[(r, cols[k])])
}

/// Orthonormal basis of the orthogonal complement of the column space.
pub fn cokernel_basis(m: &CMat, tol: f64) -> CMat {
    nullspace(&m.adjoint(), tol)
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    if m.nrows() != m.ncols() {
        return None;
    }
    if m.is_empty() {
        return Some(m.clone());
    }
    m.clone().try_inverse()
}

/// Ratio of largest to smallest singular value (infinite when singular).
pub fn condition_number(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// Submatrix on the given row and column index lists.
pub fn select(m: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    CMat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn hstack(blocks: &[&CMat]) -> CMat {
    let n = blocks.first().map_or(0, |b| b.nrows());
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(n, m);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.nrows(), n);
        out.view_mut((0, off), (n, b.ncols())).copy_from(*b);
        off += b.ncols();
    }
    out
}

pub fn vstack(blocks: &[&CMat]) -> CMat {
    let m = blocks.first().map_or(0, |b| b.ncols());
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(n, m);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.ncols(), m);
        out.view_mut((off, 0), (b.nrows(), m)).copy_from(*b);
        off += b.nrows();
    }
    out
}

pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}
