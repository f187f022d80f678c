//! Small dense linear-algebra helpers shared by the geometry modules.
//!
//! All singular value decompositions in the crate go through [`sorted_svd`],
//! which returns singular values in nonincreasing order. Routines that need
//! principal angles (nondecreasing) convert at a single place, see
//! `grassmann::angles`.

use nalgebra::{DMatrix, DVector};

/// Entries below this magnitude do not count as "first nonzero" for sign fixing.
const SIGN_EPS: f64 = 1e-10;

/// Thin SVD `m = u * diag(sigma) * v^T` with `sigma` nonincreasing.
///
/// `u` is `rows x p`, `v` is `cols x p` with `p = min(rows, cols)`. Each left
/// singular vector is flipped (together with its right partner) so that its
/// first entry of magnitude above `1e-10` is positive. The decomposition is
/// computed by `faer`; nalgebra's dynamic SVD loses accuracy on some
/// rank-deficient inputs.
pub fn sorted_svd(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    let p = rows.min(cols);
    if p == 0 {
        return (DMatrix::zeros(rows, 0), Vec::new(), DMatrix::zeros(cols, 0));
    }
    let fm = faer::Mat::<f64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let svd = fm.thin_svd().expect("svd converges on finite input");
    let (fu, fs, fv) = (svd.U(), svd.S().column_vector(), svd.V());

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| fs[b].partial_cmp(&fs[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));

    let mut u = DMatrix::zeros(rows, p);
    let mut v = DMatrix::zeros(cols, p);
    let mut sigma = Vec::with_capacity(p);
    for (dst, &src) in order.iter().enumerate() {
        let mut ucol = DVector::from_fn(rows, |i, _| fu[(i, src)]);
        let mut vcol = DVector::from_fn(cols, |i, _| fv[(i, src)]);
        if let Some(first) = ucol.iter().find(|x| x.abs() > SIGN_EPS) {
            if *first < 0.0 {
                ucol.neg_mut();
                vcol.neg_mut();
            }
        }
        u.set_column(dst, &ucol);
        v.set_column(dst, &vcol);
        sigma.push(fs[src].max(0.0));
    }
    (u, sigma, v)
}

/// Singular values only, nonincreasing.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows().min(m.ncols()) == 0 {
        return Vec::new();
    }
    let fm = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let mut sv = fm.singular_values().expect("svd converges on finite input");
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Orthonormal basis of the column space of a full-column-rank matrix.
///
/// Householder QR with the sign convention `diag(R) > 0`, so the result is the
/// unique Gram-Schmidt factor of `m`.
pub fn orthonormalize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let k = m.ncols();
    let qr = m.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..k {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Extends orthonormal columns `q` (`n x k`) to an orthonormal `n x total` matrix.
///
/// At each step the standard basis vector with the largest residual after
/// projection onto the current span is appended (ties go to the lowest index).
/// The appended vector is orthogonalized twice.
pub fn complete_orthonormal(q: &DMatrix<f64>, total: usize) -> DMatrix<f64> {
    let n = q.nrows();
    let mut cols: Vec<DVector<f64>> = q.column_iter().map(|c| c.into_owned()).collect();
    while cols.len() < total {
        let mut best: Option<(usize, f64, DVector<f64>)> = None;
        for i in 0..n {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            let r = residual(&cols, e);
            let norm = r.norm();
            if best.as_ref().is_none_or(|(_, b, _)| norm > *b + 1e-14) {
                best = Some((i, norm, r));
            }
        }
        let (_, _, r) = best.expect("n > 0");
        let r = residual(&cols, r);
        let norm = r.norm();
        cols.push(r / norm);
    }
    DMatrix::from_columns(&cols)
}

/// Orthonormal basis of the orthogonal complement of the column span of `m`.
///
/// Returns the basis together with the numerical rank of `m` (singular values
/// above `tol` times the largest).
pub fn orthogonal_complement(m: &DMatrix<f64>, tol: f64) -> (DMatrix<f64>, usize) {
    let n = m.nrows();
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > tol * top.max(1.0)).count();
    let (u, _, _) = sorted_svd(m);
    let span = u.columns(0, rank).into_owned();
    let full = complete_orthonormal(&span, n);
    (full.columns(rank, n - rank).into_owned(), rank)
}

/// Minimum-norm least-squares solution of `m x = rhs`, discarding singular
/// values below `rcond` times the largest.
pub fn pinv_solve(m: &DMatrix<f64>, rhs: &DVector<f64>, rcond: f64) -> DVector<f64> {
    let (u, s, v) = sorted_svd(m);
    let top = s.first().copied().unwrap_or(0.0);
    let mut coef = u.transpose() * rhs;
    for (i, &si) in s.iter().enumerate() {
        coef[i] = if si > rcond * top { coef[i] / si } else { 0.0 };
    }
    v * coef
}

fn residual(cols: &[DVector<f64>], mut v: DVector<f64>) -> DVector<f64> {
    for c in cols {
        let proj = c.dot(&v);
        v.axpy(-proj, c, 1.0);
    }
    v
}

/// Frobenius inner product.
pub fn frobenius_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// `|| m^T m - I ||_max`, the orthonormality defect of the columns of `m`.
pub fn orthonormality_defect(m: &DMatrix<f64>) -> f64 {
    let g = m.transpose() * m;
    let k = g.nrows();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

/// Builds a dense matrix from row-major nested vectors.
pub fn from_rows(rows: &[Vec<f64>]) -> Option<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return None;
    }
    Some(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

/// Row-major nested vectors of a dense matrix.
pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Binomial coefficient as `usize` (small arguments only).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
