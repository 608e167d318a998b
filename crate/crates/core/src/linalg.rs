//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigenvalues of a general complex matrix (Schur form diagonal).
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let schur = m
        .clone()
        .try_schur(1e-15, 10_000)
        .expect("complex Schur iteration failed to converge");
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Right eigenvectors as the columns of `R`, unit 2-norm, with `A R = R Λ`.
///
/// Each eigenvector is the right singular vector of `A − λI` with the smallest
/// singular value; clusters of (numerically) repeated eigenvalues take as
/// many singular vectors as the cluster size.
pub fn eigen_decompose(m: &CMatrix) -> (Vec<Complex64>, CMatrix) {
    let n = m.nrows();
    let mut lambdas = eigenvalues(m);
    lambdas.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let cluster_tol = 1e-8 * scale;

    let mut vecs = CMatrix::zeros(n, n);
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && (lambdas[j] - lambdas[i]).norm() <= cluster_tol {
            j += 1;
        }
        let size = j - i;
        let center = lambdas[i..j].iter().sum::<Complex64>() / size as f64;
        let shifted = m - CMatrix::identity(n, n) * center;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested V^H");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        for (slot, &row) in order.iter().take(size).enumerate() {
            for r in 0..n {
                vecs[(r, i + slot)] = v_t[(row, r)].conj();
            }
        }
        i = j;
    }
    (lambdas, vecs)
}

/// 2-norm condition number.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Minimum-norm least-squares solution of `m x = b`. Returns
/// [`Error::SingularSystem`] when the system has no exact solution.
pub fn solve_min_norm(m: &CMatrix, b: &CVector) -> Result<CVector> {
    if let Some(x) = m.clone().lu().solve(b) {
        let residual = (m * &x - b).norm();
        if residual <= 1e-10 * (1.0 + b.norm()) && x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Ok(x);
        }
    }
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let svd = m.clone().svd(true, true);
    let x = svd
        .solve(b, 1e-12 * scale.max(1e-300))
        .map_err(|_| Error::SingularSystem { residual: f64::NAN })?;
    let residual = (m * &x - b).norm();
    if residual > 1e-9 * (1.0 + b.norm()) {
        return Err(Error::SingularSystem { residual });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenpairs_of_non_normal_matrix() {
        let m = CMatrix::from_row_slice(3, 3, &[
            c(1., 0.), c(2., 1.), c(0., 0.),
            c(0., 0.), c(-1., 0.5), c(3., 0.),
            c(0.2, 0.), c(0., 0.), c(0.5, -2.),
        ]);
        let (l, r) = eigen_decompose(&m);
        let resid = &m * &r - &r * CMatrix::from_diagonal(&CVector::from_vec(l.clone()));
        assert!(resid.norm() < 1e-12, "{resid}");
        let trace: Complex64 = l.iter().sum();
        assert!((trace - c(0.5, -1.5)).norm() < 1e-12);
    }

    #[test]
    fn repeated_eigenvalue_gets_independent_vectors() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(-1., 0.), c(-1., 0.), c(2., 0.)]));
        let (_, r) = eigen_decompose(&m);
        assert!(condition_number(&r) < 10.0);
    }

    #[test]
    fn min_norm_on_singular_consistent_system() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0., 0.), c(2., 0.)]));
        let x = solve_min_norm(&m, &CVector::from_vec(vec![c(0., 0.), c(4., 0.)])).unwrap();
        assert!((x[0]).norm() < 1e-14 && (x[1] - c(2., 0.)).norm() < 1e-14);
        let bad = solve_min_norm(&m, &CVector::from_vec(vec![c(1., 0.), c(4., 0.)]));
        assert!(matches!(bad, Err(Error::SingularSystem { .. })));
    }
}
