//! Sparse operators on the truncated two-mode Fock space.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Row-compressed sparse square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.rows[i].push((i, Complex64::from(1.0)));
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    fn push(&mut self, i: usize, j: usize, v: Complex64) {
        if v == Complex64::from(0.0) {
            return;
        }
        match self.rows[i].iter_mut().find(|(c, _)| *c == j) {
            Some(e) => e.1 += v,
            None => self.rows[i].push((j, v)),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i].iter().find(|(c, _)| *c == j).map_or(Complex64::from(0.0), |e| e.1)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out.push(j, i, v.conj());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Operator) -> Self {
        let mut out = Self::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(k, v) in row {
                for &(j, w) in &rhs.rows[k] {
                    out.push(i, j, v * w);
                }
            }
        }
        out
    }

    /// `Σ wₖ Oₖ`.
    pub fn combine(dim: usize, terms: &[(Complex64, &Operator)]) -> Self {
        let mut out = Self::zeros(dim);
        for (w, op) in terms {
            for (i, row) in op.rows.iter().enumerate() {
                for &(j, v) in row {
                    out.push(i, j, w * v);
                }
            }
        }
        out.rows.iter_mut().for_each(|r| r.retain(|e| e.1 != Complex64::from(0.0)));
        out
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// `out += w · (self · rho)`.
    pub fn apply_add(&self, w: Complex64, rho: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        let n = self.dim;
        let src = rho.as_slice();
        let dst = out.as_mut_slice();
        for (s, d) in src.chunks_exact(n).zip(dst.chunks_exact_mut(n)) {
            for (i, row) in self.rows.iter().enumerate() {
                let mut acc = Complex64::from(0.0);
                for &(j, v) in row {
                    acc += v * s[j];
                }
                d[i] += w * acc;
            }
        }
    }

    pub fn apply(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.dim, rho.ncols());
        self.apply_add(Complex64::from(1.0), rho, &mut out);
        out
    }

    /// `tr(self · rho)`.
    pub fn expectation(&self, rho: &DMatrix<Complex64>) -> Complex64 {
        let mut acc = Complex64::from(0.0);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                acc += v * rho[(j, i)];
            }
        }
        acc
    }
}

/// Ladder operators and the quadratures built from them, in the product basis
/// `|n_c, n_a⟩ ↦ n_c · cutoff_a + n_a`.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub cutoff_c: usize,
    pub cutoff_a: usize,
    pub c: Operator,
    pub a: Operator,
    pub n_c: Operator,
    pub n_a: Operator,
}

impl Ladder {
    pub fn new(cutoff_c: usize, cutoff_a: usize) -> Self {
        let dim = cutoff_c * cutoff_a;
        let mut c = Operator::zeros(dim);
        let mut a = Operator::zeros(dim);
        let mut n_c = Operator::zeros(dim);
        let mut n_a = Operator::zeros(dim);
        for n in 0..cutoff_c {
            for m in 0..cutoff_a {
                let k = n * cutoff_a + m;
                n_c.push(k, k, Complex64::from(n as f64));
                n_a.push(k, k, Complex64::from(m as f64));
                if n > 0 {
                    c.push(k - cutoff_a, k, Complex64::from((n as f64).sqrt()));
                }
                if m > 0 {
                    a.push(k - 1, k, Complex64::from((m as f64).sqrt()));
                }
            }
        }
        Self { cutoff_c, cutoff_a, c, a, n_c, n_a }
    }

    pub fn dim(&self) -> usize {
        self.cutoff_c * self.cutoff_a
    }

    pub fn index(&self, n_c: usize, n_a: usize) -> usize {
        n_c * self.cutoff_a + n_a
    }

    /// `c + c†`.
    pub fn x_c(&self) -> Operator {
        Operator::combine(self.dim(), &[(1.0.into(), &self.c), (1.0.into(), &self.c.adjoint())])
    }

    /// `i(c† − c)`.
    pub fn p_c(&self) -> Operator {
        let i = Complex64::i();
        Operator::combine(self.dim(), &[(i, &self.c.adjoint()), (-i, &self.c)])
    }

    /// `a + a†`.
    pub fn x_a(&self) -> Operator {
        Operator::combine(self.dim(), &[(1.0.into(), &self.a), (1.0.into(), &self.a.adjoint())])
    }

    /// `i(a† − a)`.
    pub fn p_a(&self) -> Operator {
        let i = Complex64::i();
        Operator::combine(self.dim(), &[(i, &self.a.adjoint()), (-i, &self.a)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_commutator_below_cutoff() {
        let l = Ladder::new(4, 3);
        let cd = l.c.adjoint();
        let comm = Operator::combine(l.dim(), &[(1.0.into(), &l.c.mul(&cd)), ((-1.0).into(), &cd.mul(&l.c))]);
        for n in 0..3 {
            for m in 0..3 {
                let k = l.index(n, m);
                assert!((comm.get(k, k) - 1.0).norm() < 1e-15);
            }
        }
        assert_eq!(l.n_a.get(l.index(2, 2), l.index(2, 2)), Complex64::from(2.0));
    }

    #[test]
    fn apply_matches_dense_product() {
        let l = Ladder::new(3, 3);
        let op = l.x_c().mul(&l.p_a());
        let rho = DMatrix::from_fn(9, 9, |i, j| Complex64::new(i as f64 - j as f64, (i * j) as f64 * 0.1));
        let dense = op.to_dense() * &rho;
        assert!((op.apply(&rho) - &dense).norm() < 1e-13);
        assert!((op.expectation(&rho) - dense.trace()).norm() < 1e-13);
    }
}
