//! Dense complex matrices and unrestarted GMRES.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Output of [`gmres_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySolution {
    pub values: Vec<Complex64>,
    pub iterations: usize,
    /// `||A x - b|| / ||b||`, recomputed from the returned iterate.
    pub final_residual: f64,
}

fn norm(v: &[Complex64]) -> f64 {
    math::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Conjugating inner product `<a, b> = sum conj(a_i) b_i`.
fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Unrestarted GMRES from a zero initial guess, modified Gram–Schmidt Arnoldi.
pub fn gmres_solve(op: &DenseMatrix, rhs: &[Complex64], tol: f64, maxit: usize) -> Result<DensitySolution> {
    if op.rows != op.cols || op.rows != rhs.len() {
        return Err(Error::InvalidParameter {
            name: "operator",
            reason: "operator must be square and match the right-hand side",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "gmres_tol",
            reason: "must be positive",
        });
    }
    let n = rhs.len();
    let bnorm = norm(rhs);
    if bnorm == 0.0 {
        return Ok(DensitySolution {
            values: vec![Complex64::new(0.0, 0.0); n],
            iterations: 0,
            final_residual: 0.0,
        });
    }
    let maxit = maxit.min(n).max(1);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(maxit + 1);
    basis.push(rhs.iter().map(|z| z / bnorm).collect());
    // Hessenberg columns, already rotated
    let mut hess: Vec<Vec<Complex64>> = Vec::with_capacity(maxit);
    let mut cs: Vec<f64> = Vec::with_capacity(maxit);
    let mut sn: Vec<Complex64> = Vec::with_capacity(maxit);
    let mut g = vec![Complex64::new(bnorm, 0.0)];
    let mut iterations = 0;
    let mut residual = 1.0;

    for j in 0..maxit {
        let mut w = op.matvec(&basis[j]);
        let mut h = Vec::with_capacity(j + 2);
        for v in basis.iter() {
            let hij = inner(v, &w);
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= hij * vi;
            }
            h.push(hij);
        }
        let hnext = norm(&w);
        h.push(Complex64::new(hnext, 0.0));

        for i in 0..j {
            let t = cs[i] * h[i] + sn[i] * h[i + 1];
            h[i + 1] = -sn[i].conj() * h[i] + cs[i] * h[i + 1];
            h[i] = t;
        }
        let (c, s) = givens(h[j], h[j + 1]);
        h[j] = c * h[j] + s * h[j + 1];
        h[j + 1] = Complex64::new(0.0, 0.0);
        cs.push(c);
        sn.push(s);
        let gj = g[j];
        g[j] = c * gj;
        g.push(-s.conj() * gj);
        hess.push(h);
        iterations = j + 1;
        residual = g[j + 1].norm() / bnorm;
        if residual <= tol || hnext <= 1e-14 * bnorm {
            break;
        }
        basis.push(w.iter().map(|z| z / hnext).collect());
    }

    // back substitution on the rotated triangle
    let m = iterations;
    let mut y = vec![Complex64::new(0.0, 0.0); m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for k in i + 1..m {
            acc -= hess[k][i] * y[k];
        }
        y[i] = acc / hess[i][i];
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for (k, yk) in y.iter().enumerate() {
        for (xi, vi) in x.iter_mut().zip(&basis[k]) {
            *xi += yk * vi;
        }
    }
    let ax = op.matvec(&x);
    let r: Vec<Complex64> = ax.iter().zip(rhs).map(|(a, b)| a - b).collect();
    let true_res = norm(&r) / bnorm;
    if residual > tol && true_res > tol {
        return Err(Error::NoConvergence {
            iterations,
            residual: true_res.min(residual),
        });
    }
    Ok(DensitySolution {
        values: x,
        iterations,
        final_residual: true_res,
    })
}

/// Rotation `[c s; -conj(s) c]` with real `c` that zeroes `b` against `a`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = math::hypot(an, bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_converges_in_one_step() {
        let b: Vec<Complex64> = (0..7).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let sol = gmres_solve(&DenseMatrix::identity(7), &b, 1e-10, 50).unwrap();
        assert_eq!(sol.iterations, 1);
        for (x, y) in sol.values.iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn solves_nonsymmetric_complex_system() {
        let n = 30;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = Complex64::new(((i * 7 + j * 3) % 11) as f64, ((i + 2 * j) % 5) as f64 - 2.0) / (n as f64);
                a.data[i * n + j] = v + if i == j { Complex64::new(2.0, 0.5) } else { Complex64::new(0.0, 0.0) };
            }
        }
        let xt: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64).sin(), (i as f64).cos())).collect();
        let b = a.matvec(&xt);
        let sol = gmres_solve(&a, &b, 1e-12, 100).unwrap();
        assert!(sol.final_residual <= 1e-12);
        for (x, y) in sol.values.iter().zip(&xt) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn reports_non_convergence() {
        let n = 20;
        let mut a = DenseMatrix::zeros(n, n);
        // cyclic shift: GMRES makes no progress until step n
        for i in 0..n {
            a.data[i * n + (i + 1) % n] = Complex64::new(1.0, 0.0);
        }
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[0] = Complex64::new(1.0, 0.0);
        match gmres_solve(&a, &b, 1e-8, 5) {
            Err(Error::NoConvergence { iterations, residual }) => {
                assert_eq!(iterations, 5);
                assert!(residual > 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
