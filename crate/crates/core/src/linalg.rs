//! Minimal dense linear algebra: a square matrix type and a cyclic Jacobi
//! eigenvalue solver for symmetric matrices.
//!
//! This is deliberately small: the library only ever diagonalizes Kuramoto
//! Jacobians at modest N (validation oracles, CLI reports), where Jacobi
//! rotations converge to near machine precision in a handful of sweeps.

use crate::scalar::Real;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Real> SquareMatrix<R> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![R::zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> R {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: R) {
        self.data[i * self.n + j] = x;
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Accuracy is O(ε·‖A‖) per eigenvalue; only the (symmetric)
/// upper triangle is read.
pub fn symmetric_eigenvalues<R: Real>(a: &SquareMatrix<R>) -> Vec<R> {
    let n = a.n();
    let mut m = a.clone();
    // Frobenius norm sets the absolute convergence scale.
    let mut frob = R::zero();
    for i in 0..n {
        for j in 0..n {
            frob += m.get(i, j) * m.get(i, j);
        }
    }
    let frob = frob.sqrt();
    let tol = R::epsilon() * frob.max(R::one());

    for _sweep in 0..60 {
        let mut off = R::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += m.get(i, j) * m.get(i, j);
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq.abs() <= tol * R::lit(1e-3) {
                    continue;
                }
                // Rotation angle from the standard stable formulas.
                let theta = (m.get(q, q) - m.get(p, p)) / (R::lit(2.0) * apq);
                let t = {
                    let s = if theta >= R::zero() { R::one() } else { -R::one() };
                    s / (theta.abs() + (theta * theta + R::one()).sqrt())
                };
                let c = R::one() / (t * t + R::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }

    let mut eig: Vec<R> = (0..n).map(|i| m.get(i, i)).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    eig
}
